#include "mubkit/mub.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <set>

using namespace mubkit;

namespace {

// Component formula evaluated with a literal loop over m = j, j-1, ..., -j kept as
// doubled integers: exponent of tau is (j+m)(j-m+1) a + 2 (j+m) n.
std::vector<int> literal_exponents(int d, int a, int n) {
  const int two_j = d - 1;
  std::vector<int> out;
  for (int two_m = two_j; two_m >= -two_j; two_m -= 2) {
    const long jpm = (two_j + two_m) / 2;          // j + m
    const long jmm1 = (two_j - two_m + 2) / 2;     // j - m + 1
    out.push_back(static_cast<int>(mod_floor(jpm * jmm1 * a + 2 * jpm * n, 2L * d)));
  }
  return out;
}

std::complex<double> expected_component(int d, int k) {
  return std::polar(1.0 / std::sqrt(double(d)), std::numbers::pi * k / d);
}

}  // namespace

TEST(BuildMubVector, ThreeDimensionalExamples) {
  // (q^2, q, 1)/sqrt(3) for a = 0, n = 1
  const auto v = build_mub_vector(3, 0, 1);
  EXPECT_EQ(v.exact->phases[0]->value(), 4);
  EXPECT_EQ(v.exact->phases[1]->value(), 2);
  EXPECT_EQ(v.exact->phases[2]->value(), 0);
  EXPECT_EQ(v.exact->scale_sqrt_dim, 1);
  // (q, q, 1)/sqrt(3) for a = 1, n = 0, eigenvalue q
  const auto w = build_mub_vector(3, 1, 0);
  EXPECT_EQ(w.exact->phases[0]->value(), 2);
  EXPECT_EQ(w.exact->phases[1]->value(), 2);
  EXPECT_EQ(w.exact->phases[2]->value(), 0);
  EXPECT_EQ(eigenvalue_exponent(3, 1, 0).value(), 2);
  const Eigen::VectorXcd image = build_v(3, 1).entries() * w.numeric;
  EXPECT_LT((image - std::polar(1.0, 2 * std::numbers::pi / 3) * w.numeric).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BuildMubVector, SpinHalfUsesHalfIntegerPowers) {
  // (i, 1)/sqrt(2)
  const auto v = build_mub_vector(2, 1, 0);
  EXPECT_LT(std::abs(v.numeric(0) - std::complex<double>(0, 1) / std::sqrt(2.0)), 1e-15);
  EXPECT_LT(std::abs(v.numeric(1) - 1.0 / std::sqrt(2.0)), 1e-15);
}

TEST(BuildMubVector, RangeErrors) {
  EXPECT_THROW(build_mub_vector(3, 3, 0), ParameterError);
  EXPECT_THROW(build_mub_vector(3, 0, -1), ParameterError);
}

TEST(BuildMubVector, ReindexedFormulaMatchesLiteralMLoop) {
  for (int d = 2; d <= 13; ++d)
    for (int a = 0; a < d; ++a)
      for (int n = 0; n < d; ++n) {
        const auto v = build_mub_vector(d, a, n);
        const auto lit = literal_exponents(d, a, n);
        for (int s = 0; s < d; ++s) {
          ASSERT_EQ(v.exact->phases[s]->value(), lit[s]) << d << " " << a << " " << n << " " << s;
          EXPECT_LT(std::abs(v.numeric(s) - expected_component(d, lit[s])), 1e-14);
        }
        if (d % 2 == 1) {
          for (int k : lit) EXPECT_EQ(k % 2, 0);
        }
      }
}

TEST(BuildMubVector, UnitNorm) {
  for (int d : {2, 3, 4, 5, 6, 7})
    for (int a = 0; a < d; ++a)
      for (int n = 0; n < d; ++n) EXPECT_NEAR(build_mub_vector(d, a, n).numeric.squaredNorm(), 1.0, 1e-12);
}

TEST(EigenRelation, ExactForPrimeDimensions) {
  for (int d : {2, 3, 5, 7, 11, 13})
    for (int a = 0; a < d; ++a)
      for (int n = 0; n < d; ++n) {
        const auto rep = eigen_relation(d, a, n);
        EXPECT_TRUE(rep.passed);
        EXPECT_TRUE(rep.exact_passed.value());
      }
}

TEST(Spectrum, NonDegenerate) {
  for (int d = 2; d <= 19; ++d)
    for (int a = 0; a < d; ++a) {
      std::set<int> seen;
      for (int n = 0; n < d; ++n) seen.insert(eigenvalue_exponent(d, a, n).value());
      EXPECT_EQ(seen.size(), static_cast<std::size_t>(d));
    }
}

TEST(BuildBasis, SpinHalfFlipEigenbasis) {
  const auto b = build_basis(2, 0);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_LT(std::abs(b.vectors[0].numeric(0) - r) + std::abs(b.vectors[0].numeric(1) - r), 1e-15);
  EXPECT_LT(std::abs(b.vectors[1].numeric(0) + r) + std::abs(b.vectors[1].numeric(1) - r), 1e-15);
}

TEST(BuildBasis, GramIdentityAndUnitaryColumns) {
  for (int d : {2, 3, 4, 5, 6, 7, 9, 11}) {
    for (int a = 0; a < d; ++a) {
      const auto b = build_basis(d, a);
      const auto rep = verify_unbiased(b, b);
      EXPECT_TRUE(rep.passed);
      if (is_prime(d)) {
        EXPECT_TRUE(rep.exact_passed.value());
      }
      const Eigen::MatrixXcd u = b.as_matrix();
      EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(CompleteSet, SmallPrimes) {
  for (int d : {2, 3}) {
    const auto set = build_complete_set(d);
    ASSERT_EQ(set.bases.size(), static_cast<std::size_t>(d + 1));
    const auto check = verify_set(set);
    EXPECT_TRUE(check.summary.passed);
    EXPECT_TRUE(check.summary.exact_passed.value());
    EXPECT_EQ(check.pairs.size(), static_cast<std::size_t>((d + 1) * (d + 2) / 2));
  }
  const auto set2 = build_complete_set(2);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      for (const auto& row : verify_unbiased(set2.bases[i], set2.bases[j]).overlap_table)
        for (double v : row) EXPECT_NEAR(v, 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(CompleteSet, CompositeRefusedUnlessForced) {
  EXPECT_THROW(build_complete_set(4), NotPrimeError);
  const auto forced = build_complete_set(4, true);
  EXPECT_FALSE(forced.complete_by_construction);
  EXPECT_EQ(forced.bases.size(), 5u);
}

TEST(VerifyUnbiased, SpinHalfOverlaps) {
  const auto rep = verify_unbiased(build_basis(2, 0), build_basis(2, 1));
  EXPECT_TRUE(rep.passed);
  EXPECT_TRUE(rep.exact_passed.value());
  // |1 +- i| / 2
  for (const auto& row : rep.overlap_table)
    for (double v : row) EXPECT_NEAR(v, std::abs(std::complex<double>(1, 1)) / 2, 1e-15);
}

TEST(VerifyUnbiased, DimensionMismatch) {
  EXPECT_THROW(verify_unbiased(build_basis(2, 0), build_basis(3, 0)), DimensionError);
}

TEST(VerifyUnbiased, SixDimensionalSetIsIncomplete) {
  // exhaustive overlap scan over all pairs of the forced set
  const auto set = build_complete_set(6, true);
  const double target = 1.0 / std::sqrt(6.0);
  double worst = 0.0;
  for (std::size_t i = 1; i < set.bases.size(); ++i)
    for (std::size_t j = i + 1; j < set.bases.size(); ++j) {
      const Eigen::MatrixXcd g = set.bases[i].as_matrix().adjoint() * set.bases[j].as_matrix();
      for (Eigen::Index r = 0; r < g.rows(); ++r)
        for (Eigen::Index c = 0; c < g.cols(); ++c) worst = std::max(worst, std::abs(std::abs(g(r, c)) - target));
    }
  EXPECT_GT(worst, 0.01);
  const auto check = verify_set(set);
  EXPECT_FALSE(check.summary.passed);
  ASSERT_TRUE(check.first_failure());
  // but every b_a stays unbiased to b_s
  for (std::size_t k = 1; k < set.bases.size(); ++k) EXPECT_TRUE(verify_unbiased(set.bases[0], set.bases[k]).passed);
}

TEST(VerifyUnbiased, ExactModeCatchesCorruptedPhase) {
  auto b = build_basis(5, 2);
  auto& ph = b.vectors[1].exact->phases[3];
  ph = *ph + PhaseExponent(2, 5);
  b.vectors[1].numeric = detail::shadow(*b.vectors[1].exact, 5);
  const auto rep = verify_unbiased(b, b);
  EXPECT_FALSE(rep.passed);
  EXPECT_FALSE(rep.exact_passed.value());
}

TEST(GaussSum, Examples) {
  // |1 + 2q| = sqrt(3) by a three-term evaluation
  const auto g = gauss_sum_magnitude(3, 1, 0, 0, 0);
  std::complex<double> oracle = 0;
  for (int k = 0; k < 3; ++k) oracle += std::polar(1.0, 2 * std::numbers::pi * (0.5 * k * (3 - k)) / 3);
  EXPECT_NEAR(g.magnitude, std::abs(oracle), 1e-12);
  EXPECT_NEAR(g.magnitude, std::sqrt(3.0), 1e-12);
  EXPECT_EQ(g.abs_squared.as_integer().value(), 3);

  const auto same = gauss_sum_magnitude(5, 2, 2, 3, 3);
  EXPECT_NEAR(same.magnitude, 5.0, 1e-12);
  EXPECT_EQ(same.abs_squared.as_integer().value(), 25);
  const auto off = gauss_sum_magnitude(5, 2, 2, 1, 3);
  EXPECT_NEAR(off.magnitude, 0.0, 1e-12);
  EXPECT_TRUE(off.sum.is_zero());
}

TEST(GaussSum, MatchesOverlapSums) {
  for (int d = 2; d <= 13; ++d)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Eigen::MatrixXcd g = build_basis(d, a).as_matrix().adjoint() * build_basis(d, b).as_matrix();
        for (int na = 0; na < d; ++na)
          for (int nb = 0; nb < d; ++nb)
            ASSERT_NEAR(d * std::abs(g(na, nb)), gauss_sum_magnitude(d, a, b, na, nb).magnitude, 1e-12)
                << d << " " << a << " " << b << " " << na << " " << nb;
      }
}

TEST(GaussSum, RuleFailsSomewhereForCompositeDimension) {
  bool any_fail = false;
  for (int a = 0; a < 6 && !any_fail; ++a)
    for (int b = 0; b < 6 && !any_fail; ++b)
      for (int na = 0; na < 6; ++na) {
        const auto g = gauss_sum_magnitude(6, a, b, na, 0);
        if (!sum_rule_holds(g, sum_rule_expected(6, a, b, na, 0))) any_fail = true;
      }
  EXPECT_TRUE(any_fail);
}

TEST(SphericalBasis, UnbiasedToEveryBaForAnyDimension) {
  for (int d : {4, 6, 8, 9, 10, 12}) {
    const auto s = spherical_basis(d);
    for (int a = 0; a < d; ++a) EXPECT_TRUE(verify_unbiased(s, build_basis(d, a)).passed) << d << " " << a;
  }
}
