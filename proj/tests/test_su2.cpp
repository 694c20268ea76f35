#include "mubkit/su2.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

using namespace mubkit;

namespace {

using Mat = Eigen::MatrixXcd;

// Textbook spin matrices in the |j,j>, |j,j-1>, ... order, real and positive.
Mat standard_j_plus(int two_j) {
  const int d = two_j + 1;
  const double j = 0.5 * two_j;
  Mat m = Mat::Zero(d, d);
  for (int s = 1; s < d; ++s) {
    const double mm = j - s;  // column |j, mm> goes to |j, mm + 1>
    m(s - 1, s) = std::sqrt(j * (j + 1) - mm * (mm + 1));
  }
  return m;
}

Mat standard_j_z(int two_j) {
  const int d = two_j + 1;
  Mat m = Mat::Zero(d, d);
  for (int s = 0; s < d; ++s) m(s, s) = 0.5 * two_j - s;
  return m;
}

}  // namespace

TEST(BuildH, Examples) {
  const auto h2 = build_h(2);
  EXPECT_NEAR(h2(0, 0).real(), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(h2(1, 1).real(), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(h2(2, 2), std::complex<double>(0, 0));
  const auto h1 = build_h(1);
  EXPECT_EQ(h1(0, 0), std::complex<double>(1, 0));
  EXPECT_EQ(h1(1, 1), std::complex<double>(0, 0));
  EXPECT_THROW(build_h(0), ParameterError);
}

TEST(BuildVaOperator, AgreesWithWeylShift) {
  for (int two_j = 1; two_j <= 10; ++two_j)
    for (int a = 0; a <= two_j; ++a)
      EXPECT_TRUE(build_va_operator(two_j, a).exact_equal(build_v(two_j + 1, a))) << two_j << " " << a;
  EXPECT_THROW(build_va_operator(2, 3), ParameterError);
}

TEST(Ladder, SpinHalf) {
  for (int a : {0, 1}) {
    const auto l = build_ladder(1, a);
    Mat jp = Mat::Zero(2, 2);
    jp(0, 1) = a == 0 ? 1.0 : -1.0;  // q = -1
    EXPECT_LT((l.j_plus.entries() - jp).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((l.j_minus.entries() - jp.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((l.j_z.entries() - standard_j_z(1)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Ladder, SpinOne) {
  const auto l = build_ladder(2, 1);
  EXPECT_LT((l.j_z.entries() - standard_j_z(2)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_EQ(l.twice_jz, (std::vector<long>{2, 0, -2}));
  // j+ |1,0> = q sqrt(2) |1,1>
  Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(3);
  ket(1) = 1.0;
  const Eigen::VectorXcd img = l.j_plus.entries() * ket;
  EXPECT_LT(std::abs(img(0) - std::polar(std::sqrt(2.0), 2 * std::numbers::pi / 3)), 1e-14);
  EXPECT_LT(std::abs(img(1)) + std::abs(img(2)), 1e-15);
}

TEST(Ladder, ModuliMatchTextbookSpinMatrices) {
  for (int two_j = 1; two_j <= 12; ++two_j)
    for (int a = 0; a <= two_j; ++a) {
      const auto l = build_ladder(two_j, a);
      const Mat ref = standard_j_plus(two_j);
      EXPECT_LT((l.j_plus.entries().cwiseAbs() - ref.cwiseAbs()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((l.j_z.entries() - standard_j_z(two_j)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(CheckSu2, AllSpinsUpToSix) {
  for (int two_j = 1; two_j <= 12; ++two_j)
    for (int a = 0; a <= two_j; ++a) {
      const auto rep = check_su2(two_j, a);
      EXPECT_TRUE(rep.passed) << two_j << " " << a;
      EXPECT_TRUE(rep.exact_passed.value());
      EXPECT_LT(rep.residual("casimir"), 1e-10);
    }
}

TEST(CheckSu2, CorruptedRaisingOperatorFails) {
  auto l = build_ladder(4, 2);
  Mat jp = l.j_plus.entries();
  jp(1, 2) *= std::polar(1.0, 0.3);
  l.j_plus = OperatorMatrix(jp);
  const auto rep = check_su2_matrices(l, 4);
  EXPECT_FALSE(rep.passed);
  EXPECT_GT(rep.residual("adjointness"), 0.1);
  ASSERT_FALSE(rep.notes.empty());
  EXPECT_NE(rep.notes.back().find("(1,2)"), std::string::npos);
}

TEST(CheckSu2, CorruptedIntegerDiagonalFailsExact) {
  auto l = build_ladder(3, 1);
  l.twice_jz[2] += 2;
  const auto rep = check_su2_matrices(l, 3);
  EXPECT_FALSE(rep.exact_passed.value());
  EXPECT_FALSE(rep.passed);
}

TEST(LadderAction, ClosedForms) {
  for (int two_j = 1; two_j <= 12; ++two_j)
    for (int a = 0; a <= two_j; ++a) {
      const auto rep = check_ladder_action(two_j, a);
      EXPECT_TRUE(rep.passed) << two_j << " " << a;
    }
}

TEST(LadderAction, TopStateIsAnnihilated) {
  for (int two_j : {1, 4, 7}) {
    const auto l = build_ladder(two_j, two_j / 2);
    EXPECT_LT(l.j_plus.entries().col(0).norm(), 1e-15);
    EXPECT_LT(l.j_minus.entries().col(two_j).norm(), 1e-15);
  }
}

TEST(Casimir, ScalarOnEveryState) {
  for (int two_j = 1; two_j <= 8; ++two_j) {
    const auto l = build_ladder(two_j, 1);
    const Mat c = l.j_plus.entries() * l.j_minus.entries() + l.j_z.entries() * l.j_z.entries() - l.j_z.entries();
    const double j = 0.5 * two_j;
    EXPECT_LT((c - j * (j + 1) * Mat::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(AngularParams, Validation) {
  EXPECT_THROW((AngularParams{0, 0}.validate()), ParameterError);
  EXPECT_THROW((AngularParams{3, 4}.validate()), ParameterError);
  EXPECT_NO_THROW((AngularParams{7, 3}.validate()));
  EXPECT_EQ((AngularParams{7, 3}.dim()), 8);
}
