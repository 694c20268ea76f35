#pragma once

// Eigenvectors of V_a in closed form, complete sets of mutually unbiased
// bases for prime d, the unbiasedness verifier, and the Gauss sum rule.
//
// Storage index s runs over |j,j>, |j,j-1>, ..., |j,-j>. With t = j + m =
// d - 1 - s, the component of |j a n> at s is q^{t(d-t)a/2 + t n} / sqrt(d),
// i.e. tau^{t(d-t)a + 2tn} / sqrt(d).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mubkit/cyclo.hpp"
#include "mubkit/errors.hpp"
#include "mubkit/report.hpp"
#include "mubkit/weyl.hpp"

namespace mubkit {

struct BasisLabel {
  enum class Kind { spherical, parameter, commuting_class };

  Kind kind = Kind::spherical;
  int value = 0;

  static BasisLabel spherical() { return {Kind::spherical, 0}; }
  static BasisLabel parameter(int a) { return {Kind::parameter, a}; }
  static BasisLabel commuting_class(int id) { return {Kind::commuting_class, id}; }

  std::string str() const {
    switch (kind) {
      case Kind::spherical: return "s";
      case Kind::parameter: return std::to_string(value);
      case Kind::commuting_class: return "class:" + std::to_string(value);
    }
    return "?";
  }

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

/// Exact components tau^{k_s} / dim^{scale_sqrt_dim / 2}; nullopt is zero.
struct ExactAmplitudes {
  int scale_sqrt_dim = 0;
  std::vector<ExactEntry> phases;
};

struct MubVector {
  int dim = 0;
  int index = 0;  // n_alpha within its basis
  Eigen::VectorXcd numeric;
  std::optional<ExactAmplitudes> exact;
};

struct MubBasis {
  int dim = 0;
  BasisLabel label;
  std::vector<MubVector> vectors;
  // Generators of the commuting class this basis diagonalizes, when any.
  std::vector<WeylLabel> members;

  bool has_exact() const {
    for (const auto& v : vectors)
      if (!v.exact) return false;
    return !vectors.empty();
  }

  /// Columns are the basis vectors.
  Eigen::MatrixXcd as_matrix() const {
    Eigen::MatrixXcd m(dim, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = vectors[k].numeric;
    return m;
  }
};

struct MubSet {
  int dim = 0;
  std::vector<MubBasis> bases;
  bool complete_by_construction = true;
  std::vector<std::string> notes;

  bool has_exact() const {
    for (const auto& b : bases)
      if (!b.has_exact()) return false;
    return !bases.empty();
  }
};

namespace detail {
inline Eigen::VectorXcd shadow(const ExactAmplitudes& amp, int dim) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(amp.phases.size()));
  const double scale = std::pow(static_cast<double>(dim), -0.5 * amp.scale_sqrt_dim);
  for (std::size_t s = 0; s < amp.phases.size(); ++s)
    if (amp.phases[s]) v(static_cast<Eigen::Index>(s)) = amp.phases[s]->evaluate() * scale;
  return v;
}
}  // namespace detail

inline MubVector make_exact_vector(int dim, int index, ExactAmplitudes amp) {
  MubVector v;
  v.dim = dim;
  v.index = index;
  v.numeric = detail::shadow(amp, dim);
  v.exact = std::move(amp);
  return v;
}

/// Tau exponent of component s of |j a n>.
inline long mub_component_exponent(int d, int a, int n, int s) {
  const long t = d - 1 - s;
  return t * (d - t) * a + 2 * t * n;
}

/// Exponent of the eigenvalue q^{ja - n} = tau^{(d-1)a - 2n}.
inline PhaseExponent eigenvalue_exponent(int d, int a, int n) {
  return PhaseExponent(static_cast<long>(d - 1) * a - 2L * n, d);
}

inline MubVector build_mub_vector(int d, int a, int n) {
  detail::check_dim(d);
  detail::check_param(d, a, "a");
  detail::check_param(d, n, "n");
  ExactAmplitudes amp;
  amp.scale_sqrt_dim = 1;
  amp.phases.reserve(static_cast<std::size_t>(d));
  for (int s = 0; s < d; ++s) {
    const long k = mub_component_exponent(d, a, n, s);
    // t(d-t) is even for odd d, so no half-integer power of q appears.
    if (d % 2 == 1 && k % 2 != 0) throw ConstructionFailedError("odd tau exponent in odd dimension");
    amp.phases.emplace_back(PhaseExponent(k, d));
  }
  return make_exact_vector(d, n, std::move(amp));
}

inline MubBasis build_basis(int d, int a) {
  detail::check_dim(d);
  detail::check_param(d, a, "a");
  MubBasis b;
  b.dim = d;
  b.label = BasisLabel::parameter(a);
  for (int n = 0; n < d; ++n) b.vectors.push_back(build_mub_vector(d, a, n));
  return b;
}

/// Identity columns |j, j-s>.
inline MubBasis spherical_basis(int d) {
  if (d < 1) throw ParameterError("spherical_basis: dimension must be positive");
  MubBasis b;
  b.dim = d;
  b.label = BasisLabel::spherical();
  for (int s = 0; s < d; ++s) {
    ExactAmplitudes amp;
    amp.phases.resize(static_cast<std::size_t>(d));
    amp.phases[static_cast<std::size_t>(s)] = PhaseExponent(0, d);
    b.vectors.push_back(make_exact_vector(d, s, std::move(amp)));
  }
  return b;
}

/// b_s plus b_0 .. b_{d-1}. Composite d is refused unless `force` is set,
/// in which case the result is marked incomplete.
inline MubSet build_complete_set(int d, bool force = false) {
  detail::check_dim(d);
  if (!is_prime(d) && !force)
    throw NotPrimeError("dimension " + std::to_string(d) +
                        " is not prime: the V_a eigenbases do not give a complete set of mutually unbiased "
                        "bases there (use force to build them anyway)");
  MubSet set;
  set.dim = d;
  set.bases.push_back(spherical_basis(d));
  for (int a = 0; a < d; ++a) set.bases.push_back(build_basis(d, a));
  if (!is_prime(d)) {
    set.complete_by_construction = false;
    set.notes.push_back("not complete by construction: dimension " + std::to_string(d) + " is not prime");
  }
  return set;
}

/// V_a * v == lambda * v, checked exactly on exponents and numerically.
inline VerificationReport eigen_relation(int d, int a, int n, double tol = kDefaultTolerance) {
  const auto v = build_v(d, a);
  const auto vec = build_mub_vector(d, a, n);
  const auto lambda = eigenvalue_exponent(d, a, n);
  VerificationReport rep;
  rep.check = "eigen_relation";
  rep.tolerance = tol;
  rep.add_residual("numeric", (v.entries() * vec.numeric - lambda.evaluate() * vec.numeric).cwiseAbs().maxCoeff());
  rep.exact_passed = true;
  const auto& ph = vec.exact->phases;
  for (int r = 0; r < d; ++r) {
    std::optional<PhaseExponent> image;
    for (int c = 0; c < d; ++c)
      if (const auto& e = v.exact_at(r, c)) image = *e + *ph[static_cast<std::size_t>(c)];
    if (!image || *image != lambda + *ph[static_cast<std::size_t>(r)]) {
      rep.fail_exact("exponent mismatch at row " + std::to_string(r));
      break;
    }
  }
  return rep;
}

/// Sum_s conj(u_s) v_s over tau exponents, without the amplitude scales.
inline CyclotomicSum scaled_overlap(const MubVector& u, const MubVector& v, int dim) {
  CyclotomicSum acc(dim);
  const auto& pu = u.exact->phases;
  const auto& pv = v.exact->phases;
  for (std::size_t s = 0; s < pu.size(); ++s)
    if (pu[s] && pv[s]) acc.add_term(static_cast<long>(pv[s]->value()) - pu[s]->value(), 1);
  return reduce(acc.coeffs(), dim);
}

inline std::int64_t int_pow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

/// Same label: Gram matrix must be the identity. Different labels: every
/// overlap modulus must equal 1/sqrt(d). In exact mode the scaled overlap
/// sums are compared in Z[tau]; composite d forces the numeric route.
inline VerificationReport verify_unbiased(const MubBasis& A, const MubBasis& B, double tol = kDefaultTolerance) {
  if (A.dim != B.dim || A.vectors.size() != B.vectors.size())
    throw DimensionError("verify_unbiased: bases of different dimension");
  const int d = A.dim;
  const bool same = A.label == B.label;
  VerificationReport rep;
  rep.check = same ? "orthonormality" : "unbiasedness";
  rep.tolerance = tol;

  const Eigen::MatrixXcd gram = A.as_matrix().adjoint() * B.as_matrix();
  const double target = 1.0 / std::sqrt(static_cast<double>(d));
  double worst = 0.0;
  rep.overlap_table.assign(A.vectors.size(), std::vector<double>(B.vectors.size()));
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      const double mod = std::abs(gram(i, j));
      rep.overlap_table[i][j] = mod;
      const double dev = same ? std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) : std::abs(mod - target);
      worst = std::max(worst, dev);
    }
  rep.add_residual("max_deviation", worst);

  if (A.has_exact() && B.has_exact()) {
    if (!is_prime(d)) {
      rep.notes.push_back("exact equality unavailable for composite dimension; numeric comparison used");
      return rep;
    }
    rep.exact_passed = true;
    for (std::size_t i = 0; i < A.vectors.size() && *rep.exact_passed; ++i)
      for (std::size_t j = 0; j < B.vectors.size(); ++j) {
        const auto& u = A.vectors[i];
        const auto& v = B.vectors[j];
        const int su = u.exact->scale_sqrt_dim, sv = v.exact->scale_sqrt_dim;
        const auto s = scaled_overlap(u, v, d);
        bool ok = false;
        if (same) {
          // <u|v> = s / d^{su}; identity requires s == d^{su} or 0.
          ok = su == sv && s == CyclotomicSum::integer(i == j ? int_pow(d, su) : 0, d);
        } else {
          const auto mag2 = abs_squared_exact(s).as_integer();
          ok = su + sv >= 1 && mag2 && *mag2 == int_pow(d, su + sv - 1);
        }
        if (!ok) {
          rep.fail_exact("exact check failed at (" + std::to_string(i) + "," + std::to_string(j) + ")");
          break;
        }
      }
  }
  return rep;
}

struct PairOutcome {
  std::size_t first = 0;
  std::size_t second = 0;
  bool passed = true;
  std::optional<bool> exact_passed;
  double max_deviation = 0.0;
};

struct SetVerification {
  VerificationReport summary;
  std::vector<PairOutcome> pairs;

  std::optional<PairOutcome> first_failure() const {
    for (const auto& p : pairs)
      if (!p.passed) return p;
    return std::nullopt;
  }
};

/// Every basis against itself and against every other basis.
inline SetVerification verify_set(const MubSet& set, double tol = kDefaultTolerance) {
  SetVerification out;
  out.summary.check = "mub_set";
  out.summary.tolerance = tol;
  double worst_cross = 0.0, worst_self = 0.0;
  bool all_exact = true, any_exact = false;
  long failing = 0;
  for (std::size_t i = 0; i < set.bases.size(); ++i)
    for (std::size_t j = i; j < set.bases.size(); ++j) {
      const auto rep = verify_unbiased(set.bases[i], set.bases[j], tol);
      PairOutcome p{i, j, rep.passed, rep.exact_passed, rep.max_residual};
      if (i == j)
        worst_self = std::max(worst_self, rep.max_residual);
      else
        worst_cross = std::max(worst_cross, rep.max_residual);
      if (rep.exact_passed) {
        any_exact = true;
        all_exact = all_exact && *rep.exact_passed;
      }
      if (!rep.passed) {
        ++failing;
        if (failing <= 10)
          out.summary.notes.push_back("pair (" + set.bases[i].label.str() + ", " + set.bases[j].label.str() +
                                      ") fails with deviation " + std::to_string(rep.max_residual));
      }
      out.pairs.push_back(p);
    }
  out.summary.add_residual("orthonormality", worst_self);
  out.summary.add_residual("unbiasedness", worst_cross);
  out.summary.residuals.emplace_back("failing_pairs", static_cast<double>(failing));
  if (any_exact) out.summary.exact_passed = all_exact;
  if (any_exact && !all_exact) out.summary.passed = false;
  if (!set.complete_by_construction) out.summary.notes.push_back("set is not complete by construction");
  return out;
}

struct GaussSum {
  CyclotomicSum sum;
  CyclotomicSum abs_squared;
  double magnitude = 0.0;
};

/// Sum_k q^{k(d-k)(a-b)/2 + k(n_alpha - n_beta)}.
inline GaussSum gauss_sum_magnitude(int d, int a, int b, int n_alpha, int n_beta) {
  detail::check_dim(d);
  for (int v : {a, b, n_alpha, n_beta}) detail::check_param(d, v, "index");
  CyclotomicSum raw(d);
  for (long k = 0; k < d; ++k) raw.add_term(k * (d - k) * (a - b) + 2 * k * (n_alpha - n_beta), 1);
  auto sum = reduce(raw.coeffs(), d);
  auto mag2 = abs_squared_exact(sum);
  const double magnitude = std::abs(sum.evaluate());
  return {std::move(sum), std::move(mag2), magnitude};
}

/// Squared magnitude the sum rule predicts: d^2, 0 or d.
inline std::int64_t sum_rule_expected(int d, int a, int b, int n_alpha, int n_beta) {
  if (a != b) return d;
  return n_alpha == n_beta ? static_cast<std::int64_t>(d) * d : 0;
}

/// Exact for prime d, numeric at tol for composite d.
inline bool sum_rule_holds(const GaussSum& g, std::int64_t expected, double tol = kDefaultTolerance) {
  if (g.abs_squared.exact_supported()) {
    const auto n = g.abs_squared.as_integer();
    return n && *n == expected;
  }
  return std::abs(g.magnitude * g.magnitude - static_cast<double>(expected)) < tol;
}

}  // namespace mubkit
