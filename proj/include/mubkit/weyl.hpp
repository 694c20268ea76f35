#pragma once

// Generator matrices V_a and Z, the T_m monomials and their algebraic
// relations (trace orthogonality, q-commutation, the trigonometric FFZ
// commutator).
//
// Row/column k corresponds to |j, j-k>, i.e. the angular-momentum basis
// listed from m = j down to m = -j.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mubkit/cyclo.hpp"
#include "mubkit/errors.hpp"
#include "mubkit/report.hpp"

namespace mubkit {

using ExactEntry = std::optional<PhaseExponent>;

/// Dense complex matrix. When every entry is zero or a single power of tau
/// (tau = exp(i*pi/phase_dim)), the matrix also carries that exact
/// annotation and products/tensor products keep it alive.
class OperatorMatrix {
 public:
  OperatorMatrix() = default;

  explicit OperatorMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) throw DimensionError("OperatorMatrix: not square");
  }

  /// Builds the matrix from its exact annotation; numeric entries are the
  /// shadows of the annotation.
  static OperatorMatrix from_exact(int dim, int phase_dim, std::vector<ExactEntry> grid) {
    if (grid.size() != static_cast<std::size_t>(dim) * dim)
      throw DimensionError("OperatorMatrix: exact grid has wrong size");
    OperatorMatrix m;
    m.entries_ = Eigen::MatrixXcd::Zero(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) {
        const auto& e = grid[static_cast<std::size_t>(r) * dim + c];
        if (!e) continue;
        if (e->dim() != phase_dim) throw DimensionError("OperatorMatrix: mixed phase moduli");
        m.entries_(r, c) = e->evaluate();
      }
    m.phase_dim_ = phase_dim;
    m.exact_ = std::move(grid);
    return m;
  }

  static OperatorMatrix identity(int dim, int phase_dim) {
    std::vector<ExactEntry> g(static_cast<std::size_t>(dim) * dim);
    for (int k = 0; k < dim; ++k) g[static_cast<std::size_t>(k) * dim + k] = PhaseExponent(0, phase_dim);
    return from_exact(dim, phase_dim, std::move(g));
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  Complex operator()(int r, int c) const { return entries_(r, c); }

  bool has_exact() const { return exact_.has_value(); }
  int phase_dim() const { return phase_dim_; }
  const ExactEntry& exact_at(int r, int c) const {
    return (*exact_)[static_cast<std::size_t>(r) * dim() + c];
  }
  const std::vector<ExactEntry>& exact_grid() const { return *exact_; }

  /// Drops exact data (e.g. after a numeric-only edit).
  OperatorMatrix numeric_only() const { return OperatorMatrix(entries_); }

  OperatorMatrix adjoint() const {
    if (!has_exact()) return OperatorMatrix(entries_.adjoint());
    const int n = dim();
    std::vector<ExactEntry> g(exact_->size());
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        if (const auto& e = exact_at(r, c)) g[static_cast<std::size_t>(c) * n + r] = -*e;
    return from_exact(n, phase_dim_, std::move(g));
  }

  /// Multiplies by tau^k exactly.
  OperatorMatrix phased(const PhaseExponent& k) const {
    if (!has_exact()) return OperatorMatrix(entries_ * k.evaluate());
    std::vector<ExactEntry> g(exact_->size());
    for (std::size_t i = 0; i < g.size(); ++i)
      if ((*exact_)[i]) g[i] = *(*exact_)[i] + k;
    return from_exact(dim(), phase_dim_, std::move(g));
  }

  // The exact annotation survives a product only while every output entry
  // is a single term.
  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("OperatorMatrix: product of mismatched sizes");
    if (!a.has_exact() || !b.has_exact() || a.phase_dim_ != b.phase_dim_)
      return OperatorMatrix(a.entries_ * b.entries_);
    const int n = a.dim();
    std::vector<ExactEntry> g(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
      for (int k = 0; k < n; ++k) {
        const auto& x = a.exact_at(r, k);
        if (!x) continue;
        for (int c = 0; c < n; ++c) {
          const auto& y = b.exact_at(k, c);
          if (!y) continue;
          auto& slot = g[static_cast<std::size_t>(r) * n + c];
          if (slot) return OperatorMatrix(a.entries_ * b.entries_);
          slot = *x + *y;
        }
      }
    return from_exact(n, a.phase_dim_, std::move(g));
  }

  /// Exact trace as a cyclotomic sum; requires the exact annotation.
  CyclotomicSum trace_exact() const {
    if (!has_exact()) throw ParameterError("trace_exact: matrix has no exact annotation");
    CyclotomicSum s(phase_dim_);
    for (int k = 0; k < dim(); ++k)
      if (const auto& e = exact_at(k, k)) s.add_term(e->value(), 1);
    return reduce(s.coeffs(), phase_dim_);
  }

  bool exact_equal(const OperatorMatrix& o) const {
    return has_exact() && o.has_exact() && phase_dim_ == o.phase_dim_ && *exact_ == *o.exact_;
  }

  bool is_unitary(double tol = kDefaultTolerance) const {
    const auto n = entries_.rows();
    return (entries_ * entries_.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < tol;
  }

 private:
  Eigen::MatrixXcd entries_;
  std::optional<std::vector<ExactEntry>> exact_;
  int phase_dim_ = 0;
};

/// Largest entry modulus (the max-entry norm used by every residual here).
inline double max_entry(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline Eigen::MatrixXcd commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a.entries() * b.entries() - b.entries() * a.entries();
}

/// Exact Kronecker product; the left factor indexes the most significant digit.
inline OperatorMatrix kron(const OperatorMatrix& a, const OperatorMatrix& b) {
  const int na = a.dim(), nb = b.dim(), n = na * nb;
  if (a.has_exact() && b.has_exact() && a.phase_dim() == b.phase_dim()) {
    std::vector<ExactEntry> g(static_cast<std::size_t>(n) * n);
    for (int r1 = 0; r1 < na; ++r1)
      for (int c1 = 0; c1 < na; ++c1) {
        const auto& x = a.exact_at(r1, c1);
        if (!x) continue;
        for (int r2 = 0; r2 < nb; ++r2)
          for (int c2 = 0; c2 < nb; ++c2)
            if (const auto& y = b.exact_at(r2, c2))
              g[static_cast<std::size_t>(r1 * nb + r2) * n + (c1 * nb + c2)] = *x + *y;
      }
    return OperatorMatrix::from_exact(n, a.phase_dim(), std::move(g));
  }
  Eigen::MatrixXcd m(n, n);
  for (int r1 = 0; r1 < na; ++r1)
    for (int c1 = 0; c1 < na; ++c1) m.block(r1 * nb, c1 * nb, nb, nb) = a(r1, c1) * b.entries();
  return OperatorMatrix(std::move(m));
}

/// Exact power by repeated multiplication.
inline OperatorMatrix matrix_power(const OperatorMatrix& m, int k) {
  if (k < 0) throw ParameterError("matrix_power: negative exponent");
  OperatorMatrix acc = m.has_exact() ? OperatorMatrix::identity(m.dim(), m.phase_dim())
                                     : OperatorMatrix(Eigen::MatrixXcd::Identity(m.dim(), m.dim()));
  for (int i = 0; i < k; ++i) acc = acc * m;
  return acc;
}

namespace detail {
inline void check_dim(int d) {
  if (d < 2) throw ParameterError("dimension must be >= 2, got " + std::to_string(d));
}
inline void check_param(int d, int a, const char* name) {
  if (a < 0 || a >= d)
    throw ParameterError(std::string(name) + " must lie in 0.." + std::to_string(d - 1) + ", got " +
                         std::to_string(a));
}
}  // namespace detail

/// V_a: superdiagonal (k, k+1) = q^{(k+1)a}, corner (d-1, 0) = 1.
inline OperatorMatrix build_v(int d, int a) {
  detail::check_dim(d);
  detail::check_param(d, a, "a");
  std::vector<ExactEntry> g(static_cast<std::size_t>(d) * d);
  for (int k = 0; k + 1 < d; ++k)
    g[static_cast<std::size_t>(k) * d + (k + 1)] = PhaseExponent::from_q_power(static_cast<long>(k + 1) * a, d);
  g[static_cast<std::size_t>(d - 1) * d] = PhaseExponent(0, d);
  return OperatorMatrix::from_exact(d, d, std::move(g));
}

/// Z = diag(1, q, ..., q^{d-1}).
inline OperatorMatrix build_z(int d) {
  detail::check_dim(d);
  std::vector<ExactEntry> g(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k) g[static_cast<std::size_t>(k) * d + k] = PhaseExponent::from_q_power(k, d);
  return OperatorMatrix::from_exact(d, d, std::move(g));
}

/// chi^a = (1, q^a, ..., q^{(d-1)a}) as tau exponents.
inline std::vector<PhaseExponent> character_vector(int d, int a) {
  detail::check_dim(d);
  detail::check_param(d, a, "a");
  std::vector<PhaseExponent> chi;
  chi.reserve(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) chi.push_back(PhaseExponent::from_q_power(static_cast<long>(k) * a, d));
  return chi;
}

struct WedgeIndex {
  int m1 = 0;
  int m2 = 0;

  friend WedgeIndex operator+(WedgeIndex a, WedgeIndex b) { return {a.m1 + b.m1, a.m2 + b.m2}; }
  friend bool operator==(WedgeIndex, WedgeIndex) = default;
};

/// Tensor Weyl operator label: slot i carries V^{x_i} Z^{z_i} in dimension p.
struct WeylLabel {
  int p = 2;
  int e = 1;
  std::vector<int> x;
  std::vector<int> z;

  bool is_identity() const {
    for (int i = 0; i < e; ++i)
      if (x[i] != 0 || z[i] != 0) return false;
    return true;
  }

  std::string str() const {
    std::string s = "x=(";
    for (int i = 0; i < e; ++i) s += (i ? "," : "") + std::to_string(x[i]);
    s += ") z=(";
    for (int i = 0; i < e; ++i) s += (i ? "," : "") + std::to_string(z[i]);
    return s + ")";
  }

  friend bool operator==(const WeylLabel&, const WeylLabel&) = default;
  friend auto operator<=>(const WeylLabel& a, const WeylLabel& b) {
    if (auto c = a.x <=> b.x; c != 0) return c;
    return a.z <=> b.z;
  }
};

/// m ^ n = m1 n2 - m2 n1.
inline long wedge(WedgeIndex m, WedgeIndex n) {
  return static_cast<long>(m.m1) * n.m2 - static_cast<long>(m.m2) * n.m1;
}

/// T_m = q^{sign * m1 m2 / 2} V_a^{m1} Z^{m2}; q^{1/2} = tau keeps the
/// prefactor exact.
inline OperatorMatrix build_t(int d, int a, WedgeIndex m, int sign_convention) {
  detail::check_dim(d);
  if (m.m1 < 0 || m.m2 < 0) throw ParameterError("build_t: index components must be >= 0");
  if (sign_convention != 1 && sign_convention != -1) throw ParameterError("build_t: sign must be +1 or -1");
  const auto prod = matrix_power(build_v(d, a), m.m1) * matrix_power(build_z(d), m.m2);
  return prod.phased(PhaseExponent(static_cast<long>(sign_convention) * m.m1 * m.m2, d));
}

/// V_a Z - q Z V_a, with an exact comparison of the two monomial products.
inline VerificationReport q_commutation_residual(int d, int a, double tol = kDefaultTolerance) {
  const auto v = build_v(d, a);
  const auto z = build_z(d);
  const auto vz = v * z;
  const auto qzv = (z * v).phased(PhaseExponent::from_q_power(1, d));
  VerificationReport rep;
  rep.check = "q_commutation";
  rep.tolerance = tol;
  rep.add_residual("vz_minus_qzv", max_entry(vz.entries() - qzv.entries()));
  rep.exact_passed = vz.exact_equal(qzv);
  if (!*rep.exact_passed) rep.fail_exact("exact annotations of V_a Z and q Z V_a differ");
  return rep;
}

/// Max-entry residual of [T_m, T_n] - 2i sin(pi (m^n) / d) T_{m+n}.
inline double ffz_residual(const OperatorMatrix& tm, const OperatorMatrix& tn, const OperatorMatrix& tmn,
                           long wedge_value, int d) {
  const double s = std::sin(std::numbers::pi * static_cast<double>(wedge_value) / d);
  return max_entry(commutator(tm, tn) - Complex(0.0, 2.0 * s) * tmn.entries());
}

inline VerificationReport ffz_commutator_residual(int d, int a, WedgeIndex m, WedgeIndex n, int sign_convention,
                                                  double tol = kDefaultTolerance) {
  VerificationReport rep;
  rep.check = "ffz_commutator";
  rep.tolerance = tol;
  rep.add_residual("commutator",
                   ffz_residual(build_t(d, a, m, sign_convention), build_t(d, a, n, sign_convention),
                                build_t(d, a, m + n, sign_convention), wedge(m, n), d));
  rep.notes.push_back("sign_convention=" + std::to_string(sign_convention));
  return rep;
}

/// T_m for every m with components below `bound`, built once per (d, a).
class TMonomialTable {
 public:
  TMonomialTable(int d, int a, int bound, int sign_convention) : d_(d), bound_(bound) {
    const auto v = build_v(d, a);
    const auto z = build_z(d);
    std::vector<OperatorMatrix> vpow{OperatorMatrix::identity(d, d)}, zpow{OperatorMatrix::identity(d, d)};
    for (int k = 1; k < bound; ++k) {
      vpow.push_back(vpow.back() * v);
      zpow.push_back(zpow.back() * z);
    }
    table_.reserve(static_cast<std::size_t>(bound) * bound);
    for (int m1 = 0; m1 < bound; ++m1)
      for (int m2 = 0; m2 < bound; ++m2)
        table_.push_back((vpow[m1] * zpow[m2]).phased(PhaseExponent(static_cast<long>(sign_convention) * m1 * m2, d)));
  }

  int bound() const { return bound_; }
  int dim() const { return d_; }
  const OperatorMatrix& at(WedgeIndex m) const {
    return table_[static_cast<std::size_t>(m.m1) * bound_ + m.m2];
  }

 private:
  int d_;
  int bound_;
  std::vector<OperatorMatrix> table_;
};

/// Runs the commutator identity for all m, n with components in
/// [0, max_m). T_{m+n} is built directly, never reduced modulo V^d.
inline VerificationReport ffz_sweep(int d, int a, int max_m, int sign_convention, double tol = kDefaultTolerance) {
  if (max_m < 1) throw ParameterError("ffz_sweep: bound must be >= 1");
  const TMonomialTable table(d, a, 2 * max_m - 1, sign_convention);
  VerificationReport rep;
  rep.check = "ffz_sweep";
  rep.tolerance = tol;
  double worst = 0.0;
  long failures = 0;
  for (int m1 = 0; m1 < max_m; ++m1)
    for (int m2 = 0; m2 < max_m; ++m2)
      for (int n1 = 0; n1 < max_m; ++n1)
        for (int n2 = 0; n2 < max_m; ++n2) {
          const WedgeIndex m{m1, m2}, n{n1, n2};
          const double r = ffz_residual(table.at(m), table.at(n), table.at(m + n), wedge(m, n), d);
          if (!(r < tol)) {
            if (failures++ < 5)
              rep.notes.push_back("failure at m=(" + std::to_string(m1) + "," + std::to_string(m2) + ") n=(" +
                                  std::to_string(n1) + "," + std::to_string(n2) + ")");
          }
          worst = std::max(worst, r);
        }
  rep.add_residual("commutator", worst);
  rep.residuals.emplace_back("failures", static_cast<double>(failures));
  rep.notes.push_back("sign_convention=" + std::to_string(sign_convention));
  rep.notes.push_back("index components in 0.." + std::to_string(max_m - 1) + " (zero included)");
  return rep;
}

/// Oracle selection of the T_m prefactor sign: brute force at d = 3,
/// a = 0 over m, n in {0,1,2}^2. Returns the unique sign that passes.
inline int select_ffz_convention(double tol = kDefaultTolerance) {
  int chosen = 0;
  for (int sign : {1, -1})
    if (ffz_sweep(3, 0, 3, sign, tol).passed) {
      if (chosen != 0) throw ConstructionFailedError("FFZ convention selection is ambiguous");
      chosen = sign;
    }
  if (chosen == 0) throw ConstructionFailedError("no FFZ sign convention satisfies the commutator identity");
  return chosen;
}

/// Tr(V_a^dagger V_b) computed exactly.
inline CyclotomicSum trace_overlap(int d, int a, int b) { return (build_v(d, a).adjoint() * build_v(d, b)).trace_exact(); }

}  // namespace mubkit
