#pragma once

// Complete sets in prime-power dimension d = p^e. Tensor Weyl operators
// W = (x) V_{a_i}^{x_i} Z^{z_i} are grouped into p^e + 1 commuting classes
// of p^e - 1 members each; the joint eigenbasis of each class is one basis
// of the set. Z-type slots are the extra operators needed to lift the
// degeneracy of pure V tensor products.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "mubkit/cyclo.hpp"
#include "mubkit/errors.hpp"
#include "mubkit/mub.hpp"
#include "mubkit/weyl.hpp"

namespace mubkit {

inline constexpr int kMaxCompositeDim = 128;

struct CommutingClass {
  int id = 0;
  std::vector<WeylLabel> members;
};

struct DegeneracyReport {
  std::vector<Complex> eigenvalues;  // distinct, ordered by argument in [0, 2pi)
  std::vector<int> multiplicities;
  bool degenerate = false;
};

namespace detail {

inline int checked_prime_power(int p, int e) {
  if (!is_prime(p)) throw ParameterError("base " + std::to_string(p) + " is not prime");
  if (e < 1) throw ParameterError("exponent must be >= 1");
  long d = 1;
  for (int i = 0; i < e; ++i) {
    d *= p;
    if (d > kMaxCompositeDim)
      throw CapacityError("p^e exceeds the supported dimension " + std::to_string(kMaxCompositeDim));
  }
  return static_cast<int>(d);
}

inline std::vector<int> default_params(std::vector<int> a_params, int p, int e) {
  if (a_params.empty()) a_params.assign(static_cast<std::size_t>(e), 0);
  if (a_params.size() != static_cast<std::size_t>(e)) throw ParameterError("need one a parameter per tensor slot");
  for (int a : a_params) check_param(p, a, "a");
  return a_params;
}

inline double positive_arg(Complex z) {
  double t = std::arg(z);
  if (t < -1e-12) t += 2 * std::numbers::pi;
  return std::max(t, 0.0);
}

// Digits [x_1..x_e, z_1..z_e], most significant first, so integer order is
// lexicographic label order.
inline WeylLabel decode(int code, int p, int e) {
  WeylLabel w{p, e, std::vector<int>(e), std::vector<int>(e)};
  for (int i = 2 * e - 1; i >= 0; --i) {
    const int digit = code % p;
    code /= p;
    (i < e ? w.x[i] : w.z[i - e]) = digit;
  }
  return w;
}

inline int add_codes(int u, int v, int p, int digits) {
  int out = 0, place = 1;
  for (int i = 0; i < digits; ++i) {
    out += ((u % p + v % p) % p) * place;
    u /= p;
    v /= p;
    place *= p;
  }
  return out;
}

inline int scale_code(int u, int c, int p, int digits) {
  int out = 0, place = 1;
  for (int i = 0; i < digits; ++i) {
    out += ((u % p) * c % p) * place;
    u /= p;
    place *= p;
  }
  return out;
}

// Row of the single nonzero entry in each column, or empty if the exact grid
// is missing or not monomial.
inline std::vector<int> monomial_rows(const OperatorMatrix& m) {
  if (!m.has_exact()) return {};
  std::vector<int> rows(static_cast<std::size_t>(m.dim()), -1);
  for (int r = 0; r < m.dim(); ++r)
    for (int c = 0; c < m.dim(); ++c)
      if (m.exact_at(r, c)) {
        if (rows[static_cast<std::size_t>(c)] >= 0) return {};
        rows[static_cast<std::size_t>(c)] = r;
      }
  if (std::find(rows.begin(), rows.end(), -1) != rows.end()) return {};
  return rows;
}

// max-entry norm of [a, b]; O(d) for monomial matrices.
inline double commutator_norm(const OperatorMatrix& a, const OperatorMatrix& b) {
  const auto ra = monomial_rows(a), rb = monomial_rows(b);
  if (ra.empty() || rb.empty()) return max_entry(commutator(a, b));
  double worst = 0.0;
  for (int c = 0; c < a.dim(); ++c) {
    const int mid_ab = rb[c], mid_ba = ra[c];
    const int row_ab = ra[mid_ab], row_ba = rb[mid_ba];
    const Complex ab = a(row_ab, mid_ab) * b(mid_ab, c);
    const Complex ba = b(row_ba, mid_ba) * a(mid_ba, c);
    worst = std::max(worst, row_ab == row_ba ? std::abs(ab - ba) : std::max(std::abs(ab), std::abs(ba)));
  }
  return worst;
}

}  // namespace detail

/// x . z' - z . x' mod p; zero iff the two Weyl operators commute.
inline int symplectic_form(const WeylLabel& u, const WeylLabel& v) {
  long s = 0;
  for (int i = 0; i < u.e; ++i) s += static_cast<long>(u.x[i]) * v.z[i] - static_cast<long>(u.z[i]) * v.x[i];
  return static_cast<int>(mod_floor(s, u.p));
}

inline OperatorMatrix build_w(int p, int e, const WeylLabel& label, std::vector<int> a_params = {}) {
  detail::checked_prime_power(p, e);
  a_params = detail::default_params(std::move(a_params), p, e);
  if (label.p != p || label.e != e || label.x.size() != static_cast<std::size_t>(e) ||
      label.z.size() != static_cast<std::size_t>(e))
    throw ParameterError("build_w: label does not match p and e");
  const auto z = build_z(p);
  OperatorMatrix acc;
  for (int i = 0; i < e; ++i) {
    const auto slot = matrix_power(build_v(p, a_params[i]), static_cast<int>(mod_floor(label.x[i], p))) *
                      matrix_power(z, static_cast<int>(mod_floor(label.z[i], p)));
    acc = i == 0 ? slot : kron(acc, slot);
  }
  return acc;
}

inline DegeneracyReport degeneracy_report(const OperatorMatrix& m, double cluster_tol = 1e-8) {
  if (!m.is_unitary()) throw ParameterError("degeneracy_report: matrix is not unitary");
  const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(m.entries());
  std::vector<Complex> eig(static_cast<std::size_t>(m.dim()));
  for (int k = 0; k < m.dim(); ++k) eig[k] = schur.matrixT()(k, k);
  std::sort(eig.begin(), eig.end(),
            [](Complex a, Complex b) { return detail::positive_arg(a) < detail::positive_arg(b); });
  DegeneracyReport rep;
  for (const auto& z : eig) {
    if (!rep.eigenvalues.empty() && std::abs(z - rep.eigenvalues.back()) < cluster_tol) {
      ++rep.multiplicities.back();
      continue;
    }
    if (!rep.eigenvalues.empty() && std::abs(z - rep.eigenvalues.front()) < cluster_tol) {
      ++rep.multiplicities.front();  // wrapped around arg = 0
      continue;
    }
    rep.eigenvalues.push_back(z);
    rep.multiplicities.push_back(1);
  }
  for (int k : rep.multiplicities) rep.degenerate = rep.degenerate || k > 1;
  return rep;
}

namespace detail {

// Row-major e x e matrices over F_p.
using ModMatrix = std::vector<int>;

inline bool poly_divides(const std::vector<int>& g, std::vector<int> f, int p) {
  // both monic, low coefficient first
  for (int k = static_cast<int>(f.size()) - 1; k >= static_cast<int>(g.size()) - 1; --k) {
    const int c = f[k];
    if (!c) continue;
    const int shift = k - static_cast<int>(g.size()) + 1;
    for (std::size_t i = 0; i < g.size(); ++i) f[shift + i] = static_cast<int>(mod_floor(f[shift + i] - c * g[i], p));
  }
  return std::all_of(f.begin(), f.end(), [](int c) { return c == 0; });
}

inline std::vector<int> monic_from_code(int code, int degree, int p) {
  std::vector<int> f(static_cast<std::size_t>(degree) + 1, 0);
  for (int i = 0; i < degree; ++i, code /= p) f[i] = code % p;
  f[degree] = 1;
  return f;
}

// Smallest monic irreducible polynomial of the given degree, by trial division.
inline std::vector<int> irreducible_poly(int degree, int p) {
  int count = 1;
  for (int i = 0; i < degree; ++i) count *= p;
  for (int code = 0; code < count; ++code) {
    const auto f = monic_from_code(code, degree, p);
    bool reducible = false;
    for (int k = 1; 2 * k <= degree && !reducible; ++k) {
      int n = 1;
      for (int i = 0; i < k; ++i) n *= p;
      for (int c = 0; c < n && !reducible; ++c) reducible = poly_divides(monic_from_code(c, k, p), f, p);
    }
    if (!reducible) return f;
  }
  throw ConstructionFailedError("no irreducible polynomial of degree " + std::to_string(degree));
}

inline int mod_rank(ModMatrix m, int n, int p) {
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (m[r * n + col] % p) piv = piv < 0 ? r : piv;
    if (piv < 0) continue;
    for (int c = 0; c < n; ++c) std::swap(m[rank * n + c], m[piv * n + c]);
    int inv = 1;
    while (inv * m[rank * n + col] % p != 1) ++inv;
    for (int r = 0; r < n; ++r) {
      if (r == rank || !(m[r * n + col] % p)) continue;
      const int f = m[r * n + col] * inv % p;
      for (int c = 0; c < n; ++c) m[r * n + c] = static_cast<int>(mod_floor(m[r * n + c] - f * m[rank * n + c], p));
    }
    ++rank;
  }
  return rank;
}

// Symmetric matrices S_a = G M_a, one per element a of F_p[t]/(f), where M_a
// is multiplication by a and G the trace-form Gram matrix. Differences are
// nonsingular, so the graphs {(x, S_a x)} are disjoint Lagrangian subspaces.
inline std::vector<ModMatrix> symmetric_spread_set(int p, int e, int d) {
  const auto f = irreducible_poly(e, p);
  const auto mul_matrix = [&](const std::vector<int>& a) {
    ModMatrix m(static_cast<std::size_t>(e * e), 0);
    std::vector<int> col = a;  // a * t^j, reduced mod f
    for (int j = 0; j < e; ++j) {
      for (int i = 0; i < e; ++i) m[i * e + j] = col[i];
      const int top = col[e - 1];
      for (int i = e - 1; i > 0; --i) col[i] = static_cast<int>(mod_floor(col[i - 1] - top * f[i], p));
      col[0] = static_cast<int>(mod_floor(-top * f[0], p));
    }
    return m;
  };
  const auto trace = [&](const ModMatrix& m) {
    long t = 0;
    for (int i = 0; i < e; ++i) t += m[i * e + i];
    return static_cast<int>(mod_floor(t, p));
  };
  // t^k as coordinate vectors, k < 2e - 1
  std::vector<std::vector<int>> powers{std::vector<int>(static_cast<std::size_t>(e), 0)};
  powers[0][0] = 1;
  const auto t = e > 1 ? mul_matrix([&] {
    std::vector<int> v(static_cast<std::size_t>(e), 0);
    v[1] = 1;
    return v;
  }())
                       : ModMatrix{static_cast<int>(mod_floor(-f[0], p))};
  for (int k = 1; k < 2 * e - 1; ++k) {
    std::vector<int> next(static_cast<std::size_t>(e), 0);
    for (int r = 0; r < e; ++r) {
      long acc = 0;
      for (int l = 0; l < e; ++l) acc += static_cast<long>(t[r * e + l]) * powers.back()[l];
      next[r] = static_cast<int>(mod_floor(acc, p));
    }
    powers.push_back(std::move(next));
  }
  ModMatrix gram(static_cast<std::size_t>(e * e));
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) gram[i * e + j] = trace(mul_matrix(powers[static_cast<std::size_t>(i + j)]));
  if (mod_rank(gram, e, p) != e) throw ConstructionFailedError("degenerate trace form");
  std::vector<ModMatrix> out;
  for (int code = 0; code < d; ++code) {
    std::vector<int> a(static_cast<std::size_t>(e));
    int c = code;
    for (int i = 0; i < e; ++i, c /= p) a[i] = c % p;
    const auto m = mul_matrix(a);
    ModMatrix s(static_cast<std::size_t>(e * e), 0);
    for (int r = 0; r < e; ++r)
      for (int col = 0; col < e; ++col) {
        long acc = 0;
        for (int l = 0; l < e; ++l) acc += static_cast<long>(gram[r * e + l]) * m[l * e + col];
        s[r * e + col] = static_cast<int>(mod_floor(acc, p));
      }
    out.push_back(std::move(s));
  }
  return out;
}

// Codes of the non-identity labels; returns false if the classes fail the
// partition invariants.
inline bool is_symplectic_partition(const std::vector<std::vector<int>>& classes, const std::vector<WeylLabel>& labels,
                                    int d) {
  if (static_cast<int>(classes.size()) != d + 1) return false;
  std::vector<char> seen(labels.size(), 0);
  seen[0] = 1;
  for (const auto& cls : classes) {
    if (static_cast<int>(cls.size()) != d - 1) return false;
    for (int u : cls) {
      if (seen[static_cast<std::size_t>(u)]) return false;
      seen[static_cast<std::size_t>(u)] = 1;
      for (int v : cls) {
        const auto& a = labels[static_cast<std::size_t>(u)];
        const auto& b = labels[static_cast<std::size_t>(v)];
        long s = 0;
        for (int i = 0; i < a.e; ++i) s += static_cast<long>(a.x[i]) * b.z[i] - static_cast<long>(a.z[i]) * b.x[i];
        if (mod_floor(s, a.p)) return false;
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

}  // namespace detail

/// Z-only labels form class 0; the rest come from a backtracking search
/// for disjoint maximal isotropic subspaces, smallest unused label first.
/// When the search exceeds `search_budget` steps the remaining classes are
/// taken from a field-multiplication spread set instead.
inline std::vector<CommutingClass> partition_commuting_classes(int p, int e, long search_budget = 200000) {
  const int d = detail::checked_prime_power(p, e);
  const int digits = 2 * e;
  const int total = d * d;
  std::vector<WeylLabel> labels;
  labels.reserve(static_cast<std::size_t>(total));
  for (int c = 0; c < total; ++c) labels.push_back(detail::decode(c, p, e));

  std::vector<char> used(static_cast<std::size_t>(total), 0);
  used[0] = 1;
  std::vector<std::vector<int>> classes;

  // The x = 0 labels are the codes below d.
  std::vector<int> zclass;
  for (int c = 1; c < d; ++c) {
    zclass.push_back(c);
    used[static_cast<std::size_t>(c)] = 1;
  }
  classes.push_back(zclass);

  const auto commutes = [&](int u, int v) { return symplectic_form(labels[u], labels[v]) == 0; };

  // Span of `span` (including 0) extended by v; empty when some new element
  // is already used.
  const auto extend = [&](const std::vector<int>& span, int v, std::vector<int>& out) {
    out = span;
    for (int c = 1; c < p; ++c) {
      const int cv = detail::scale_code(v, c, p, digits);
      for (int s : span) {
        const int w = detail::add_codes(s, cv, p, digits);
        if (used[static_cast<std::size_t>(w)]) return false;
        out.push_back(w);
      }
    }
    return true;
  };

  std::function<bool()> solve_class;
  std::function<bool(std::vector<int>&, std::vector<int>&, int)> grow;

  long steps = 0;
  bool exhausted = false;
  grow = [&](std::vector<int>& span, std::vector<int>& gens, int depth) -> bool {
    if (exhausted) return false;
    if (depth == e) {
      std::vector<int> members(span.begin() + 1, span.end());
      std::sort(members.begin(), members.end());
      for (int c : members) used[static_cast<std::size_t>(c)] = 1;
      classes.push_back(members);
      if (solve_class()) return true;
      classes.pop_back();
      for (int c : members) used[static_cast<std::size_t>(c)] = 0;
      return false;
    }
    for (int v = gens.empty() ? 1 : gens.back() + 1; v < total; ++v) {
      if (used[static_cast<std::size_t>(v)]) continue;
      if (++steps > search_budget) exhausted = true;
      if (exhausted) return false;
      if (!std::all_of(gens.begin(), gens.end(), [&](int g) { return commutes(g, v); })) continue;
      if (std::find(span.begin(), span.end(), v) != span.end()) continue;
      std::vector<int> next;
      if (!extend(span, v, next)) continue;
      // v must be the smallest new element so each subspace is reached once.
      if (*std::min_element(next.begin() + static_cast<long>(span.size()), next.end()) != v) continue;
      gens.push_back(v);
      if (grow(next, gens, depth + 1)) return true;
      gens.pop_back();
    }
    return false;
  };

  solve_class = [&]() -> bool {
    const auto first = std::find(used.begin(), used.end(), 0);
    if (first == used.end()) return true;
    const int u = static_cast<int>(first - used.begin());
    std::vector<int> span;
    if (!extend({0}, u, span)) return false;
    std::vector<int> gens{u};
    return grow(span, gens, 1);
  };

  if (!solve_class()) {
    if (!exhausted)
      throw ConstructionFailedError("commuting-class search failed for p=" + std::to_string(p) +
                                    " e=" + std::to_string(e));
    classes.resize(1);
    const auto spread = detail::symmetric_spread_set(p, e, d);
    for (const auto& sm : spread) {
      std::vector<int> members;
      for (int xc = 1; xc < d; ++xc) {
        std::vector<int> x(static_cast<std::size_t>(e));
        int c = xc;
        for (int i = e - 1; i >= 0; --i, c /= p) x[i] = c % p;
        int code = 0;
        for (int i = 0; i < e; ++i) code = code * p + x[i];
        for (int r = 0; r < e; ++r) {
          long acc = 0;
          for (int l = 0; l < e; ++l) acc += static_cast<long>(sm[r * e + l]) * x[l];
          code = code * p + static_cast<int>(mod_floor(acc, p));
        }
        members.push_back(code);
      }
      std::sort(members.begin(), members.end());
      classes.push_back(std::move(members));
    }
    std::sort(classes.begin() + 1, classes.end());
  }
  if (!detail::is_symplectic_partition(classes, labels, d))
    throw ConstructionFailedError("commuting-class partition invalid for p=" + std::to_string(p) +
                                  " e=" + std::to_string(e));

  std::vector<CommutingClass> out;
  for (std::size_t k = 0; k < classes.size(); ++k) {
    CommutingClass cls{static_cast<int>(k), {}};
    for (int c : classes[k]) cls.members.push_back(labels[static_cast<std::size_t>(c)]);
    out.push_back(std::move(cls));
  }
  return out;
}

/// Simultaneous eigenvectors by recursive block diagonalization: split the
/// space by the eigenvalues of the first member, then split every
/// degenerate block by the next member, and so on.
inline MubBasis joint_eigenbasis(const CommutingClass& cls, int p, int e, std::vector<int> a_params = {},
                                 double tol = kDefaultTolerance) {
  const int d = detail::checked_prime_power(p, e);
  a_params = detail::default_params(std::move(a_params), p, e);
  auto members = cls.members;
  std::sort(members.begin(), members.end());
  for (std::size_t i = 0; i < members.size(); ++i)
    for (std::size_t j = i + 1; j < members.size(); ++j)
      if (symplectic_form(members[i], members[j]) != 0)
        throw InconsistentClassError("class " + std::to_string(cls.id) + ": " + members[i].str() + " and " +
                                     members[j].str() + " do not commute");

  struct Block {
    Eigen::MatrixXcd isometry;
    std::vector<double> args;
  };
  std::vector<Block> blocks{{Eigen::MatrixXcd::Identity(d, d), {}}};
  constexpr double cluster_tol = 1e-6;
  // Members are used as generators in label order, skipping those already in
  // the span of earlier generators, until every block is one dimensional.
  const auto key = [p](const WeylLabel& w) {
    std::vector<int> k;
    for (int v : w.x) k.push_back(static_cast<int>(mod_floor(v, p)));
    for (int v : w.z) k.push_back(static_cast<int>(mod_floor(v, p)));
    return k;
  };
  std::vector<std::vector<int>> span{std::vector<int>(static_cast<std::size_t>(2 * e), 0)};
  std::vector<OperatorMatrix> used_ops;
  std::vector<std::size_t> used_idx;
  for (std::size_t g = 0; g < members.size(); ++g) {
    if (std::all_of(blocks.begin(), blocks.end(), [](const Block& b) { return b.isometry.cols() == 1; })) break;
    const auto kg = key(members[g]);
    if (std::find(span.begin(), span.end(), kg) != span.end()) continue;
    const auto old_span = span;
    for (int c = 1; c < p; ++c)
      for (const auto& s0 : old_span) {
        auto v = s0;
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = (v[i] + c * kg[i]) % p;
        span.push_back(std::move(v));
      }
    const auto op = build_w(p, e, members[g], a_params);
    for (std::size_t k = 0; k < used_ops.size(); ++k)
      if (detail::commutator_norm(used_ops[k], op) >= tol)
        throw InconsistentClassError("class " + std::to_string(cls.id) + ": " + members[used_idx[k]].str() +
                                     " and " + members[g].str() + " do not commute numerically");
    used_idx.push_back(g);
    std::vector<Block> next;
    for (auto& blk : blocks) {
      if (blk.isometry.cols() == 1) {
        const Complex lambda = blk.isometry.col(0).dot(op.entries() * blk.isometry.col(0));
        blk.args.push_back(detail::positive_arg(lambda));
        next.push_back(std::move(blk));
        continue;
      }
      const Eigen::MatrixXcd restricted = blk.isometry.adjoint() * op.entries() * blk.isometry;
      const Eigen::ComplexSchur<Eigen::MatrixXcd> schur(restricted);
      const Eigen::MatrixXcd& u = schur.matrixU();
      const auto n = static_cast<std::size_t>(restricted.rows());
      std::vector<char> taken(n, 0);
      for (std::size_t k = 0; k < n; ++k) {
        if (taken[k]) continue;
        const Complex lambda = schur.matrixT()(k, k);
        std::vector<Eigen::Index> cols;
        for (std::size_t l = k; l < n; ++l)
          if (!taken[l] && std::abs(schur.matrixT()(l, l) - lambda) < cluster_tol) {
            taken[l] = 1;
            cols.push_back(static_cast<Eigen::Index>(l));
          }
        Eigen::MatrixXcd sub(blk.isometry.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = blk.isometry * u.col(cols[c]);
        auto args = blk.args;
        args.push_back(detail::positive_arg(lambda));
        next.push_back({std::move(sub), std::move(args)});
      }
    }
    blocks = std::move(next);
    used_ops.push_back(op);
  }
  for (const auto& blk : blocks)
    if (blk.isometry.cols() != 1)
      throw InconsistentClassError("class " + std::to_string(cls.id) + " leaves an eigenspace of dimension " +
                                   std::to_string(blk.isometry.cols()) + " unresolved");

  // Quantize the eigenvalue arguments so the order is stable under rounding.
  const auto order_key = [](const Block& b) {
    std::vector<long> k;
    for (double t : b.args) k.push_back(std::lround(t * 1e6));
    return k;
  };
  std::sort(blocks.begin(), blocks.end(), [&](const Block& a, const Block& b) { return order_key(a) < order_key(b); });

  MubBasis basis;
  basis.dim = d;
  basis.label = BasisLabel::commuting_class(cls.id);
  basis.members = members;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    Eigen::VectorXcd v = blocks[k].isometry.col(0);
    v /= v.norm();
    Eigen::Index pivot = 0;
    double best = -1.0;
    for (Eigen::Index s = 0; s < v.size(); ++s)
      if (std::abs(v(s)) > best + 1e-9) {
        best = std::abs(v(s));
        pivot = s;
      }
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    MubVector mv;
    mv.dim = d;
    mv.index = static_cast<int>(k);
    mv.numeric = std::move(v);
    basis.vectors.push_back(std::move(mv));
  }
  return basis;
}

/// Computational basis for the Z-only class plus one joint eigenbasis per
/// remaining class; every pair is checked with verify_unbiased.
inline MubSet build_composite_set(int p, int e, std::vector<int> a_params = {}, double tol = 1e-9) {
  const int d = detail::checked_prime_power(p, e);
  a_params = detail::default_params(std::move(a_params), p, e);
  const auto classes = partition_commuting_classes(p, e);
  MubSet set;
  set.dim = d;
  for (const auto& cls : classes) {
    if (cls.id == 0) {
      auto comp = spherical_basis(d);
      comp.label = BasisLabel::commuting_class(0);
      comp.members = cls.members;
      set.bases.push_back(std::move(comp));
    } else {
      set.bases.push_back(joint_eigenbasis(cls, p, e, a_params));
    }
  }
  set.notes.push_back("classes: Z-augmented tensor Weyl operators, symplectic partition");
  const auto check = verify_set(set, tol);
  if (const auto bad = check.first_failure())
    throw ConstructionFailedError("bases " + set.bases[bad->first].label.str() + " and " +
                                  set.bases[bad->second].label.str() + " are not mutually unbiased (deviation " +
                                  std::to_string(bad->max_deviation) + ")");
  return set;
}

}  // namespace mubkit
