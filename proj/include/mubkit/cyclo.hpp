#pragma once

// Exact arithmetic in Z[tau], tau = exp(i*pi/d), the ring of integers of the
// 2d-th cyclotomic field, together with its double-precision shadow.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mubkit/errors.hpp"

namespace mubkit {

using Complex = std::complex<double>;

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kConsistencyTolerance = 1e-12;

/// Deterministic trial division.
constexpr bool is_prime(long n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (long f = 3; f * f <= n; f += 2)
    if (n % f == 0) return false;
  return true;
}

/// Non-negative residue of v modulo m (m > 0).
constexpr long mod_floor(long v, long m) {
  long r = v % m;
  return r < 0 ? r + m : r;
}

/// tau^k = exp(i*pi*k/d) evaluated with k reduced into [0, 2d).
inline Complex tau_power(long k, int dim) {
  const long r = mod_floor(k, 2L * dim);
  if (r == 0) return {1.0, 0.0};
  if (2 * r == 2L * dim) return {-1.0, 0.0};
  if (4 * r == 2L * dim) return {0.0, 1.0};
  if (4 * r == 6L * dim) return {0.0, -1.0};
  const double angle = std::numbers::pi * static_cast<double>(r) / dim;
  return {std::cos(angle), std::sin(angle)};
}

/// Power of tau for a fixed dimension d; the value lives in Z/2d.
class PhaseExponent {
 public:
  PhaseExponent(long value, int dim) : dim_(dim) {
    if (dim < 1) throw DimensionError("PhaseExponent: dimension must be positive");
    value_ = static_cast<int>(mod_floor(value, modulus()));
  }

  /// q^k with q = tau^2.
  static PhaseExponent from_q_power(long k, int dim) { return {2 * k, dim}; }

  int value() const { return value_; }
  int dim() const { return dim_; }
  int modulus() const { return 2 * dim_; }

  PhaseExponent operator+(const PhaseExponent& o) const {
    check_same(o);
    return {static_cast<long>(value_) + o.value_, dim_};
  }
  PhaseExponent operator-(const PhaseExponent& o) const {
    check_same(o);
    return {static_cast<long>(value_) - o.value_, dim_};
  }
  PhaseExponent operator-() const { return {-static_cast<long>(value_), dim_}; }
  PhaseExponent& operator+=(const PhaseExponent& o) { return *this = *this + o; }

  bool operator==(const PhaseExponent&) const = default;

  Complex evaluate() const { return tau_power(value_, dim_); }

 private:
  void check_same(const PhaseExponent& o) const {
    if (o.dim_ != dim_) throw DimensionError("PhaseExponent: mismatched moduli");
  }

  int value_ = 0;
  int dim_ = 1;
};

class CyclotomicSum;
CyclotomicSum reduce(std::span<const std::int64_t> raw, int dim);

/// Integer combination of tau^0 .. tau^(2d-1), always held in canonical form:
/// tau^k for k >= d folded by tau^d = -1 and, for odd prime d, the
/// coefficient of zeta^(d-1) = -tau^(d-2) eliminated with Phi_d(zeta) = 0.
/// For prime d the canonical form is a Z-basis expansion, so equality is
/// exact. For composite d only the first fold applies and equality falls
/// back to numeric comparison.
class CyclotomicSum {
 public:
  explicit CyclotomicSum(int dim) : dim_(dim), coeffs_(2 * static_cast<std::size_t>(dim), 0) {
    if (dim < 1) throw DimensionError("CyclotomicSum: dimension must be positive");
  }

  static CyclotomicSum integer(std::int64_t n, int dim) {
    CyclotomicSum s(dim);
    s.coeffs_[0] = n;
    return s;
  }

  static CyclotomicSum monomial(const PhaseExponent& k) {
    CyclotomicSum s(k.dim());
    s.add_term(k.value(), 1);
    s.canonicalize();
    return s;
  }

  int dim() const { return dim_; }
  std::span<const std::int64_t> coeffs() const { return coeffs_; }

  /// True when canonical forms decide equality (d prime).
  bool exact_supported() const { return is_prime(dim_); }

  Complex evaluate() const {
    Complex acc{0.0, 0.0};
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
      if (coeffs_[k] != 0) acc += static_cast<double>(coeffs_[k]) * tau_power(static_cast<long>(k), dim_);
    return acc;
  }

  bool is_zero() const {
    for (auto c : coeffs_)
      if (c != 0) return false;
    return true;
  }

  /// The rational integer this sum equals, when exact equality is available.
  std::optional<std::int64_t> as_integer() const {
    if (!exact_supported()) return std::nullopt;
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
      if (coeffs_[k] != 0) return std::nullopt;
    return coeffs_[0];
  }

  CyclotomicSum conj() const {
    CyclotomicSum out(dim_);
    const std::size_t n = coeffs_.size();
    for (std::size_t k = 0; k < n; ++k)
      if (coeffs_[k] != 0) out.coeffs_[(n - k) % n] += coeffs_[k];
    out.canonicalize();
    return out;
  }

  void add_term(long exponent, std::int64_t coeff) {
    coeffs_[static_cast<std::size_t>(mod_floor(exponent, 2L * dim_))] += coeff;
  }

  CyclotomicSum& operator+=(const CyclotomicSum& o) {
    check_same(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    canonicalize();
    return *this;
  }
  CyclotomicSum& operator-=(const CyclotomicSum& o) {
    check_same(o);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    canonicalize();
    return *this;
  }
  friend CyclotomicSum operator+(CyclotomicSum a, const CyclotomicSum& b) { return a += b; }
  friend CyclotomicSum operator-(CyclotomicSum a, const CyclotomicSum& b) { return a -= b; }

  // Exponent-index convolution followed by reduction.
  friend CyclotomicSum operator*(const CyclotomicSum& a, const CyclotomicSum& b) {
    a.check_same(b);
    CyclotomicSum out(a.dim_);
    const std::size_t n = a.coeffs_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (b.coeffs_[j] != 0) out.coeffs_[(i + j) % n] += a.coeffs_[i] * b.coeffs_[j];
    }
    out.canonicalize();
    return out;
  }

  /// Canonical compare for prime d, numeric at kDefaultTolerance otherwise.
  friend bool operator==(const CyclotomicSum& a, const CyclotomicSum& b) {
    if (a.dim_ != b.dim_) return false;
    if (a.exact_supported()) return a.coeffs_ == b.coeffs_;
    return std::abs(a.evaluate() - b.evaluate()) <= kDefaultTolerance;
  }

  std::string str() const {
    std::string out;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
      if (coeffs_[k] == 0) continue;
      if (!out.empty()) out += " + ";
      out += std::to_string(coeffs_[k]) + "*t^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
  }

 private:
  friend CyclotomicSum reduce(std::span<const std::int64_t> raw, int dim);

  void check_same(const CyclotomicSum& o) const {
    if (o.dim_ != dim_) throw DimensionError("CyclotomicSum: mismatched dimensions");
  }

  void canonicalize() {
    const std::size_t d = static_cast<std::size_t>(dim_);
    for (std::size_t k = d; k < 2 * d; ++k) {
      coeffs_[k - d] -= coeffs_[k];
      coeffs_[k] = 0;
    }
    // Phi_d(zeta) = 0 rewritten over tau^0..tau^(d-1) is sum_k (-1)^k tau^k.
    if (dim_ > 2 && is_prime(dim_)) {
      const std::size_t pivot = d - 2;  // odd, so the relation carries -1 there
      const std::int64_t c = coeffs_[pivot];
      if (c != 0)
        for (std::size_t k = 0; k < d; ++k) coeffs_[k] += (k % 2 == 0) ? c : -c;
    }
  }

  int dim_;
  std::vector<std::int64_t> coeffs_;
};

/// Canonical form of a raw length-2d coefficient vector over powers of tau.
inline CyclotomicSum reduce(std::span<const std::int64_t> raw, int dim) {
  if (dim < 1 || raw.size() != 2 * static_cast<std::size_t>(dim))
    throw DimensionError("reduce: expected " + std::to_string(2 * dim) + " coefficients, got " +
                         std::to_string(raw.size()));
  CyclotomicSum s(dim);
  std::copy(raw.begin(), raw.end(), s.coeffs_.begin());
  s.canonicalize();
  return s;
}

inline Complex evaluate(const CyclotomicSum& x) { return x.evaluate(); }

/// x * conj(x) in canonical form.
inline CyclotomicSum abs_squared_exact(const CyclotomicSum& x) { return x * x.conj(); }

}  // namespace mubkit
