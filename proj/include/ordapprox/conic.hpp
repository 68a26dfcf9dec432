#pragma once

// Quadratic targets: minimal polynomials, orbits on the conics
// a r^2 + b rs + c s^2 = d, their Laurent expansions r/s = alpha + sum gamma_j s^-j,
// the periodic-CF construction and conic detection.

#include <array>
#include <optional>
#include <span>

#include "ordapprox/approx.hpp"

namespace ordapprox {

struct ConicForm {
  BigInt a;
  BigInt b;
  BigInt c;
  BigInt d;

  BigInt discriminant() const { return b * b - 4 * a * c; }
  BigInt value(const BigInt& r, const BigInt& s) const { return a * r * r + b * r * s + c * s * s; }
  bool holds(const Pair& p) const { return value(p.r, p.s) == d; }
  friend bool operator==(const ConicForm&, const ConicForm&) = default;
};

/// Throws PreconditionFailed unless gcd(a,b,c) = 1, a > 0 and the
/// discriminant is positive and not a square.
void check_form(const ConicForm& f);

struct Automorph {
  BigInt t11, t12, t21, t22;
  BigInt t, u;  // t^2 - disc*u^2 = 4

  Pair apply(const Pair& p) const { return {t11 * p.r + t12 * p.s, t21 * p.r + t22 * p.s}; }
  Automorph inverse() const { return {t22, -t12, -t21, t11, t, -u}; }
  Automorph squared() const;
  BigInt determinant() const { return t11 * t22 - t12 * t21; }
  /// The substituted form's coefficients, (a', b', c').
  std::array<BigInt, 3> transform(const ConicForm& f) const;
};

/// Primitive (a, b, c), a > 0, with a x^2 + b x + c = 0.
std::array<BigInt, 3> minimal_polynomial(const QuadIrr& x);

/// Least u > 0 with t^2 - disc*u^2 = 4.
std::pair<BigInt, BigInt> fundamental_pell4(const BigInt& disc);

Automorph fundamental_automorph(const ConicForm& f);

/// Smallest (by s, then r) pair with 1 <= r, s <= bound on the conic.
std::optional<Pair> find_seed(const ConicForm& f, const BigInt& bound);

/// (-b + root_sign*sqrt(disc)) / (2a).
QuadIrr conic_root(const ConicForm& f, int root_sign);

struct LaurentExpansion {
  std::vector<QuadNum> gamma;  // gamma_1..gamma_J
  // |r/s - alpha - sum_{j<=J} gamma_j s^-j| <= remainder_coeff * s^-remainder_power
  // for s >= s_min.
  BigRat remainder_coeff;
  std::size_t remainder_power = 0;
  BigInt s_min;

  std::vector<Coefficient> coefficients() const;
};

LaurentExpansion laurent_expansion(const ConicForm& f, std::size_t J, int root_sign = 1);

struct ConicOrbit {
  ConicForm form;
  Automorph step;  // the matrix actually iterated
  int root_sign = 1;
  ApproxSet set;   // N = 2 with the Laurent gamma_1, gamma_2
};

ConicOrbit conic_orbit(const ConicForm& f, const Pair& seed, std::size_t count);

struct PeriodicConstruction {
  std::size_t K = 0;  // alpha = [0; a_1..a_K, period of length L]
  std::size_t L = 0;
  QuadIrr gamma2;
  BigInt integrality;  // (2a*alpha + b) * gamma2 for alpha's minimal polynomial
  ApproxSet set;
  DecayReport report;
};

PeriodicConstruction periodic_construction(const RealTarget& alpha, std::size_t count,
                                           const DecayOptions& opt = {});

std::optional<ConicForm> quad_detect(std::span<const Pair> pairs, std::size_t max_exceptions = 2);

}  // namespace ordapprox
