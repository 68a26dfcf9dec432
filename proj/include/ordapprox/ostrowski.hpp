#pragma once

// Ostrowski numeration with respect to an irrational alpha in (0,1):
// integers as sums of c_{n+1} q_n, reals as sums of b_{n+1} D_n, and the
// distance ||s*alpha - gamma|| read off the digit difference.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "ordapprox/cf.hpp"

namespace ordapprox {

/// CF data of alpha with lazily extended convergents. Not thread-safe while
/// extending; call ensure() up front before sharing.
class OstrowskiBasis {
 public:
  explicit OstrowskiBasis(const RealTarget& alpha, std::size_t certified_depth = 20000);

  const RealTarget& alpha() const { return cf_.source; }
  const CFExpansion& cf() const { return cf_; }

  /// Makes convergents 0..n available; InsufficientDepth past the certified digits.
  void ensure(std::size_t n);
  bool can_reach(std::size_t n) const { return cf_.has_digit(n); }

  const BigInt& a(std::size_t n) { ensure(n); return cf_.digit(n); }
  const Convergent& conv(std::size_t n) { ensure(n); return conv_[n]; }
  const BigInt& q(std::size_t n) { return conv(n).q; }
  /// D_n = q_n*alpha - p_n.
  Affine D(std::size_t n) { return d_affine(conv(n)); }
  std::span<const Convergent> convergents() const { return conv_; }

 private:
  CFExpansion cf_;
  std::vector<Convergent> conv_;
};

/// A shift gamma = form(alpha) + offset. The offset is absent when gamma lies
/// in Q(alpha); otherwise it is a certified enclosure of the remainder.
struct Gamma {
  Affine form;
  std::optional<RatInterval> offset;

  bool exact() const { return !offset.has_value(); }
  friend Gamma operator-(const Gamma& g, const Affine& a) { return {g.form - a, g.offset}; }
  friend Gamma operator+(const Gamma& g, const Affine& a) { return {g.form + a, g.offset}; }
};

inline constexpr unsigned kDefaultPrecisionDigits = 200;

/// Rational and same-field quadratic values become exact affine forms;
/// anything else is carried as an enclosure of width 10^-digits (certified
/// values keep their own enclosure).
Gamma to_gamma(const RealTarget& x, const RealTarget& alpha, unsigned digits = kDefaultPrecisionDigits);

/// Enclosure of gamma with about `bits` relative bits for the exact part.
RatInterval enclose(const Gamma& g, const RealTarget& alpha, unsigned bits = 256);
int sign(const Gamma& g, const RealTarget& alpha);

struct IntDigits {
  std::vector<BigInt> c;  // c[n] = c_{n+1}, n = 0..M
  std::size_t M = 0;
};

struct RealDigits {
  std::vector<BigInt> b;   // b[n] = b_{n+1}
  RatInterval tail_bound;  // gamma - sum_{n<depth} b_{n+1} D_n lies in here
  Gamma remainder;         // exactly that difference
};

struct DeltaProfile {
  std::vector<BigInt> delta;   // delta[n] = c_{n+1} - b_{n+1}, n < depth
  std::optional<std::size_t> m;
  std::size_t depth = 0;
  Gamma remainder;             // gamma - sum_{n<depth} b_{n+1} D_n
};

struct OrbitOptions {
  bool allow_orbit = false;
  BigInt search_bound{1000000};
};

/// Admissibility of a digit string: d_1 < a_1, d_{n+1} <= a_{n+1},
/// d_{n+1} = a_{n+1} forces d_n = 0.
bool admissible(std::span<const BigInt> digits, OstrowskiBasis& basis);

IntDigits ostrowski_int(BigInt s, OstrowskiBasis& basis);
BigInt evaluate(const IntDigits& d, OstrowskiBasis& basis);

/// Throws GammaOnOrbit when gamma = u + v*alpha with u, v integers and
/// |v| <= search bound (unless allowed). Orbit membership of inexact gamma is
/// not decidable and is not checked.
void check_off_orbit(const Gamma& g, const OrbitOptions& opt);

RealDigits ostrowski_real(const Gamma& gamma, OstrowskiBasis& basis, std::size_t depth,
                          const OrbitOptions& opt = {});

/// Sum of b_{n+1} D_n for n < b.size().
Affine partial_sum(std::span<const BigInt> b, OstrowskiBasis& basis);

DeltaProfile delta_profile(BigInt s, const Gamma& gamma, OstrowskiBasis& basis,
                           std::size_t depth, const OrbitOptions& opt = {});

using DistValue = std::variant<QuadIrr, RatInterval>;

/// ||s*alpha - gamma|| = |sum_{n>=m} delta_{n+1} D_n|, m >= 4. Partial sum
/// through depth-1 plus the tail enclosure hull(D_depth, D_{depth-1}); exact
/// when gamma's remainder vanishes.
DistValue dist_formula(const DeltaProfile& p, OstrowskiBasis& basis);

/// The same series written termwise as (-1)^n delta_{n+1} / (q_n (zeta_{n+1} + xi_n)),
/// signed by (-1)^m sgn(delta_{m+1}).
RatInterval dist_formula_alternating(const DeltaProfile& p, OstrowskiBasis& basis);

/// (|delta_{m+1}| + 2) * upper(|D_m|).
BigRat dist_bound(const DeltaProfile& p, OstrowskiBasis& basis);

/// ||s*alpha - gamma|| by direct evaluation.
RatInterval dist_direct(const BigInt& s, const Gamma& gamma, const RealTarget& alpha);

RatInterval as_interval(const DistValue& v);

}  // namespace ordapprox
