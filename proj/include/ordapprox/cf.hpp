#pragma once

// Simple continued fractions of rational, quadratic and certified targets:
// partial quotients, principal convergents p_n/q_n, complete quotients
// zeta_n = [a_n; a_{n+1}, ...], xi_n = q_{n-1}/q_n and D_n = q_n*alpha - p_n.

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "ordapprox/exactnum.hpp"

namespace ordapprox {

/// a_n = a_{n+L} for all n >= K (K is the first index inside the cycle).
struct Period {
  std::size_t K = 0;
  std::size_t L = 0;
  friend bool operator==(const Period&, const Period&) = default;
};

struct Convergent {
  std::size_t n = 0;
  BigInt p;
  BigInt q;
};

class CFExpansion {
 public:
  RealTarget source;
  std::vector<BigInt> a;          // materialized partial quotients
  std::optional<Period> period;   // present iff source is quadratic

  bool finite() const { return std::holds_alternative<BigRat>(source); }
  bool has_digit(std::size_t n) const { return n < a.size() || period.has_value(); }
  /// a_n, extended through the period for quadratic sources.
  const BigInt& digit(std::size_t n) const;

  // Quadratic sources: zeta_n = (P_n + sqrt(d)) / Q_n for the stored states,
  // periodic from K on.
  std::vector<std::pair<BigInt, BigInt>> states;
  BigInt radicand;     // d = root_factor^2 * field
  BigInt root_factor;
  BigInt field;
  // Certified sources: enclosure of zeta_n for each certified digit.
  std::vector<RatInterval> zeta_enclosures;
};

/// Full expansion for rationals; `depth` digits (at least through one full
/// period) for quadratics; exactly `depth` certified digits otherwise.
CFExpansion cf_expand(const RealTarget& x, std::size_t depth);

/// As cf_expand, but a certified target yields as many digits as its
/// enclosure supports (at most max_depth) instead of failing.
CFExpansion cf_expand_available(const RealTarget& x, std::size_t max_depth);

/// Convergents n = 0..n_max.
std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t n_max);

/// Walks p_n/q_n without keeping the history. Starts at n = 0.
class ConvergentStream {
 public:
  explicit ConvergentStream(const CFExpansion& cf);

  const Convergent& current() const { return cur_; }
  const Convergent& previous() const { return prev_; }  // n-1 (seed p=1,q=0 at n=0)
  bool can_advance() const { return cf_->has_digit(cur_.n + 1); }
  void advance();

 private:
  const CFExpansion* cf_;
  Convergent prev_;
  Convergent cur_;
};

/// Value of the finite continued fraction [d_0; d_1, ..., d_k].
BigRat finite_cf_value(std::span<const BigInt> digits);

/// Exact zeta_n for quadratic sources.
QuadNum complete_quotient_exact(const CFExpansion& cf, std::size_t n);

/// zeta_n: exact for quadratic sources, certified interval otherwise (a
/// point interval for rational sources within range).
std::variant<QuadIrr, RatInterval> complete_quotient(const CFExpansion& cf, std::size_t n);

/// xi_n = q_{n-1}/q_n, n >= 1.
BigRat xi(std::span<const Convergent> conv, std::size_t n);

inline Affine d_affine(const Convergent& c) { return {BigRat(-c.p), BigRat(c.q)}; }

/// D_n = q_n*alpha - p_n: exact for quadratic targets, an enclosure for
/// certified ones.
std::variant<QuadIrr, RatInterval> d_value(const RealTarget& x, const Convergent& conv);

}  // namespace ordapprox
