#include "ordapprox/ostrowski.hpp"

#include <algorithm>

namespace ordapprox {

OstrowskiBasis::OstrowskiBasis(const RealTarget& alpha, std::size_t certified_depth) {
  require(is_irrational(alpha), ErrorKind::RationalTarget,
          "Ostrowski expansions need an irrational alpha");
  cf_ = std::holds_alternative<Certified>(alpha) ? cf_expand_available(alpha, certified_depth)
                                                 : cf_expand(alpha, 1);
  require(!cf_.a.empty() && cf_.a[0] == 0 && (cf_.a.size() > 1 || cf_.period),
          ErrorKind::PreconditionFailed, "alpha must lie in (0, 1)");
  conv_.push_back(Convergent{0, cf_.a[0], 1});
}

void OstrowskiBasis::ensure(std::size_t n) {
  while (conv_.size() <= n) {
    const std::size_t k = conv_.size();
    if (!cf_.has_digit(k)) {
      fail(ErrorKind::InsufficientDepth,
           "alpha's enclosure certifies only " + std::to_string(cf_.a.size()) + " partial quotients");
    }
    const BigInt& ak = cf_.digit(k);
    const Convergent& c1 = conv_[k - 1];
    const BigInt p0 = k >= 2 ? conv_[k - 2].p : BigInt(1);
    const BigInt q0 = k >= 2 ? conv_[k - 2].q : BigInt(0);
    conv_.push_back(Convergent{k, ak * c1.p + p0, ak * c1.q + q0});
  }
}

// ---------------------------------------------------------------------------

Gamma to_gamma(const RealTarget& x, const RealTarget& alpha, unsigned digits) {
  if (const auto* r = std::get_if<BigRat>(&x)) return {Affine::constant(*r), std::nullopt};
  if (const auto* c = std::get_if<Certified>(&x)) return {Affine{}, c->enclosure};
  const auto& g = std::get<QuadIrr>(x);
  if (const auto* a = std::get_if<QuadIrr>(&alpha); a && a->D == g.D) {
    const BigRat v = make_rat(g.e * a->Q, g.Q * a->e);
    const BigRat u = make_rat(g.P, g.Q) - v * make_rat(a->P, a->Q);
    return {Affine{u, v}, std::nullopt};
  }
  return {Affine{}, g.value().enclose(pow10(-static_cast<long>(digits)))};
}

RatInterval enclose(const Gamma& g, const RealTarget& alpha, unsigned bits) {
  RatInterval iv = enclose_relative(g.form, alpha, bits);
  if (g.offset) iv = iv + *g.offset;
  return iv;
}

int sign(const Gamma& g, const RealTarget& alpha) {
  if (g.exact()) return sign(g.form, alpha);
  const RatInterval iv = enclose(g, alpha);
  if (iv.contains_zero()) fail(ErrorKind::PrecisionExhausted, "sign of gamma-dependent quantity undecidable");
  return sgn(iv.lo());
}

namespace {

// ceil(num / den), den != 0.
BigInt ceil_ratio(const Gamma& num, const Affine& den, const RealTarget& alpha) {
  if (num.exact()) {
    const auto n = exact_value(num.form, alpha);
    const auto d = exact_value(den, alpha);
    if (n && d) return (*n / *d).ceil();
  }
  const RatInterval d = enclose_relative(den, alpha, 256);
  if (d.contains_zero()) fail(ErrorKind::PrecisionExhausted, "D_n not separated from zero");
  const RatInterval r = enclose(num, alpha) / d;
  const BigInt lo = ceil_of(r.lo());
  if (lo != ceil_of(r.hi())) fail(ErrorKind::PrecisionExhausted, "Ostrowski digit undecidable at this precision");
  return lo;
}

RatInterval hull(const RatInterval& a, const RatInterval& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

bool is_integer(const BigRat& x) { return x.get_den() == 1; }

}  // namespace

// ---------------------------------------------------------------------------

bool admissible(std::span<const BigInt> digits, OstrowskiBasis& basis) {
  for (std::size_t n = 0; n < digits.size(); ++n) {
    const BigInt& a = basis.a(n + 1);
    if (sgn(digits[n]) < 0) return false;
    if (n == 0 ? digits[0] >= a : digits[n] > a) return false;
    if (n > 0 && digits[n] == a && sgn(digits[n - 1]) != 0) return false;
  }
  return true;
}

IntDigits ostrowski_int(BigInt s, OstrowskiBasis& basis) {
  require(sgn(s) >= 0, ErrorKind::PreconditionFailed, "Ostrowski expansion of a negative integer");
  IntDigits out;
  while (basis.q(out.M + 1) <= s) ++out.M;
  out.c.assign(out.M + 1, BigInt(0));
  BigInt rest = s;
  for (std::size_t n = out.M + 1; n-- > 0;) {
    const BigInt& q = basis.q(n);
    mpz_fdiv_qr(out.c[n].get_mpz_t(), rest.get_mpz_t(), rest.get_mpz_t(), q.get_mpz_t());
  }
  if (rest != 0 || !admissible(out.c, basis)) {
    fail(ErrorKind::PreconditionFailed, "internal: greedy Ostrowski digits of " + s.get_str() + " inadmissible");
  }
  return out;
}

BigInt evaluate(const IntDigits& d, OstrowskiBasis& basis) {
  BigInt s = 0;
  for (std::size_t n = 0; n < d.c.size(); ++n) s += d.c[n] * basis.q(n);
  return s;
}

void check_off_orbit(const Gamma& g, const OrbitOptions& opt) {
  if (opt.allow_orbit || !g.exact()) return;
  if (is_integer(g.form.c0) && is_integer(g.form.c1) && abs(g.form.c1.get_num()) <= opt.search_bound) {
    fail(ErrorKind::GammaOnOrbit, "gamma = " + to_string(g.form.c0) + " + " + to_string(g.form.c1) +
                                      "*alpha is s*alpha mod 1 for s = " + to_string(g.form.c1));
  }
}

RealDigits ostrowski_real(const Gamma& gamma, OstrowskiBasis& basis, std::size_t depth,
                          const OrbitOptions& opt) {
  require(depth >= 1, ErrorKind::PreconditionFailed, "depth must be >= 1");
  const RealTarget& alpha = basis.alpha();
  if (sign(gamma + Affine::alpha(), alpha) < 0 ||
      sign(gamma + Affine{-1, 1}, alpha) >= 0) {
    fail(ErrorKind::PreconditionFailed, "gamma must lie in [-alpha, 1 - alpha)");
  }
  check_off_orbit(gamma, opt);
  basis.ensure(depth);

  RealDigits out;
  out.b.reserve(depth);
  Gamma rest = gamma;
  for (std::size_t n = 0; n < depth; ++n) {
    const Affine dn = basis.D(n);
    BigInt b = ceil_ratio(rest + basis.D(n + 1), dn, alpha);
    BigInt cap = basis.a(n + 1);
    if (n == 0 || sgn(out.b.back()) != 0) cap -= 1;
    b = std::clamp(b, BigInt(0), cap);
    rest = rest - BigRat(b) * dn;
    out.b.push_back(std::move(b));
  }
  out.tail_bound = hull(-enclose_relative(basis.D(depth), alpha, 128),
                        -enclose_relative(basis.D(depth - 1), alpha, 128));
  out.remainder = rest;
  return out;
}

Affine partial_sum(std::span<const BigInt> b, OstrowskiBasis& basis) {
  Affine sum;
  for (std::size_t n = 0; n < b.size(); ++n) {
    if (sgn(b[n]) != 0) sum += BigRat(b[n]) * basis.D(n);
  }
  return sum;
}

DeltaProfile delta_profile(BigInt s, const Gamma& gamma, OstrowskiBasis& basis,
                           std::size_t depth, const OrbitOptions& opt) {
  const IntDigits c = ostrowski_int(s, basis);
  require(c.c.size() <= depth, ErrorKind::InsufficientDepth,
          "depth " + std::to_string(depth) + " does not cover the digits of s (M = " + std::to_string(c.M) + ")");
  const RealDigits b = ostrowski_real(gamma, basis, depth, opt);
  DeltaProfile p;
  p.depth = depth;
  p.remainder = b.remainder;
  p.delta.reserve(depth);
  for (std::size_t n = 0; n < depth; ++n) {
    p.delta.push_back((n < c.c.size() ? c.c[n] : BigInt(0)) - b.b[n]);
    if (!p.m && sgn(p.delta.back()) != 0) p.m = n;
  }
  return p;
}

namespace {

void require_regime(const DeltaProfile& p) {
  if (p.m && *p.m < 4) {
    fail(ErrorKind::OutOfRegime, "m = " + std::to_string(*p.m) + " < 4; use dist_direct");
  }
}

bool tail_vanishes(const DeltaProfile& p) {
  return p.remainder.exact() && sgn(p.remainder.form.c0) == 0 && sgn(p.remainder.form.c1) == 0;
}

RatInterval tail_enclosure(const DeltaProfile& p, OstrowskiBasis& basis) {
  const RealTarget& alpha = basis.alpha();
  return hull(enclose_relative(basis.D(p.depth), alpha, 128),
              enclose_relative(basis.D(p.depth - 1), alpha, 128));
}

}  // namespace

DistValue dist_formula(const DeltaProfile& p, OstrowskiBasis& basis) {
  require_regime(p);
  const RealTarget& alpha = basis.alpha();
  Affine sum;
  for (std::size_t n = p.m.value_or(p.depth); n < p.depth; ++n) {
    if (sgn(p.delta[n]) != 0) sum += BigRat(p.delta[n]) * basis.D(n);
  }
  if (tail_vanishes(p)) {
    if (const auto v = exact_value(sum, alpha)) {
      const FieldValue f = canonical(v->abs());
      if (const auto* q = std::get_if<QuadIrr>(&f)) return *q;
      return RatInterval(std::get<BigRat>(f));
    }
    return enclose_relative(sum, alpha, 128).abs();
  }
  return (enclose_relative(sum, alpha, 128) + tail_enclosure(p, basis)).abs();
}

RatInterval dist_formula_alternating(const DeltaProfile& p, OstrowskiBasis& basis) {
  require_regime(p);
  const std::size_t m = p.m.value_or(p.depth);
  const CFExpansion& cf = basis.cf();
  basis.ensure(p.depth);
  const auto conv = basis.convergents();

  QuadNum exact_sum;
  RatInterval iv_sum(BigRat(0));
  for (std::size_t n = m; n < p.depth; ++n) {
    if (sgn(p.delta[n]) == 0) continue;
    const BigRat k = BigRat(n % 2 == 0 ? p.delta[n] : BigInt(-p.delta[n]));
    const BigRat x = xi(conv, n);
    if (cf.period) {
      const QuadNum zeta = complete_quotient_exact(cf, n + 1);
      exact_sum += QuadNum(k) / (QuadNum(BigRat(conv[n].q)) * (zeta + QuadNum(x)));
    } else {
      const RatInterval zeta = std::get<RatInterval>(complete_quotient(cf, n + 1));
      iv_sum = iv_sum + ((zeta + x) * BigRat(conv[n].q)).reciprocal() * k;
    }
  }
  RatInterval total = cf.period ? (exact_sum.is_rational() && exact_sum.rational_part() == 0
                                       ? RatInterval(BigRat(0))
                                       : exact_sum.enclose_relative(128))
                                : iv_sum;
  if (!tail_vanishes(p)) total = total + tail_enclosure(p, basis);
  if (!p.m) return total.abs();
  const bool flip = (m % 2 == 1) != (sgn(p.delta[m]) < 0);
  return flip ? -total : total;
}

BigRat dist_bound(const DeltaProfile& p, OstrowskiBasis& basis) {
  require(p.m.has_value(), ErrorKind::OutOfRegime, "no nonzero digit difference within depth");
  require_regime(p);
  const std::size_t m = *p.m;
  const BigRat dm = enclose_relative(basis.D(m), basis.alpha(), 128).magnitude();
  return (BigRat(abs(p.delta[m])) + 2) * dm;
}

RatInterval dist_direct(const BigInt& s, const Gamma& gamma, const RealTarget& alpha) {
  const Affine x = Affine{0, BigRat(s)} - gamma.form;
  if (gamma.exact()) {
    const Affine d = distance_to_integer(x, alpha);
    if (sgn(d.c1) == 0) return RatInterval(d.c0);
    return enclose_relative(d, alpha, 128);
  }
  const RatInterval iv = enclose_relative(x, alpha, 256) - *gamma.offset;
  const BigInt n = floor_of(iv.mid() + BigRat(1, 2));
  const RatInterval y = iv + BigRat(-n);
  if (y.lo() < BigRat(-1, 2) || y.hi() > BigRat(1, 2)) {
    fail(ErrorKind::PrecisionExhausted, "nearest integer to s*alpha - gamma undecidable");
  }
  return y.abs();
}

RatInterval as_interval(const DistValue& v) {
  if (const auto* q = std::get_if<QuadIrr>(&v)) return q->value().enclose_relative(128);
  return std::get<RatInterval>(v);
}

}  // namespace ordapprox
