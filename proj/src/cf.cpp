#include "ordapprox/cf.hpp"

#include <map>

namespace ordapprox {

const BigInt& CFExpansion::digit(std::size_t n) const {
  if (n < a.size()) return a[n];
  if (!period) {
    fail(ErrorKind::InsufficientDepth,
         "partial quotient a_" + std::to_string(n) + " is beyond the available " +
             std::to_string(a.size()) + " digits");
  }
  return a[period->K + (n - period->K) % period->L];
}

namespace {

void expand_rational(CFExpansion& cf, const BigRat& x) {
  BigInt num = x.get_num();
  BigInt den = x.get_den();
  while (den != 0) {
    BigInt q;
    BigInt r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    cf.a.push_back(q);
    num = den;
    den = r;
  }
}

// floor((P + sqrt d) / Q) for Q != 0, d > 0 non-square.
BigInt quotient_floor(const BigInt& P, const BigInt& Q, const BigInt& root) {
  BigInt out;
  if (Q > 0) {
    const BigInt top = P + root;
    mpz_fdiv_q(out.get_mpz_t(), top.get_mpz_t(), Q.get_mpz_t());
  } else {
    const BigInt top = -P - root - 1;
    const BigInt bottom = -Q;
    mpz_fdiv_q(out.get_mpz_t(), top.get_mpz_t(), bottom.get_mpz_t());
  }
  return out;
}

void expand_quadratic(CFExpansion& cf, const QuadIrr& x, std::size_t depth) {
  BigInt d = x.e * x.e * x.D;
  BigInt P = sgn(x.e) > 0 ? x.P : BigInt(-x.P);
  BigInt Q = sgn(x.e) > 0 ? x.Q : BigInt(-x.Q);
  cf.root_factor = abs(x.e);
  if ((d - P * P) % Q != 0) {
    const BigInt absq = abs(Q);
    P *= absq;
    d *= Q * Q;
    Q *= absq;
    cf.root_factor *= absq;
  }
  cf.radicand = d;
  cf.field = x.D;
  const BigInt root = isqrt(d);

  std::map<std::pair<BigInt, BigInt>, std::size_t> seen;
  for (std::size_t n = 0;; ++n) {
    auto state = std::make_pair(P, Q);
    if (const auto it = seen.find(state); it != seen.end()) {
      cf.period = Period{it->second, n - it->second};
      break;
    }
    seen.emplace(state, n);
    cf.states.push_back(state);
    const BigInt an = quotient_floor(P, Q, root);
    cf.a.push_back(an);
    P = an * Q - P;
    Q = (d - P * P) / Q;
  }
  while (cf.a.size() < depth) {
    const std::size_t n = cf.a.size();
    cf.a.push_back(cf.digit(n));
  }
}

// Extracts certified digits; stops early (returning false) when the
// enclosure straddles an integer.
bool expand_certified(CFExpansion& cf, const RatInterval& enclosure, std::size_t depth) {
  RatInterval x = enclosure;
  while (cf.a.size() < depth) {
    const BigInt lo = floor_of(x.lo());
    const BigInt hi = floor_of(x.hi());
    if (lo != hi || (BigRat(hi) == x.hi() && !x.is_point())) return false;
    cf.a.push_back(lo);
    cf.zeta_enclosures.push_back(x);
    const RatInterval frac = x + BigRat(-lo);
    if (frac.contains_zero()) return cf.a.size() >= depth;
    x = frac.reciprocal();
  }
  return true;
}

CFExpansion expand(const RealTarget& x, std::size_t depth, bool partial_ok) {
  require(depth >= 1, ErrorKind::PreconditionFailed, "depth must be >= 1");
  CFExpansion cf;
  cf.source = x;
  if (const auto* r = std::get_if<BigRat>(&x)) {
    expand_rational(cf, *r);
  } else if (const auto* q = std::get_if<QuadIrr>(&x)) {
    expand_quadratic(cf, *q, depth);
  } else {
    const auto& c = std::get<Certified>(x);
    if (!expand_certified(cf, c.enclosure, depth) && !partial_ok) {
      fail(ErrorKind::PrecisionExhausted,
           "enclosure of '" + c.digits + "' certifies only " + std::to_string(cf.a.size()) +
               " of " + std::to_string(depth) + " partial quotients");
    }
  }
  return cf;
}

}  // namespace

CFExpansion cf_expand(const RealTarget& x, std::size_t depth) { return expand(x, depth, false); }

CFExpansion cf_expand_available(const RealTarget& x, std::size_t max_depth) {
  return expand(x, max_depth, true);
}

std::vector<Convergent> convergents(const CFExpansion& cf, std::size_t n_max) {
  std::vector<Convergent> out;
  out.reserve(n_max + 1);
  ConvergentStream stream(cf);
  out.push_back(stream.current());
  while (out.size() <= n_max) {
    stream.advance();
    out.push_back(stream.current());
  }
  return out;
}

ConvergentStream::ConvergentStream(const CFExpansion& cf) : cf_(&cf) {
  prev_ = Convergent{0, 1, 0};
  cur_ = Convergent{0, cf.digit(0), 1};
}

void ConvergentStream::advance() {
  const BigInt& an = cf_->digit(cur_.n + 1);
  Convergent next{cur_.n + 1, an * cur_.p + prev_.p, an * cur_.q + prev_.q};
  prev_ = std::move(cur_);
  cur_ = std::move(next);
}

BigRat finite_cf_value(std::span<const BigInt> digits) {
  require(!digits.empty(), ErrorKind::PreconditionFailed, "empty continued fraction");
  BigRat value = digits.back();
  for (std::size_t i = digits.size() - 1; i-- > 0;) {
    value = BigRat(digits[i]) + 1 / value;
  }
  return value;
}

QuadNum complete_quotient_exact(const CFExpansion& cf, std::size_t n) {
  require(cf.period.has_value(), ErrorKind::NotPeriodic, "exact complete quotients need a quadratic source");
  const std::size_t idx = n < cf.states.size() ? n : cf.period->K + (n - cf.period->K) % cf.period->L;
  const auto& [P, Q] = cf.states[idx];
  return {make_rat(P, Q), make_rat(cf.root_factor, Q), cf.field};
}

std::variant<QuadIrr, RatInterval> complete_quotient(const CFExpansion& cf, std::size_t n) {
  if (cf.period) return std::get<QuadIrr>(canonical(complete_quotient_exact(cf, n)));
  if (cf.finite()) {
    if (n >= cf.a.size()) {
      fail(ErrorKind::RationalTarget, "zeta_" + std::to_string(n) + " is past the end of a finite expansion");
    }
    return RatInterval(finite_cf_value(std::span(cf.a).subspan(n)));
  }
  require(n < cf.zeta_enclosures.size(), ErrorKind::InsufficientDepth,
          "zeta_" + std::to_string(n) + " needs more certified digits");
  return cf.zeta_enclosures[n];
}

BigRat xi(std::span<const Convergent> conv, std::size_t n) {
  require(n >= 1 && n < conv.size(), ErrorKind::PreconditionFailed, "xi_n needs 1 <= n < #convergents");
  return make_rat(conv[n - 1].q, conv[n].q);
}

std::variant<QuadIrr, RatInterval> d_value(const RealTarget& x, const Convergent& conv) {
  require(is_irrational(x), ErrorKind::RationalTarget, "D_n is defined for irrational targets");
  const Affine d = d_affine(conv);
  if (const auto v = exact_value(d, x)) return std::get<QuadIrr>(canonical(*v));
  return enclose_relative(d, x, 64);
}

}  // namespace ordapprox
