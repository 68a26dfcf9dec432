#include "ordapprox/exactnum.hpp"

#include <algorithm>
#include <cctype>

namespace ordapprox {

BigRat make_rat(const BigInt& num, const BigInt& den) {
  require(den != 0, ErrorKind::DivisionByZero, "zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

BigInt floor_of(const BigRat& x) {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

BigInt ceil_of(const BigRat& x) {
  BigInt out;
  mpz_cdiv_q(out.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return out;
}

BigInt isqrt(const BigInt& n) {
  require(n >= 0, ErrorKind::PreconditionFailed, "isqrt of a negative number");
  BigInt out;
  mpz_sqrt(out.get_mpz_t(), n.get_mpz_t());
  return out;
}

bool is_square(const BigInt& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

int sgn(const BigInt& x) { return mpz_sgn(x.get_mpz_t()); }
int sgn(const BigRat& x) { return mpq_sgn(x.get_mpq_t()); }
BigRat abs_of(const BigRat& x) { return sgn(x) < 0 ? BigRat(-x) : x; }

BigRat pow2(long k) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? make_rat(1, p) : BigRat(p);
}

BigRat pow10(long k) {
  BigInt p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
  return k < 0 ? make_rat(1, p) : BigRat(p);
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const BigRat& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

BigInt parse_int(const std::string& text) {
  BigInt out;
  std::string t = text;
  if (!t.empty() && t[0] == '+') t.erase(0, 1);
  if (t.empty() || out.set_str(t, 10) != 0) {
    fail(ErrorKind::PreconditionFailed, "not an integer: '" + text + "'");
  }
  return out;
}

BigRat parse_rat(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return make_rat(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  std::string mantissa = text;
  long exponent = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    exponent = std::stol(text.substr(e + 1));
  }
  const auto dot = mantissa.find('.');
  if (dot != std::string::npos) {
    const std::string frac = mantissa.substr(dot + 1);
    mantissa = mantissa.substr(0, dot) + frac;
    exponent -= static_cast<long>(frac.size());
    if (mantissa == "-" || mantissa == "+" || mantissa.empty()) mantissa += "0";
  }
  return BigRat(parse_int(mantissa)) * pow10(exponent);
}

double to_double(const BigRat& x) { return x.get_d(); }

std::string to_scientific(const BigRat& x, int digits) {
  if (sgn(x) == 0) return "0";
  const BigRat ax = abs_of(x);
  long e = static_cast<long>(mpz_sizeinbase(ax.get_num_mpz_t(), 10)) -
           static_cast<long>(mpz_sizeinbase(ax.get_den_mpz_t(), 10));
  const BigInt lo_bound = floor_of(pow10(digits - 1));
  const BigInt hi_bound = floor_of(pow10(digits));
  BigInt m;
  for (;;) {
    m = floor_of(ax * pow10(digits - 1 - e));
    if (m >= hi_bound) {
      ++e;
    } else if (m < lo_bound) {
      --e;
    } else {
      break;
    }
  }
  std::string d = m.get_str();
  std::string out = sgn(x) < 0 ? "-" : "";
  out += d.substr(0, 1);
  if (d.size() > 1) out += "." + d.substr(1);
  out += "e" + std::to_string(e);
  return out;
}

// ---------------------------------------------------------------------------

RatInterval::RatInterval(const BigRat& lo, const BigRat& hi) : lo_(lo), hi_(hi) {
  require(lo_ <= hi_, ErrorKind::PreconditionFailed, "interval with lo > hi");
}

RatInterval RatInterval::hull(const BigRat& a, const BigRat& b) {
  return a <= b ? RatInterval(a, b) : RatInterval(b, a);
}

BigRat RatInterval::magnitude() const { return std::max(abs_of(lo_), abs_of(hi_)); }

RatInterval RatInterval::abs() const {
  if (sgn(lo_) >= 0) return *this;
  if (sgn(hi_) <= 0) return -*this;
  return {0, magnitude()};
}

RatInterval RatInterval::reciprocal() const {
  require(!contains_zero(), ErrorKind::DivisionByZero, "reciprocal of an interval containing 0");
  return {1 / hi_, 1 / lo_};
}

namespace {

long log2_estimate(const BigRat& x) {
  // floor(log2 |x|) up to +-1.
  const long nb = static_cast<long>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
  const long db = static_cast<long>(mpz_sizeinbase(x.get_den_mpz_t(), 2));
  return nb - db;
}

}  // namespace

RatInterval RatInterval::rounded_outward(unsigned bits) const {
  const BigRat m = magnitude();
  if (sgn(m) == 0) return *this;
  const long k = static_cast<long>(bits) - log2_estimate(m);
  const BigRat scale = pow2(k);
  const BigRat lo = BigRat(floor_of(lo_ * scale)) / scale;
  const BigRat hi = BigRat(ceil_of(hi_ * scale)) / scale;
  return {lo, hi};
}

RatInterval operator+(const RatInterval& a, const RatInterval& b) {
  return {a.lo_ + b.lo_, a.hi_ + b.hi_};
}

RatInterval operator-(const RatInterval& a, const RatInterval& b) {
  return {a.lo_ - b.hi_, a.hi_ - b.lo_};
}

RatInterval operator*(const RatInterval& a, const RatInterval& b) {
  const BigRat p[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
  const auto [mn, mx] = std::minmax_element(std::begin(p), std::end(p));
  return {*mn, *mx};
}

RatInterval operator*(const RatInterval& a, const BigRat& b) {
  return sgn(b) >= 0 ? RatInterval(a.lo_ * b, a.hi_ * b) : RatInterval(a.hi_ * b, a.lo_ * b);
}

RatInterval operator/(const RatInterval& a, const RatInterval& b) { return a * b.reciprocal(); }

// ---------------------------------------------------------------------------

QuadNum::QuadNum(const BigRat& x, const BigRat& y, const BigInt& d) : x_(x), y_(y), d_(d) {
  if (sgn(y_) != 0) {
    require(d_ > 1 && !is_square(d_), ErrorKind::PreconditionFailed,
            "quadratic field radicand must be a positive non-square");
  }
}

QuadNum QuadNum::sqrt_of(const BigInt& d) { return {0, 1, d}; }

BigInt QuadNum::join_fields(const QuadNum& a, const QuadNum& b) {
  if (!a.is_rational() && !b.is_rational()) {
    require(a.d_ == b.d_, ErrorKind::MixedField,
            "Q(sqrt " + a.d_.get_str() + ") vs Q(sqrt " + b.d_.get_str() + ")");
    return a.d_;
  }
  if (!a.is_rational()) return a.d_;
  if (!b.is_rational()) return b.d_;
  return a.d_ != 0 ? a.d_ : b.d_;
}

QuadNum operator+(const QuadNum& a, const QuadNum& b) {
  return {a.x_ + b.x_, a.y_ + b.y_, QuadNum::join_fields(a, b)};
}

QuadNum operator-(const QuadNum& a, const QuadNum& b) {
  return {a.x_ - b.x_, a.y_ - b.y_, QuadNum::join_fields(a, b)};
}

QuadNum operator*(const QuadNum& a, const QuadNum& b) {
  const BigInt d = QuadNum::join_fields(a, b);
  return {a.x_ * b.x_ + a.y_ * b.y_ * d, a.x_ * b.y_ + a.y_ * b.x_, d};
}

QuadNum QuadNum::inverse() const {
  const BigRat n = norm();
  require(sgn(n) != 0, ErrorKind::DivisionByZero, "inverse of zero");
  return {x_ / n, -y_ / n, d_};
}

QuadNum operator/(const QuadNum& a, const QuadNum& b) {
  QuadNum::join_fields(a, b);
  return a * b.inverse();
}

bool operator==(const QuadNum& a, const QuadNum& b) {
  if (a.x_ != b.x_ || a.y_ != b.y_) return false;
  return a.is_rational() || a.d_ == b.d_;
}

int QuadNum::sign() const {
  const int sx = sgn(x_);
  const int sy = sgn(y_);
  if (sy == 0) return sx;
  if (sx == 0 || sx == sy) return sy;
  // Opposite signs: compare x^2 with y^2 D (never equal, D non-square).
  return (x_ * x_ > y_ * y_ * d_) ? sx : sy;
}

BigInt QuadNum::floor() const {
  if (is_rational()) return floor_of(x_);
  BigInt l;
  mpz_lcm(l.get_mpz_t(), x_.get_den_mpz_t(), y_.get_den_mpz_t());
  const BigInt p = x_.get_num() * (l / x_.get_den());
  const BigInt e = y_.get_num() * (l / y_.get_den());
  const BigInt root = isqrt(e * e * d_);
  const BigInt f = sgn(e) > 0 ? root : BigInt(-root - 1);
  BigInt out;
  const BigInt top = p + f;
  mpz_fdiv_q(out.get_mpz_t(), top.get_mpz_t(), l.get_mpz_t());
  return out;
}

RatInterval QuadNum::enclose(const BigRat& width) const {
  require(sgn(width) > 0, ErrorKind::PreconditionFailed, "enclosure width must be positive");
  if (is_rational()) return RatInterval(x_);
  // Grid of step `width`: [f*w, (f+1)*w] with f = floor(x/w).
  const BigInt f = (*this * QuadNum(BigRat(1 / width))).floor();
  return {BigRat(f) * width, BigRat(f + 1) * width};
}

RatInterval QuadNum::enclose_relative(unsigned bits) const {
  if (is_rational()) return RatInterval(x_);
  long k = 64;
  for (;;) {
    const BigRat scale = pow2(k);
    const BigInt f = (*this * QuadNum(scale)).floor();
    const RatInterval iv(BigRat(f) / scale, BigRat(f + 1) / scale);
    if (!iv.contains_zero()) {
      const BigRat low = std::min(abs_of(iv.lo()), abs_of(iv.hi()));
      if (iv.width() <= low * pow2(-static_cast<long>(bits))) return iv;
      k = static_cast<long>(bits) + 2 - log2_estimate(low);
      const BigRat s2 = pow2(k);
      const BigInt f2 = (*this * QuadNum(s2)).floor();
      return {BigRat(f2) / s2, BigRat(f2 + 1) / s2};
    }
    k *= 2;
  }
}

double QuadNum::to_double() const { return enclose_relative(64).mid().get_d(); }

QuadNum QuadNum::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  QuadNum result(BigRat(1), BigRat(0), d_);
  QuadNum base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

// ---------------------------------------------------------------------------

QuadNum QuadIrr::value() const {
  return {make_rat(P, Q), make_rat(e, Q), D};
}

std::pair<BigInt, BigInt> split_square(const BigInt& n, std::uint64_t trial_bound) {
  require(n > 0, ErrorKind::PreconditionFailed, "split_square needs n > 0");
  BigInt k = 1;
  BigInt m = 1;
  BigInt rest = n;
  for (unsigned long p = 2; p <= trial_bound; ++p) {
    if (BigInt(p) * p > rest) break;
    unsigned count = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++count;
    }
    for (unsigned i = 0; i + 1 < count; i += 2) k *= p;
    if (count % 2 == 1) m *= p;
  }
  if (is_square(rest)) {
    k *= isqrt(rest);
  } else {
    m *= rest;
  }
  return {k, m};
}

QuadIrr qi_normalize(const BigInt& P, const BigInt& e, const BigInt& D, const BigInt& Q,
                     std::uint64_t trial_bound) {
  require(D > 0, ErrorKind::PreconditionFailed, "radicand must be positive");
  require(Q != 0, ErrorKind::DivisionByZero, "Q = 0");
  const auto [k, m] = split_square(D, trial_bound);
  QuadIrr out{P, e * k, m, Q};
  if (out.D == 1 || out.e == 0) {
    fail(ErrorKind::DegenerateRational, "(" + P.get_str() + " + " + e.get_str() + "*sqrt(" +
                                            D.get_str() + "))/" + Q.get_str() + " is rational");
  }
  if (out.Q < 0) {
    out.P = -out.P;
    out.e = -out.e;
    out.Q = -out.Q;
  }
  BigInt g;
  mpz_gcd(g.get_mpz_t(), out.P.get_mpz_t(), out.e.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.Q.get_mpz_t());
  if (g != 1) {
    out.P /= g;
    out.e /= g;
    out.Q /= g;
  }
  return out;
}

FieldValue canonical(const QuadNum& x) {
  if (x.is_rational()) return x.rational_part();
  BigInt l;
  mpz_lcm(l.get_mpz_t(), x.rational_part().get_den_mpz_t(),
          x.irrational_part().get_den_mpz_t());
  const BigInt p = x.rational_part().get_num() * (l / x.rational_part().get_den());
  const BigInt e = x.irrational_part().get_num() * (l / x.irrational_part().get_den());
  return qi_normalize(p, e, x.radicand(), l);
}

QuadNum to_quadnum(const FieldValue& v) {
  if (const auto* r = std::get_if<BigRat>(&v)) return QuadNum(*r);
  return std::get<QuadIrr>(v).value();
}

FieldValue qi_arith(const FieldValue& x, const FieldValue& y, ArithOp op) {
  const QuadNum a = to_quadnum(x);
  const QuadNum b = to_quadnum(y);
  switch (op) {
    case ArithOp::Add: return canonical(a + b);
    case ArithOp::Sub: return canonical(a - b);
    case ArithOp::Mul: return canonical(a * b);
    case ArithOp::Div: return canonical(a / b);
  }
  return canonical(a);
}

// ---------------------------------------------------------------------------

Certified make_certified(const std::string& digits, const std::optional<BigRat>& half_width) {
  const BigRat value = parse_rat(digits);
  BigRat h;
  if (half_width) {
    h = abs_of(*half_width);
  } else {
    const auto dot = digits.find('.');
    const long frac = dot == std::string::npos ? 0 : static_cast<long>(digits.size() - dot - 1);
    h = pow10(-frac) / 2;
  }
  require(sgn(h) > 0, ErrorKind::PreconditionFailed, "certified enclosure must have positive width");
  return {digits, RatInterval(value - h, value + h)};
}

bool is_irrational(const RealTarget& x) { return !std::holds_alternative<BigRat>(x); }

std::optional<QuadNum> exact_value(const RealTarget& x) {
  if (const auto* r = std::get_if<BigRat>(&x)) return QuadNum(*r);
  if (const auto* q = std::get_if<QuadIrr>(&x)) return q->value();
  return std::nullopt;
}

RatInterval enclose(const RealTarget& x, const BigRat& width) {
  require(sgn(width) > 0, ErrorKind::PreconditionFailed, "enclosure width must be positive");
  if (const auto v = exact_value(x)) return v->enclose(width);
  const auto& c = std::get<Certified>(x);
  if (c.enclosure.width() > width) {
    fail(ErrorKind::PrecisionExhausted,
         "stored digits '" + c.digits + "' cannot be refined to width " + to_string(width));
  }
  return c.enclosure;
}

// ---------------------------------------------------------------------------

std::optional<QuadNum> exact_value(const Affine& v, const RealTarget& alpha) {
  if (sgn(v.c1) == 0) return QuadNum(v.c0);
  if (const auto a = exact_value(alpha)) return QuadNum(v.c0) + QuadNum(v.c1) * *a;
  return std::nullopt;
}

namespace {

RatInterval certified_enclosure(const Affine& v, const RealTarget& alpha) {
  return std::get<Certified>(alpha).enclosure * v.c1 + v.c0;
}

}  // namespace

int sign(const Affine& v, const RealTarget& alpha) {
  if (const auto x = exact_value(v, alpha)) return x->sign();
  const RatInterval iv = certified_enclosure(v, alpha);
  if (iv.contains_zero()) fail(ErrorKind::PrecisionExhausted, "sign undecidable at stored precision");
  return sgn(iv.lo());
}

BigInt floor(const Affine& v, const RealTarget& alpha) {
  if (const auto x = exact_value(v, alpha)) return x->floor();
  const RatInterval iv = certified_enclosure(v, alpha);
  const BigInt lo = floor_of(iv.lo());
  const BigInt hi = floor_of(iv.hi());
  if (lo != hi || (BigRat(hi) == iv.hi() && !iv.is_point())) {
    fail(ErrorKind::PrecisionExhausted, "floor undecidable at stored precision");
  }
  return lo;
}

BigInt nearest_integer(const Affine& v, const RealTarget& alpha) {
  return floor(v + Affine::constant(BigRat(1, 2)), alpha);
}

RatInterval enclose(const Affine& v, const RealTarget& alpha, const BigRat& width) {
  if (const auto x = exact_value(v, alpha)) return x->enclose(width);
  const RatInterval iv = certified_enclosure(v, alpha);
  if (iv.width() > width) {
    fail(ErrorKind::PrecisionExhausted, "stored enclosure too wide for width " + to_string(width));
  }
  return iv;
}

RatInterval enclose_relative(const Affine& v, const RealTarget& alpha, unsigned bits) {
  if (const auto x = exact_value(v, alpha)) return x->enclose_relative(bits);
  return certified_enclosure(v, alpha);
}

Affine distance_to_integer(const Affine& v, const RealTarget& alpha) {
  const Affine frac = v - Affine::constant(BigRat(floor(v, alpha)));
  if (sign(frac - Affine::constant(BigRat(1, 2)), alpha) <= 0) return frac;
  return Affine::constant(1) - frac;
}

bool certainly_le(const Affine& v, const BigRat& bound, const RealTarget& alpha) {
  return sign(Affine::constant(bound) - v, alpha) >= 0;
}

}  // namespace ordapprox
