#pragma once

// Exact arithmetic: big integers and rationals (GMP), rational-endpoint
// intervals, elements of real quadratic fields, and the target type alpha.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "ordapprox/errors.hpp"

namespace ordapprox {

using BigInt = mpz_class;
using BigRat = mpq_class;

BigRat make_rat(const BigInt& num, const BigInt& den);
BigInt floor_of(const BigRat& x);
BigInt ceil_of(const BigRat& x);
BigInt isqrt(const BigInt& n);  // floor(sqrt(n)), n >= 0
bool is_square(const BigInt& n);
int sgn(const BigInt& x);
int sgn(const BigRat& x);
BigRat abs_of(const BigRat& x);
BigRat pow2(long k);  // 2^k, k may be negative
BigRat pow10(long k);

/// "p/q", or "p" when q == 1.
std::string to_string(const BigInt& x);
std::string to_string(const BigRat& x);
/// Parses "p", "p/q", or a decimal "1.25" / "-0.5".
BigRat parse_rat(const std::string& text);
BigInt parse_int(const std::string& text);
double to_double(const BigRat& x);
/// "d.ddde-N" with `digits` significant digits, truncated toward zero.
std::string to_scientific(const BigRat& x, int digits = 17);

// ---------------------------------------------------------------------------

/// Closed interval with exact rational endpoints, lo <= hi.
class RatInterval {
 public:
  RatInterval() = default;
  explicit RatInterval(const BigRat& point) : lo_(point), hi_(point) {}
  RatInterval(const BigRat& lo, const BigRat& hi);

  static RatInterval hull(const BigRat& a, const BigRat& b);

  const BigRat& lo() const { return lo_; }
  const BigRat& hi() const { return hi_; }
  BigRat width() const { return hi_ - lo_; }
  BigRat mid() const { return (lo_ + hi_) / 2; }
  bool is_point() const { return lo_ == hi_; }
  bool contains(const BigRat& x) const { return lo_ <= x && x <= hi_; }
  bool contains_zero() const { return sgn(lo_) <= 0 && sgn(hi_) >= 0; }
  bool overlaps(const RatInterval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
  /// Upper bound on |x| over the interval.
  BigRat magnitude() const;

  RatInterval operator-() const { return {-hi_, -lo_}; }
  RatInterval abs() const;
  RatInterval reciprocal() const;  // DivisionByZero if 0 is inside

  /// Endpoints rounded outward to dyadic rationals carrying about `bits`
  /// significant bits relative to the magnitude. Keeps numerators bounded
  /// through long products.
  RatInterval rounded_outward(unsigned bits) const;

  friend RatInterval operator+(const RatInterval& a, const RatInterval& b);
  friend RatInterval operator-(const RatInterval& a, const RatInterval& b);
  friend RatInterval operator*(const RatInterval& a, const RatInterval& b);
  friend RatInterval operator/(const RatInterval& a, const RatInterval& b);
  friend RatInterval operator+(const RatInterval& a, const BigRat& b) { return {a.lo_ + b, a.hi_ + b}; }
  friend RatInterval operator*(const RatInterval& a, const BigRat& b);
  friend bool operator==(const RatInterval& a, const RatInterval& b) {
    return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  }

 private:
  BigRat lo_{0};
  BigRat hi_{0};
};

// ---------------------------------------------------------------------------

/// Element x + y*sqrt(D) of Q(sqrt D). D is squarefree and > 1 whenever
/// y != 0; a rational element may carry D = 0 (no field attached yet).
class QuadNum {
 public:
  QuadNum() = default;
  QuadNum(const BigRat& x) : x_(x) {}  // NOLINT: rationals embed implicitly
  QuadNum(long x) : x_(x) {}           // NOLINT
  QuadNum(const BigRat& x, const BigRat& y, const BigInt& d);

  static QuadNum sqrt_of(const BigInt& d);  // sqrt(d), d squarefree non-square

  const BigRat& rational_part() const { return x_; }
  const BigRat& irrational_part() const { return y_; }
  const BigInt& radicand() const { return d_; }
  bool is_rational() const { return sgn(y_) == 0; }

  QuadNum conjugate() const { return {x_, -y_, d_}; }
  BigRat norm() const { return x_ * x_ - y_ * y_ * d_; }
  BigRat trace() const { return 2 * x_; }
  QuadNum inverse() const;

  int sign() const;
  BigInt floor() const;
  BigInt ceil() const { return -(-*this).floor(); }
  QuadNum abs() const { return sign() < 0 ? -*this : *this; }
  /// Dyadic enclosure of width <= width.
  RatInterval enclose(const BigRat& width) const;
  /// Enclosure whose width is below 2^-bits times the magnitude (point if
  /// rational). Zero stays exactly zero.
  RatInterval enclose_relative(unsigned bits) const;
  double to_double() const;

  QuadNum operator-() const { return {-x_, -y_, d_}; }
  friend QuadNum operator+(const QuadNum& a, const QuadNum& b);
  friend QuadNum operator-(const QuadNum& a, const QuadNum& b);
  friend QuadNum operator*(const QuadNum& a, const QuadNum& b);
  friend QuadNum operator/(const QuadNum& a, const QuadNum& b);
  QuadNum& operator+=(const QuadNum& o) { return *this = *this + o; }
  QuadNum& operator-=(const QuadNum& o) { return *this = *this - o; }
  QuadNum& operator*=(const QuadNum& o) { return *this = *this * o; }
  friend bool operator==(const QuadNum& a, const QuadNum& b);
  friend std::strong_ordering operator<=>(const QuadNum& a, const QuadNum& b) {
    const int s = (a - b).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  QuadNum pow(long n) const;

 private:
  static BigInt join_fields(const QuadNum& a, const QuadNum& b);

  BigRat x_{0};
  BigRat y_{0};
  BigInt d_{0};
};

// ---------------------------------------------------------------------------

/// Canonical quadratic irrational (P + e*sqrt(D)) / Q.
struct QuadIrr {
  BigInt P;
  BigInt e;
  BigInt D;
  BigInt Q;

  QuadNum value() const;
  friend bool operator==(const QuadIrr&, const QuadIrr&) = default;
};

inline constexpr std::uint64_t kDefaultSquarefreeBound = 1'000'000;

/// Canonical form: square factors of D moved into e, gcd(P, e, Q) = 1, Q > 0.
/// Throws DegenerateRational when the value is rational.
QuadIrr qi_normalize(const BigInt& P, const BigInt& e, const BigInt& D, const BigInt& Q,
                     std::uint64_t trial_bound = kDefaultSquarefreeBound);

/// Splits n > 0 into (k, m) with n = k^2 m and m squarefree (up to the
/// trial-division bound, see qi_normalize).
std::pair<BigInt, BigInt> split_square(const BigInt& n,
                                       std::uint64_t trial_bound = kDefaultSquarefreeBound);

using FieldValue = std::variant<BigRat, QuadIrr>;

FieldValue canonical(const QuadNum& x);
QuadNum to_quadnum(const FieldValue& v);

enum class ArithOp { Add, Sub, Mul, Div };
FieldValue qi_arith(const FieldValue& x, const FieldValue& y, ArithOp op);

// ---------------------------------------------------------------------------

/// A real number known through a decimal string and a certified enclosure.
struct Certified {
  std::string digits;
  RatInterval enclosure;
};

/// Decimal digits with an optional half-width; defaults to half a unit in
/// the last place.
Certified make_certified(const std::string& digits, const std::optional<BigRat>& half_width = {});

using RealTarget = std::variant<BigRat, QuadIrr, Certified>;

bool is_irrational(const RealTarget& x);
std::optional<QuadNum> exact_value(const RealTarget& x);
RatInterval enclose(const RealTarget& x, const BigRat& width);

// ---------------------------------------------------------------------------

/// The affine quantity c0 + c1*alpha for a fixed target alpha. Every D_n,
/// every s*alpha - gamma, and every fitted coefficient is of this shape.
struct Affine {
  BigRat c0{0};
  BigRat c1{0};

  static Affine constant(const BigRat& c) { return {c, 0}; }
  static Affine alpha() { return {0, 1}; }

  Affine operator-() const { return {-c0, -c1}; }
  friend Affine operator+(const Affine& a, const Affine& b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
  friend Affine operator-(const Affine& a, const Affine& b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
  friend Affine operator*(const BigRat& k, const Affine& a) { return {k * a.c0, k * a.c1}; }
  Affine& operator+=(const Affine& o) { c0 += o.c0; c1 += o.c1; return *this; }
  friend bool operator==(const Affine& a, const Affine& b) { return a.c0 == b.c0 && a.c1 == b.c1; }
};

/// Exact for rational and quadratic targets. Certified targets answer from
/// the stored enclosure and raise PrecisionExhausted when it is ambiguous.
int sign(const Affine& v, const RealTarget& alpha);
BigInt floor(const Affine& v, const RealTarget& alpha);
BigInt nearest_integer(const Affine& v, const RealTarget& alpha);
RatInterval enclose(const Affine& v, const RealTarget& alpha, const BigRat& width);
/// Relative enclosure; certified targets return whatever the stored
/// enclosure supports.
RatInterval enclose_relative(const Affine& v, const RealTarget& alpha, unsigned bits);
std::optional<QuadNum> exact_value(const Affine& v, const RealTarget& alpha);
/// ||v||, the distance to the nearest integer, as an affine form.
Affine distance_to_integer(const Affine& v, const RealTarget& alpha);
/// Compare v against a rational bound: v <= bound.
bool certainly_le(const Affine& v, const BigRat& bound, const RealTarget& alpha);

}  // namespace ordapprox
