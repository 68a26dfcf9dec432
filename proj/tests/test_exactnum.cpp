#include <doctest.h>

#include <random>

#include "ordapprox/exactnum.hpp"

using namespace ordapprox;

namespace {

const QuadNum kPhi{BigRat(1, 2), BigRat(1, 2), 5};

QuadIrr random_quadirr(std::mt19937_64& rng, long D) {
  std::uniform_int_distribution<long> coef(-40, 40);
  std::uniform_int_distribution<long> den(1, 30);
  long e = 0;
  while (e == 0) e = coef(rng);
  return qi_normalize(coef(rng), e, D, den(rng));
}

}  // namespace

TEST_CASE("qi_normalize canonical forms") {
  const QuadIrr phi = qi_normalize(1, 1, 5, 2);
  CHECK(phi == QuadIrr{1, 1, 5, 2});

  // 20 = 2^2 * 5, then gcd(2, 4, 4) = 2.
  CHECK(qi_normalize(2, 2, 20, 4) == QuadIrr{1, 2, 5, 2});
  CHECK(qi_normalize(3, -1, 8, -6) == QuadIrr{-3, 2, 2, 6});

  CHECK_THROWS_AS(qi_normalize(0, 1, 9, 1), DomainError);
  try {
    qi_normalize(0, 1, 9, 1);
  } catch (const DomainError& e) {
    CHECK(e.kind() == ErrorKind::DegenerateRational);
  }
  CHECK_THROWS_AS(qi_normalize(1, 0, 5, 1), DomainError);
  CHECK_THROWS_AS(qi_normalize(1, 1, 5, 0), DomainError);
}

TEST_CASE("split_square") {
  CHECK(split_square(BigInt(72)) == std::pair<BigInt, BigInt>{6, 2});
  CHECK(split_square(BigInt(1)) == std::pair<BigInt, BigInt>{1, 1});
  // Cofactor above the trial bound that is a perfect square.
  const BigInt big = BigInt(1000003) * 1000003 * 7;
  CHECK(split_square(big, 1000) == std::pair<BigInt, BigInt>{1000003, 7});
}

TEST_CASE("qi_arith golden-ratio identities") {
  const FieldValue phi = QuadIrr{1, 1, 5, 2};
  const FieldValue inv = qi_arith(BigRat(1), phi, ArithOp::Div);
  CHECK(std::get<QuadIrr>(inv) == QuadIrr{-1, 1, 5, 2});
  CHECK(std::get<BigRat>(qi_arith(phi, inv, ArithOp::Mul)) == 1);

  const FieldValue sq = qi_arith(phi, phi, ArithOp::Mul);
  const FieldValue r = qi_arith(qi_arith(sq, phi, ArithOp::Sub), BigRat(1), ArithOp::Sub);
  CHECK(std::get<BigRat>(r) == 0);

  const FieldValue t = qi_arith(qi_arith(BigRat(2), phi, ArithOp::Mul), BigRat(1), ArithOp::Sub);
  CHECK(std::get<BigRat>(qi_arith(t, t, ArithOp::Mul)) == 5);
}

TEST_CASE("qi_arith errors") {
  const FieldValue phi = QuadIrr{1, 1, 5, 2};
  const FieldValue rt2 = QuadIrr{0, 1, 2, 1};
  CHECK_THROWS_AS(qi_arith(phi, rt2, ArithOp::Add), DomainError);
  try {
    qi_arith(phi, rt2, ArithOp::Mul);
  } catch (const DomainError& e) {
    CHECK(e.kind() == ErrorKind::MixedField);
  }
  try {
    qi_arith(phi, BigRat(0), ArithOp::Div);
    FAIL("expected DivisionByZero");
  } catch (const DomainError& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
}

TEST_CASE("QuadNum sign and floor agree with doubles on small values") {
  std::mt19937_64 rng(7);
  for (long D : {2L, 3L, 5L, 13L}) {
    for (int i = 0; i < 200; ++i) {
      const QuadNum x = random_quadirr(rng, D).value();
      const double v = x.rational_part().get_d() + x.irrational_part().get_d() * std::sqrt(double(D));
      CHECK(x.sign() == (v > 0 ? 1 : -1));
      const BigInt f = x.floor();
      CHECK((x - QuadNum(BigRat(f))).sign() >= 0);
      CHECK((x - QuadNum(BigRat(f + 1))).sign() < 0);
    }
  }
}

TEST_CASE("re-normalizing a canonical QuadIrr is the identity") {
  std::mt19937_64 rng(11);
  for (long D : {2L, 6L, 7L, 10L}) {
    for (int i = 0; i < 200; ++i) {
      const QuadIrr x = random_quadirr(rng, D);
      CHECK(qi_normalize(x.P, x.e, x.D, x.Q) == x);
      CHECK(std::get<QuadIrr>(canonical(x.value())) == x);
    }
  }
}

TEST_CASE("field axioms hold exactly on random samples") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const QuadNum x = random_quadirr(rng, 5).value();
    const QuadNum y = random_quadirr(rng, 5).value();
    const QuadNum z = random_quadirr(rng, 5).value();
    CHECK((x + y) + z == x + (y + z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * x.inverse() == QuadNum(1));
  }
}

TEST_CASE("enclose") {
  const RealTarget phi = QuadIrr{1, 1, 5, 2};
  const RatInterval iv = enclose(phi, BigRat(1, 10000));
  CHECK(iv.width() <= BigRat(1, 10000));
  CHECK(iv.lo() >= make_rat(16180, 10000));
  CHECK(iv.hi() <= make_rat(16181, 10000));
  // x^2 - x - 1 changes sign across the enclosure.
  auto poly = [](const BigRat& x) -> BigRat { return x * x - x - 1; };
  CHECK(sgn(poly(iv.lo())) < 0);
  CHECK(sgn(poly(iv.hi())) > 0);

  CHECK(enclose(RealTarget(BigRat(3, 7)), BigRat(1, 1000000)) == RatInterval(BigRat(3, 7)));

  const RealTarget c = make_certified("1.41", make_rat(5, 1000));
  CHECK(enclose(c, BigRat(1, 10)).contains(make_rat(141, 100)));
  try {
    enclose(c, BigRat(1, 1000000));
    FAIL("expected PrecisionExhausted");
  } catch (const DomainError& e) {
    CHECK(e.kind() == ErrorKind::PrecisionExhausted);
  }
}

TEST_CASE("enclosures bracket the root of the minimal polynomial") {
  std::mt19937_64 rng(5);
  for (long D : {2L, 3L, 5L, 11L}) {
    for (int i = 0; i < 100; ++i) {
      const QuadIrr q = random_quadirr(rng, D);
      const QuadNum x = q.value();
      // Q^2 x^2 - 2PQ x + P^2 - e^2 D vanishes at x; the conjugate is the
      // other root, so the sign flips across a tight enclosure of x.
      auto poly = [&](const BigRat& t) -> BigRat {
        return BigRat(q.Q * q.Q) * t * t - BigRat(2 * q.P * q.Q) * t + BigRat(q.P * q.P - q.e * q.e * q.D);
      };
      const RatInterval iv = x.enclose(pow2(-80));
      CHECK(iv.contains(iv.lo()));
      CHECK(sgn(poly(iv.lo())) * sgn(poly(iv.hi())) < 0);
      const RatInterval rel = x.enclose_relative(64);
      CHECK(sgn(poly(rel.lo())) * sgn(poly(rel.hi())) < 0);
    }
  }
}

TEST_CASE("RatInterval arithmetic") {
  const RatInterval a(BigRat(-1), BigRat(2));
  const RatInterval b(BigRat(3), BigRat(4));
  CHECK(a * b == RatInterval(BigRat(-4), BigRat(8)));
  CHECK(a - b == RatInterval(BigRat(-5), BigRat(-1)));
  CHECK(b.reciprocal() == RatInterval(BigRat(1, 4), BigRat(1, 3)));
  CHECK_THROWS_AS(a.reciprocal(), DomainError);
  CHECK(a.abs() == RatInterval(BigRat(0), BigRat(2)));
  const RatInterval r = RatInterval(BigRat(1, 3), BigRat(1, 3)).rounded_outward(20);
  CHECK(r.contains(BigRat(1, 3)));
  CHECK(r.width() < pow2(-18));
  CHECK_THROWS_AS(RatInterval(BigRat(1), BigRat(0)), DomainError);
}

TEST_CASE("affine forms over targets") {
  const RealTarget phi = QuadIrr{1, 1, 5, 2};
  // 5/phi - 3 = (5 sqrt5 - 11)/2 > 0 evaluated through alpha = 1/phi.
  const RealTarget inv = QuadIrr{-1, 1, 5, 2};
  const Affine d4{-3, 5};
  CHECK(sign(d4, inv) > 0);
  CHECK(std::get<QuadIrr>(canonical(*exact_value(d4, inv))) == QuadIrr{-11, 5, 5, 2});
  CHECK(floor(Affine{0, 10}, phi) == 16);
  CHECK(nearest_integer(Affine{0, 238}, inv) == 147);
  // ||phi|| = 2 - phi.
  CHECK(distance_to_integer(Affine{0, 1}, phi) == Affine{2, -1});

  const RealTarget c = make_certified("1.41", make_rat(5, 1000));
  CHECK(sign(Affine{-1, 1}, c) > 0);
  CHECK_THROWS_AS(sign(Affine{BigRat(-141, 100), 1}, c), DomainError);
  CHECK(floor(Affine{0, 1}, c) == 1);
}

TEST_CASE("parse helpers") {
  CHECK(parse_rat("3/7") == BigRat(3, 7));
  CHECK(parse_rat("-0.25") == BigRat(-1, 4));
  CHECK(parse_rat("1e-3") == BigRat(1, 1000));
  CHECK(parse_rat("12") == 12);
  CHECK(to_string(make_rat(6, 4)) == "3/2");
  CHECK_THROWS_AS(parse_int("x1"), DomainError);
  const Certified c = make_certified("1.41");
  CHECK(c.enclosure == RatInterval(make_rat(1405, 1000), make_rat(1415, 1000)));
}
