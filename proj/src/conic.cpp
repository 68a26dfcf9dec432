#include "ordapprox/conic.hpp"

#include <algorithm>

namespace ordapprox {

namespace {

BigInt gcd_of(const BigInt& x, const BigInt& y) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  return g;
}

QuadNum sqrt_value(const BigInt& n) { return qi_normalize(0, 1, n, 1).value(); }

std::string form_string(const ConicForm& f) {
  return "(" + to_string(f.a) + "," + to_string(f.b) + "," + to_string(f.c) + "," + to_string(f.d) + ")";
}

}  // namespace

void check_form(const ConicForm& f) {
  require(sgn(f.a) > 0, ErrorKind::PreconditionFailed, "form needs a > 0");
  require(gcd_of(gcd_of(f.a, f.b), f.c) == 1, ErrorKind::PreconditionFailed, "form must be primitive");
  const BigInt disc = f.discriminant();
  require(sgn(disc) > 0 && !is_square(disc), ErrorKind::PreconditionFailed,
          "discriminant must be positive and not a square, got " + to_string(disc));
}

Automorph Automorph::squared() const {
  Automorph m{t11 * t11 + t12 * t21, t11 * t12 + t12 * t22, t21 * t11 + t22 * t21, t21 * t12 + t22 * t22, 0, t * u};
  m.t = m.t11 + m.t22;
  return m;
}

std::array<BigInt, 3> Automorph::transform(const ConicForm& f) const {
  return {f.a * t11 * t11 + f.b * t11 * t21 + f.c * t21 * t21,
          2 * f.a * t11 * t12 + f.b * (t11 * t22 + t12 * t21) + 2 * f.c * t21 * t22,
          f.a * t12 * t12 + f.b * t12 * t22 + f.c * t22 * t22};
}

std::array<BigInt, 3> minimal_polynomial(const QuadIrr& x) {
  // Q x - P = e sqrt(D)
  BigInt a = x.Q * x.Q;
  BigInt b = -2 * x.P * x.Q;
  BigInt c = x.P * x.P - x.e * x.e * x.D;
  const BigInt g = gcd_of(gcd_of(a, b), c);
  a /= g;
  b /= g;
  c /= g;
  return {a, b, c};
}

std::pair<BigInt, BigInt> fundamental_pell4(const BigInt& disc) {
  require(sgn(disc) > 0 && !is_square(disc), ErrorKind::PreconditionFailed, "Pell needs a positive non-square");
  for (unsigned long u = 1; u <= 64; ++u) {
    const BigInt t2 = disc * u * u + 4;
    if (is_square(t2)) return {isqrt(t2), BigInt(u)};
  }
  // Every solution with u > 64 has t/u or (t/2)/(u/2) among the convergents of sqrt(disc).
  const CFExpansion cf = cf_expand(RealTarget(qi_normalize(0, 1, disc, 1)), 1);
  ConvergentStream st(cf);
  std::optional<std::pair<BigInt, BigInt>> best;
  for (;;) {
    const Convergent& c = st.current();
    if (best && c.q >= best->second) return *best;
    const BigInt v = c.p * c.p - disc * c.q * c.q;
    if (v == 4 && (!best || c.q < best->second)) best = {c.p, c.q};
    if (v == 1 && (!best || 2 * c.q < best->second)) best = {2 * c.p, 2 * c.q};
    st.advance();
  }
}

Automorph fundamental_automorph(const ConicForm& f) {
  check_form(f);
  const auto [t, u] = fundamental_pell4(f.discriminant());
  // t and b u have the same parity since t^2 = b^2 u^2 - 4ac u^2 + 4.
  return {(t - f.b * u) / 2, -f.c * u, f.a * u, (t + f.b * u) / 2, t, u};
}

std::optional<Pair> find_seed(const ConicForm& f, const BigInt& bound) {
  require(bound >= 1, ErrorKind::PreconditionFailed, "seed bound must be >= 1");
  for (BigInt s = 1; s <= bound; ++s) {
    for (BigInt r = 1; r <= bound; ++r) {
      if (f.value(r, s) == f.d) return Pair{r, s};
    }
  }
  return std::nullopt;
}

QuadIrr conic_root(const ConicForm& f, int root_sign) {
  return qi_normalize(-f.b, root_sign, f.discriminant(), 2 * f.a);
}

std::vector<Coefficient> LaurentExpansion::coefficients() const {
  std::vector<Coefficient> out;
  for (const auto& g : gamma) {
    const FieldValue v = canonical(g);
    if (const auto* r = std::get_if<BigRat>(&v)) {
      out.emplace_back(*r);
    } else {
      out.emplace_back(std::get<QuadIrr>(v));
    }
  }
  return out;
}

LaurentExpansion laurent_expansion(const ConicForm& f, std::size_t J, int root_sign) {
  check_form(f);
  require(root_sign == 1 || root_sign == -1, ErrorKind::PreconditionFailed, "root sign must be +1 or -1");
  const BigInt disc = f.discriminant();
  LaurentExpansion out;
  out.gamma.assign(J, QuadNum(0));
  const std::size_t terms = J / 2;
  out.remainder_power = 2 * (terms + 1);
  out.s_min = 1;
  if (sgn(f.d) == 0) {
    out.remainder_coeff = 0;
    return out;
  }
  // r/s = alpha + (root*sqrt(disc)/(2a)) * (sqrt(1 + x) - 1), x = 4ad/(disc s^2)
  const BigRat x = make_rat(4 * f.a * f.d, disc);
  const QuadNum lead = QuadNum(make_rat(root_sign, 2 * f.a)) * sqrt_value(disc);
  BigRat binom = 1;  // C(1/2, k)
  BigRat xk = 1;
  for (std::size_t k = 1; k <= terms; ++k) {
    binom *= (make_rat(1, 2) - BigRat(k - 1)) / BigRat(k);
    xk *= x;
    out.gamma[2 * k - 1] = lead * QuadNum(binom * xk);
  }
  // For |x| <= 1/2 the tail is at most (sqrt(disc)/(2a)) |x|^{terms+1}.
  const BigRat ax = abs_of(x);
  BigRat tail = make_rat(isqrt(disc) + 1, 2 * f.a);
  for (std::size_t k = 0; k <= terms; ++k) tail *= ax;
  out.remainder_coeff = tail;
  out.s_min = isqrt(ceil_of(2 * ax)) + 1;
  return out;
}

ConicOrbit conic_orbit(const ConicForm& f, const Pair& seed, std::size_t count) {
  check_form(f);
  require(seed.r >= 1 && seed.s >= 1, ErrorKind::PreconditionFailed, "seed must lie in N^2");
  require(f.holds(seed), ErrorKind::PreconditionFailed,
          "seed (" + to_string(seed.r) + "," + to_string(seed.s) + ") is not on the conic " + form_string(f));
  const Automorph T = fundamental_automorph(f);

  auto walk = [&](const Automorph& m) -> std::optional<std::vector<Pair>> {
    std::vector<Pair> pairs{seed};
    while (pairs.size() < count) {
      const Pair next = m.apply(pairs.back());
      if (next.r < 1 || next.s <= pairs.back().s) return std::nullopt;
      pairs.push_back(next);
    }
    return pairs;
  };

  ConicOrbit out;
  out.form = f;
  const std::array<std::pair<Automorph, int>, 3> choices{{{T, 1}, {T.inverse(), -1}, {T.squared(), 1}}};
  for (const auto& [m, sign] : choices) {
    // The direction must also converge inside the quadrant.
    if (conic_root(f, sign).value().sign() <= 0 && sgn(f.d) != 0) continue;
    if (auto pairs = walk(m)) {
      out.step = m;
      out.root_sign = sign;
      out.set.alpha = conic_root(f, sign);
      out.set.pairs = std::move(*pairs);
      out.set.N = 2;
      out.set.gamma = laurent_expansion(f, 2, sign).coefficients();
      return out;
    }
  }
  fail(ErrorKind::OrbitLeavesQuadrant, "orbit of the seed leaves N^2 under every automorph choice");
}

PeriodicConstruction periodic_construction(const RealTarget& alpha, std::size_t count, const DecayOptions& opt) {
  const auto* x = std::get_if<QuadIrr>(&alpha);
  require(x != nullptr, ErrorKind::NotPeriodic, "the periodic construction needs a quadratic irrational");
  require(count >= 1, ErrorKind::PreconditionFailed, "count must be >= 1");
  const QuadNum av = x->value();
  require(av.sign() > 0 && (av - QuadNum(1)).sign() < 0, ErrorKind::PreconditionFailed, "alpha must lie in (0, 1)");

  const CFExpansion head = cf_expand(alpha, 1);
  PeriodicConstruction out;
  out.K = head.period->K - 1;
  out.L = head.period->L;
  const std::size_t n_max = out.K + 2 * count * out.L;
  const CFExpansion cf = cf_expand(alpha, n_max + 2);
  const auto conv = convergents(cf, n_max);

  // y = [a_{K+L}; a_{K+L-1}, ..., a_{K+1}, y], reversed period, solved exactly.
  BigInt p0 = 1, p1 = cf.digit(out.K + out.L);
  BigInt q0 = 0, q1 = 1;
  for (std::size_t i = out.K + out.L - 1; i >= out.K + 1; --i) {
    const BigInt& b = cf.digit(i);
    std::tie(p0, p1) = std::pair<BigInt, BigInt>{p1, b * p1 + p0};
    std::tie(q0, q1) = std::pair<BigInt, BigInt>{q1, b * q1 + q0};
  }
  // q1 y^2 + (q0 - p1) y - p0 = 0
  const BigInt disc = (q0 - p1) * (q0 - p1) + 4 * q1 * p0;
  const QuadNum y = qi_normalize(p1 - q0, 1, disc, 2 * q1).value();
  const QuadNum zeta = complete_quotient_exact(cf, out.K + 1);
  QuadNum g2 = (zeta + y.inverse()).inverse();
  if (out.K % 2 == 0) g2 = -g2;
  out.gamma2 = std::get<QuadIrr>(canonical(g2));

  const auto [a, b, c] = minimal_polynomial(*x);
  const QuadNum integ = (QuadNum(BigRat(2 * a)) * av + QuadNum(BigRat(b))) * g2;
  require(integ.is_rational() && integ.rational_part().get_den() == 1, ErrorKind::PreconditionFailed,
          "(2a alpha + b) gamma_2 is not an integer");
  out.integrality = integ.rational_part().get_num();

  out.set.alpha = alpha;
  out.set.N = 2;
  out.set.gamma = {BigRat(0), out.gamma2};
  for (std::size_t k = 1; k <= count; ++k) {
    const Convergent& cv = conv[out.K + 2 * k * out.L];
    out.set.pairs.push_back({cv.p, cv.q});
  }
  out.report = decay_report(alpha, out.set.pairs, out.set.gamma, opt);
  return out;
}

std::optional<ConicForm> quad_detect(std::span<const Pair> pairs, std::size_t max_exceptions) {
  require(pairs.size() >= 5, ErrorKind::InsufficientPairs, "conic detection needs at least 5 pairs");
  // Rows [r^2, rs, s^2, -1] of the three trailing pairs.
  std::array<std::array<BigRat, 4>, 3> m;
  for (std::size_t i = 0; i < 3; ++i) {
    const Pair& p = pairs[pairs.size() - 3 + i];
    m[i] = {BigRat(p.r * p.r), BigRat(p.r * p.s), BigRat(p.s * p.s), BigRat(-1)};
  }
  std::array<std::size_t, 3> pivot_col{};
  std::size_t row = 0;
  for (std::size_t col = 0; col < 4 && row < 3; ++col) {
    std::size_t piv = row;
    while (piv < 3 && sgn(m[piv][col]) == 0) ++piv;
    if (piv == 3) continue;
    std::swap(m[row], m[piv]);
    const BigRat inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i == row || sgn(m[i][col]) == 0) continue;
      const BigRat k = m[i][col];
      for (std::size_t j = 0; j < 4; ++j) m[i][j] -= k * m[row][j];
    }
    pivot_col[row++] = col;
  }
  if (row < 3) return std::nullopt;

  std::size_t free_col = 0;
  while (std::find(pivot_col.begin(), pivot_col.end(), free_col) != pivot_col.end()) ++free_col;
  std::array<BigRat, 4> v{};
  v[free_col] = 1;
  for (std::size_t i = 0; i < 3; ++i) v[pivot_col[i]] = -m[i][free_col];

  BigInt den = 1;
  for (const auto& x : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
  std::array<BigInt, 4> w;
  BigInt g = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    w[i] = BigRat(v[i] * den).get_num();
    g = gcd_of(g, w[i]);
  }
  for (auto& x : w) x /= g;
  if (sgn(w[0]) < 0) {
    for (auto& x : w) x = -x;
  }
  ConicForm f{w[0], w[1], w[2], w[3]};
  const BigInt disc = f.discriminant();
  if (sgn(f.a) <= 0 || sgn(disc) <= 0 || is_square(disc)) return std::nullopt;
  if (gcd_of(gcd_of(f.a, f.b), f.c) != 1) return std::nullopt;

  std::size_t run = 0;
  for (std::size_t i = pairs.size(); i-- > 0;) {
    if (!f.holds(pairs[i])) break;
    ++run;
  }
  if (pairs.size() - run > max_exceptions || 2 * run <= pairs.size()) return std::nullopt;
  return f;
}

}  // namespace ordapprox
