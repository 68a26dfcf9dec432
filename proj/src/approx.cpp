#include "ordapprox/approx.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ordapprox {

Coefficient to_coefficient(const Affine& v, const RealTarget& alpha) {
  if (const auto x = exact_value(v, alpha)) {
    const FieldValue f = canonical(*x);
    if (const auto* r = std::get_if<BigRat>(&f)) return *r;
    return std::get<QuadIrr>(f);
  }
  return enclose_relative(v, alpha, 128);
}

namespace {

BigRat pow_rat(const BigRat& x, std::size_t n) {
  BigRat out = 1;
  for (std::size_t i = 0; i < n; ++i) out *= x;
  return out;
}

BigRat scale_factor(const Pair& p, std::size_t N) {
  return pow_rat(BigRat(abs(p.r) + abs(p.s)), N);
}

std::optional<std::vector<ResidualRow>> exact_rows(const RealTarget& alpha, std::span<const Pair> pairs,
                                                   std::span<const Coefficient> gamma) {
  const auto a = exact_value(alpha);
  if (!a) return std::nullopt;
  std::vector<QuadNum> g;
  for (const auto& c : gamma) {
    if (const auto* r = std::get_if<BigRat>(&c)) {
      g.emplace_back(*r);
    } else if (const auto* q = std::get_if<QuadIrr>(&c)) {
      g.push_back(q->value());
    } else {
      return std::nullopt;
    }
  }
  std::vector<ResidualRow> rows;
  try {
    for (const auto& p : pairs) {
      const BigRat inv = make_rat(1, p.s);
      QuadNum rho = QuadNum(make_rat(p.r, p.s)) - *a;
      BigRat w = inv;
      for (const auto& gj : g) {
        rho -= QuadNum(w) * gj;
        w *= inv;
      }
      const QuadNum scaled = rho.abs() * QuadNum(scale_factor(p, gamma.size()));
      rows.push_back({p, rho.enclose_relative(128), scaled.enclose_relative(128)});
    }
  } catch (const DomainError& e) {
    if (e.kind() != ErrorKind::MixedField) throw;
    return std::nullopt;
  }
  return rows;
}

RatInterval coefficient_interval(const Coefficient& c, unsigned bits) {
  if (const auto* r = std::get_if<BigRat>(&c)) return RatInterval(*r);
  if (const auto* q = std::get_if<QuadIrr>(&c)) return q->value().enclose(pow2(-static_cast<long>(bits)));
  return std::get<RatInterval>(c);
}

std::vector<ResidualRow> interval_rows(const RealTarget& alpha, std::span<const Pair> pairs,
                                       std::span<const Coefficient> gamma, unsigned bits) {
  const RatInterval a = std::holds_alternative<Certified>(alpha)
                            ? std::get<Certified>(alpha).enclosure
                            : enclose(alpha, pow2(-static_cast<long>(bits)));
  std::vector<RatInterval> g;
  for (const auto& c : gamma) g.push_back(coefficient_interval(c, bits));
  std::vector<ResidualRow> rows;
  for (const auto& p : pairs) {
    const BigRat inv = make_rat(1, p.s);
    RatInterval rho = RatInterval(make_rat(p.r, p.s)) - a;
    BigRat w = inv;
    for (const auto& gj : g) {
      rho = rho - gj * w;
      w *= inv;
    }
    rows.push_back({p, rho, rho.abs() * scale_factor(p, gamma.size())});
  }
  return rows;
}

bool is_zero(const RatInterval& x) { return x.is_point() && sgn(x.lo()) == 0; }

}  // namespace

DecayReport decay_report(const RealTarget& alpha, std::span<const Pair> pairs,
                         std::span<const Coefficient> gamma, const DecayOptions& opt) {
  DecayReport rep;
  rep.N = gamma.size();
  rep.window = opt.window;
  auto rows = exact_rows(alpha, pairs, gamma);
  rep.rows = rows ? std::move(*rows) : interval_rows(alpha, pairs, gamma, opt.precision_bits);
  if (rep.rows.size() < 2) {
    rep.diagnostics.push_back("fewer than 2 pairs to judge decay");
    return rep;
  }
  rep.tolerance = opt.tolerance ? *opt.tolerance : rep.rows.front().scaled.hi() / 1000;

  const std::size_t w = std::min(std::max<std::size_t>(opt.window, 2), rep.rows.size());
  const std::size_t first = rep.rows.size() - w;
  const auto& v0 = rep.rows[first].scaled;
  const auto& vl = rep.rows.back().scaled;

  bool all_zero = true;
  bool monotone = true;
  for (std::size_t i = first; i < rep.rows.size(); ++i) {
    all_zero = all_zero && is_zero(rep.rows[i].scaled);
    if (i > first && rep.rows[i].scaled.lo() > rep.rows[i - 1].scaled.hi()) {
      monotone = false;
      rep.diagnostics.push_back("scaled residual increases at s = " + to_string(rep.rows[i].pair.s));
    }
  }
  if (all_zero) {
    rep.pass = true;
    rep.diagnostics.push_back("scaled residuals exactly zero over the window");
    return rep;
  }
  const bool decreased = is_zero(vl) || vl.hi() < v0.lo();
  if (!decreased) rep.diagnostics.push_back("no strict decrease across the window");
  const bool small = is_zero(vl) || vl.hi() < rep.tolerance;
  if (!small) rep.diagnostics.push_back("final scaled residual not below tolerance " + to_scientific(rep.tolerance));
  rep.pass = monotone && decreased && small;
  return rep;
}

DecayReport verify_order(const ApproxSet& set, const DecayOptions& opt) {
  require(set.gamma.size() == set.N, ErrorKind::PreconditionFailed, "gamma list does not have N entries");
  return decay_report(set.alpha, set.pairs, set.gamma, opt);
}

FitResult fit_coefficients(std::vector<Pair> pairs, const RealTarget& alpha, std::size_t N,
                           const DecayOptions& opt) {
  if (pairs.size() < N + 2) {
    fail(ErrorKind::InsufficientPairs, "order " + std::to_string(N) + " needs at least " +
                                           std::to_string(N + 2) + " pairs, got " + std::to_string(pairs.size()));
  }
  for (const auto& p : pairs) require(sgn(p.s) > 0, ErrorKind::PreconditionFailed, "denominators must be positive");
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.s < y.s; });
  for (std::size_t i = 1; i < pairs.size(); ++i) {
    if (pairs[i].s == pairs[i - 1].s) fail(ErrorKind::SingularSystem, "duplicate s = " + to_string(pairs[i].s));
  }

  // Rows: [1, s^-1, ..., s^{1-N}] | r, -s
  const std::size_t base = pairs.size() - N;
  std::vector<std::vector<BigRat>> m(N, std::vector<BigRat>(N + 2));
  for (std::size_t i = 0; i < N; ++i) {
    const Pair& p = pairs[base + i];
    const BigRat inv = make_rat(1, p.s);
    BigRat w = 1;
    for (std::size_t j = 0; j < N; ++j) {
      m[i][j] = w;
      w *= inv;
    }
    m[i][N] = p.r;
    m[i][N + 1] = -p.s;
  }
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t piv = col;
    while (piv < N && sgn(m[piv][col]) == 0) ++piv;
    if (piv == N) fail(ErrorKind::SingularSystem, "coefficient system is singular");
    std::swap(m[col], m[piv]);
    for (std::size_t i = 0; i < N; ++i) {
      if (i == col || sgn(m[i][col]) == 0) continue;
      const BigRat f = m[i][col] / m[col][col];
      for (std::size_t j = col; j < N + 2; ++j) m[i][j] -= f * m[col][j];
    }
  }

  FitResult out;
  for (std::size_t j = 0; j < N; ++j) {
    out.gamma_affine.push_back(Affine{m[j][N] / m[j][j], m[j][N + 1] / m[j][j]});
    out.gamma.push_back(to_coefficient(out.gamma_affine.back(), alpha));
  }
  out.report = decay_report(alpha, std::span(pairs).first(base), out.gamma, opt);
  return out;
}

// ---------------------------------------------------------------------------

ApproxSet nearest_numerators(const RealTarget& alpha, const std::vector<BigInt>& s_list) {
  ApproxSet set;
  set.alpha = alpha;
  for (std::size_t i = 0; i < s_list.size(); ++i) {
    const BigInt& s = s_list[i];
    require(sgn(s) > 0, ErrorKind::PreconditionFailed, "denominators must be positive");
    require(i == 0 || s_list[i - 1] < s, ErrorKind::PreconditionFailed, "denominators must increase");
    const Affine half = Affine{BigRat(1, 2), BigRat(s)};
    if (const auto* r = std::get_if<BigRat>(&alpha); r && BigRat(*r * s + BigRat(1, 2)).get_den() == 1) {
      fail(ErrorKind::PrecisionExhausted, "alpha*s is a half-integer at s = " + to_string(s));
    }
    set.pairs.push_back({floor(half, alpha), s});
  }
  return set;
}

ApproxSet psi_approx_set(const RealTarget& alpha, const PsiConstruction& c, std::size_t N) {
  require(N >= 1, ErrorKind::PreconditionFailed, "order must be >= 1");
  ApproxSet set = nearest_numerators(alpha, c.s);
  set.N = N;
  const BigInt j = nearest_integer(c.gamma_partial, alpha);
  const RatInterval g1 = enclose_relative(Affine::constant(BigRat(j)) - c.gamma_partial, alpha, 256);
  set.gamma.push_back(RatInterval(g1.lo() - c.tail, g1.hi() + c.tail));
  for (std::size_t k = 1; k < N; ++k) set.gamma.push_back(BigRat(0));
  return set;
}

// ---------------------------------------------------------------------------

ApproxSet line_set(const BigInt& a, const BigInt& b, const BigInt& d, std::size_t count) {
  require(sgn(b) > 0, ErrorKind::PreconditionFailed, "b must be positive");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  require(g == 1, ErrorKind::PreconditionFailed, "gcd(a, b) must be 1");
  BigInt s0 = 1;
  if (b > 1) {
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    const BigInt t = -d * inv;
    mpz_fdiv_r(s0.get_mpz_t(), t.get_mpz_t(), b.get_mpz_t());
    if (s0 == 0) s0 = b;
  }
  ApproxSet set;
  set.alpha = make_rat(a, b);
  set.N = 1;
  set.gamma.push_back(make_rat(d, b));
  for (std::size_t k = 0; k < count; ++k) {
    const BigInt s = s0 + b * static_cast<unsigned long>(k);
    set.pairs.push_back({(a * s + d) / b, s});
  }
  return set;
}

std::optional<Line> detect_line(std::span<const Pair> pairs, std::size_t max_exceptions) {
  require(pairs.size() >= 3, ErrorKind::InsufficientPairs, "line detection needs at least 3 pairs");
  const Pair& p1 = pairs[pairs.size() - 2];
  const Pair& p2 = pairs.back();
  const BigInt ds = p2.s - p1.s;
  if (sgn(ds) == 0) return std::nullopt;
  const BigRat slope = make_rat(p2.r - p1.r, ds);  // a/b with b > 0
  Line line{slope.get_num(), slope.get_den(), 0, 0};
  line.d = line.b * p1.r - line.a * p1.s;
  std::size_t run = 0;
  for (std::size_t i = pairs.size(); i-- > 0;) {
    if (line.b * pairs[i].r != line.a * pairs[i].s + line.d) break;
    ++run;
  }
  line.exceptions = pairs.size() - run;
  if (run < 3 || 2 * run <= pairs.size() || line.exceptions > max_exceptions) return std::nullopt;
  return line;
}

// ---------------------------------------------------------------------------

std::string growth_name(Growth g) {
  switch (g) {
    case Growth::Linear: return "linear";
    case Growth::Polynomial: return "polynomial";
    case Growth::Exponential: return "exponential";
    case Growth::SuperExponential: return "super-exponential";
  }
  return "unknown";
}

double log_of(const BigInt& x) {
  require(sgn(x) > 0, ErrorKind::PreconditionFailed, "log of a non-positive integer");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

GrowthProfile growth_profile(std::span<const BigInt> s) {
  require(s.size() >= 3, ErrorKind::InsufficientPairs, "growth profile needs at least 3 denominators");
  GrowthProfile g;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    require(sgn(s[i]) > 0 && s[i] < s[i + 1], ErrorKind::PreconditionFailed,
            "denominators must be positive and strictly increasing");
    g.differences.push_back(s[i + 1] - s[i]);
    g.log_ratios.push_back(log_of(s[i + 1]) - log_of(s[i]));
  }
  const auto [dmin, dmax] = std::minmax_element(g.differences.begin(), g.differences.end());
  const auto& l = g.log_ratios;
  const bool increasing = std::adjacent_find(l.begin(), l.end(), std::greater_equal<>()) == l.end();
  if (*dmax <= 2 * *dmin) {
    g.growth = Growth::Linear;
  } else if (increasing && l.back() > 2 * l[l.size() - 2]) {
    g.growth = Growth::SuperExponential;
  } else if (l.back() >= l.front() / 2) {
    g.growth = Growth::Exponential;
  } else {
    g.growth = Growth::Polynomial;
  }
  return g;
}

std::string residual_csv(const DecayReport& report) {
  std::ostringstream out;
  out << "s,r,residual,scaled_residual\n";
  for (const auto& row : report.rows) {
    out << to_string(row.pair.s) << ',' << to_string(row.pair.r) << ',' << to_scientific(row.residual.mid())
        << ',' << to_scientific(row.scaled.mid()) << '\n';
  }
  return out.str();
}

}  // namespace ordapprox
