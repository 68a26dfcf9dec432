// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "ordapprox/approx.hpp"
#include "ordapprox/cf.hpp"
#include "ordapprox/cli.hpp"
#include "ordapprox/conic.hpp"
#include "ordapprox/ostrowski.hpp"
#include "ordapprox/serialize.hpp"

using namespace ordapprox;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

const QuadIrr kPhi{1, 1, 5, 2};
const QuadIrr kInvPhi{-1, 1, 5, 2};
const QuadIrr kSqrt2m1{-1, 1, 2, 1};
const QuadIrr kInvOnePlusSqrt3{-1, 1, 3, 2};

QuadNum q(const BigRat& x) { return QuadNum(x); }

// Criterion 1
Outcome cf_identities() {
  Outcome o;
  const std::vector<QuadIrr> xs{kPhi, kInvPhi, {0, 1, 2, 1}, {0, 1, 3, 1}, {1, 1, 13, 2}};
  std::size_t checked = 0;
  for (const auto& x : xs) {
    const CFExpansion cf = cf_expand(x, 52);
    const auto conv = convergents(cf, 51);
    const QuadNum alpha = x.value();
    for (std::size_t n = 1; n <= 50; ++n) {
      const BigInt& qn = conv[n].q;
      const QuadNum diff = alpha - q(make_rat(conv[n].p, qn));
      const QuadNum zeta = complete_quotient_exact(cf, n + 1);
      const QuadNum rhs = q(BigRat(n % 2 == 0 ? 1 : -1)) / (q(BigRat(qn * qn)) * (zeta + q(xi(conv, n))));
      o.expect(diff == rhs, "zeta identity fails at n=" + std::to_string(n));

      const RatInterval err = diff.abs().enclose_relative(128);
      const BigRat qq = BigRat(qn * conv[n + 1].q);
      o.expect(err.hi() <= 1 / qq && err.lo() >= 1 / (2 * qq),
               "convergent bounds not certified at n=" + std::to_string(n));
      ++checked;
    }
  }
  o.detail = o.ok ? std::to_string(checked) + " (alpha, n) pairs" : o.detail;
  return o;
}

// Criterion 2
Outcome fibonacci_facts() {
  Outcome o;
  std::vector<BigInt> F{0, 1};
  while (F.size() < 205) F.push_back(F[F.size() - 1] + F[F.size() - 2]);
  const CFExpansion cf = cf_expand(kPhi, 202);
  const auto conv = convergents(cf, 200);
  const QuadNum phi = kPhi.value();
  const QuadNum psi = q(1) - phi;
  const QuadNum root5 = QuadNum::sqrt_of(5);
  QuadNum phi_n = 1, psi_n = 1;
  for (std::size_t n = 0; n <= 200; ++n) {
    o.expect(conv[n].p == F[n + 2] && conv[n].q == F[n + 1], "convergent mismatch at n=" + std::to_string(n));
    const BigInt c = F[n + 1] * F[n + 1] - F[n + 1] * F[n] - F[n] * F[n];
    o.expect(c == (n % 2 == 0 ? 1 : -1), "Cassini form fails at n=" + std::to_string(n));
    o.expect((phi_n - psi_n) / root5 == q(BigRat(F[n])), "Binet fails at n=" + std::to_string(n));
    phi_n *= phi;
    psi_n *= psi;
  }
  if (o.ok) o.detail = "n = 0..200";
  return o;
}

// Criterion 3
Outcome ostrowski_uniqueness() {
  Outcome o;
  const BigInt limit = 10000;
  for (const QuadIrr& x : {kInvPhi, kSqrt2m1, kInvOnePlusSqrt3}) {
    OstrowskiBasis basis(x);
    std::size_t top = 0;
    while (basis.q(top) <= limit) ++top;
    std::map<BigInt, std::vector<BigInt>> found;
    std::size_t duplicates = 0;
    std::vector<BigInt> cur(top, BigInt(0));
    std::function<void(std::size_t, const BigInt&, bool)> dfs = [&](std::size_t n, const BigInt& value,
                                                                    bool forced_zero) {
      if (n == 0) {
        std::vector<BigInt> str(cur);
        while (str.size() > 1 && str.back() == 0) str.pop_back();
        if (!found.emplace(value, str).second) ++duplicates;
        return;
      }
      const std::size_t idx = n - 1;
      BigInt cap = forced_zero ? BigInt(0) : basis.a(n);
      if (idx == 0 && !forced_zero) cap = basis.a(1) - 1;
      for (BigInt d = 0; d <= cap; ++d) {
        const BigInt v = value + d * basis.q(idx);
        if (v > limit) break;
        cur[idx] = d;
        dfs(n - 1, v, idx >= 1 && d == basis.a(n));
      }
      cur[idx] = 0;
    };
    dfs(top, 0, false);
    o.expect(duplicates == 0, "two admissible strings share a value");
    o.expect(found.size() == 10001, "enumeration does not cover 0..10^4");
    for (const auto& [s, str] : found) {
      if (s == 0) continue;
      o.expect(ostrowski_int(s, basis).c == str, "greedy digits differ at s=" + to_string(s));
    }
  }
  if (o.ok) o.detail = "3 x 10^4 values";
  return o;
}

// Criterion 4
Outcome dist_equivalence() {
  Outcome o;
  const BigRat width = pow10(-30);
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<long> num(-999, 999), den(2, 997), pick(1, 1000000);
  std::size_t total = 0;
  for (const QuadIrr& x : {kInvPhi, kSqrt2m1, kInvOnePlusSqrt3}) {
    const RealTarget alpha = x;
    OstrowskiBasis basis(alpha);
    int cases = 0;
    while (cases < 500) {
      // gamma in [-alpha, 1 - alpha): rational, or u + v*alpha
      const BigRat u = make_rat(num(rng), den(rng));
      const BigRat v = cases % 2 == 0 ? BigRat(0) : make_rat(num(rng) % 7, den(rng) % 5 + 1);
      const Gamma g{Affine{u, v}, std::nullopt};
      if (u.get_den() == 1) continue;
      if (sign(g.form + Affine::alpha(), alpha) < 0 || sign(g.form + Affine{-1, 1}, alpha) >= 0) continue;
      const RealDigits b = ostrowski_real(g, basis, 6);
      for (int tries = 0; tries < 400; ++tries) {
        const BigInt s = pick(rng);
        const IntDigits c = ostrowski_int(s, basis);
        bool head = true;
        for (std::size_t n = 0; n < 4; ++n) head = head && (n < c.c.size() ? c.c[n] : BigInt(0)) == b.b[n];
        if (!head) continue;
        const DeltaProfile p = delta_profile(s, g, basis, c.M + 160);
        const RatInterval formula = as_interval(dist_formula(p, basis));
        const RatInterval direct = dist_direct(s, g, alpha);
        o.expect(formula.width() <= width && direct.width() <= width, "enclosure wider than 1e-30");
        o.expect(formula.overlaps(direct), "formula and direct disagree at s=" + to_string(s));
        o.expect(direct.hi() <= dist_bound(p, basis), "estimate violated at s=" + to_string(s));
        ++cases;
        break;
      }
    }
    total += cases;
  }
  if (o.ok) o.detail = std::to_string(total) + " cases with m >= 4";
  return o;
}

// Criterion 5
Outcome psi_power() {
  Outcome o;
  const PsiConstruction c = construct_psi(kInvPhi, PsiSpec::power(2), 2);
  o.expect(c.s == std::vector<BigInt>{5, 238}, "s != (5, 238)");
  o.expect(c.certified(), "certificate failed");
  if (o.ok) o.detail = "s = (5, 238), certified";
  return o;
}

// Criterion 6
Outcome psi_exponential() {
  Outcome o;
  const PsiConstruction c = construct_psi(kInvPhi, PsiSpec::exp_decay(1), 3, 100000);
  o.expect(!c.blow_up && c.s.size() == 3, "K=3 did not complete: " + c.blow_up_reason);
  o.expect(c.certified(), "certificate failed");
  o.expect(growth_profile(c.s).growth == Growth::SuperExponential, "growth not super-exponential");
  const PsiConstruction c4 = construct_psi(kInvPhi, PsiSpec::exp_decay(1), 4, 100000);
  o.expect(c4.blow_up, "K=4 did not report BlowUp");
  if (o.ok) {
    o.detail = "s_3 has " + std::to_string(to_string(c.s.back()).size()) + " digits; K=4 BlowUp (" +
               c4.blow_up_reason + ")";
  }
  return o;
}

// Criterion 7
Outcome rational_round_trip() {
  Outcome o;
  std::size_t lines = 0;
  for (long a = -20; a <= 20; ++a) {
    for (long b = 1; b <= 20; ++b) {
      if (std::gcd(a, b) != 1) continue;
      for (long d = -20; d <= 20; ++d) {
        const ApproxSet set = line_set(a, b, d, 8);
        const auto line = detect_line(set.pairs);
        o.expect(line && *line == Line{a, b, d}, "detect_line failed for " + std::to_string(a) + "," +
                                                     std::to_string(b) + "," + std::to_string(d));
        const FitResult fit = fit_coefficients(set.pairs, make_rat(a, b), 1);
        const auto* g1 = std::get_if<BigRat>(&fit.gamma[0]);
        o.expect(g1 && *g1 == make_rat(d, b), "gamma_1 != d/b");
        for (const auto& row : fit.report.rows) {
          o.expect(row.residual.is_point() && sgn(row.residual.lo()) == 0, "nonzero residual");
        }
        ++lines;
      }
    }
  }
  if (o.ok) o.detail = std::to_string(lines) + " lines";
  return o;
}

// Criterion 8
Outcome quadratic_orbit() {
  Outcome o;
  const ConicForm form{1, -1, -1, 1};
  const RealTarget phi = kPhi;
  const auto pairs = conic_orbit(form, {2, 1}, 30).set.pairs;

  // sqrt(5 + 4/s^2)/2 = (sqrt5/2) sum_k C(1/2,k) (4/(5 s^2))^k
  const QuadNum half_root5 = QuadNum::sqrt_of(5) / q(2);
  std::vector<QuadNum> oracle{0, half_root5 * q(BigRat(1, 2)) * q(BigRat(4, 5)), 0,
                              half_root5 * q(BigRat(-1, 8)) * q(BigRat(16, 25))};
  const LaurentExpansion l = laurent_expansion(form, 4);
  o.expect(l.gamma == oracle, "Laurent coefficients differ from the binomial oracle");

  const FitResult fit = fit_coefficients(pairs, phi, 4);
  for (std::size_t j = 0; j < 4; ++j) {
    const QuadNum fitted = *exact_value(fit.gamma_affine[j], phi);
    o.expect((fitted - oracle[j]).abs() < q(pow10(-12)), "fit gamma_" + std::to_string(j + 1) + " off by > 1e-12");
  }

  // (2a*alpha + b) * gamma_2 = d snaps to an integer, and the Laurent series at that level is exact.
  const QuadNum fitted2 = *exact_value(fit.gamma_affine[1], phi);
  const BigInt d = ((q(2) * kPhi.value() - q(1)) * fitted2 + q(BigRat(1, 2))).floor();
  o.expect(d == 1, "integrality snap gives d=" + to_string(d));
  o.expect(laurent_expansion({1, -1, -1, d}, 4).gamma == oracle, "snapped reconstruction not exact");

  for (std::size_t N : {2, 3, 4}) {
    const auto coeffs = laurent_expansion(form, N).coefficients();
    const ApproxSet set{phi, pairs, N, coeffs};
    o.expect(verify_order(set).pass, "verify_order fails for N=" + std::to_string(N));
  }
  if (o.ok) o.detail = "gamma = (0, 1/sqrt5, 0, -1/(5 sqrt5)); N=2,3,4 pass";
  return o;
}

// Criterion 9
Outcome periodic() {
  Outcome o;
  for (const QuadIrr& x : {kInvPhi, kSqrt2m1}) {
    const PeriodicConstruction c = periodic_construction(x, 20);
    const auto [pa, pb, pc] = minimal_polynomial(x);
    (void)pc;
    const QuadNum alpha = x.value();
    const QuadNum g2 = c.gamma2.value();
    o.expect((q(BigRat(2 * pa)) * alpha + q(BigRat(pb))) * g2 == q(BigRat(c.integrality)),
             "(2a alpha + b) gamma_2 is not the reported integer");
    std::optional<QuadNum> prev;
    bool below = false;
    std::vector<BigInt> s;
    for (const auto& p : c.set.pairs) {
      const QuadNum s2 = q(BigRat(p.s * p.s));
      const QuadNum e = (alpha - q(make_rat(p.r, p.s)) + g2 / s2).abs() * s2;
      o.expect(!prev || e < *prev, "residual not decreasing at s=" + to_string(p.s));
      below = below || e < q(pow10(-6));
      prev = e;
      s.push_back(p.s);
    }
    o.expect(below, "residual never below 1e-6");
    o.expect(growth_profile(s).growth == Growth::Exponential, "growth not exponential");
  }
  if (o.ok) o.detail = "1/phi and sqrt2-1, 20 terms";
  return o;
}

// Criterion 10
Outcome determinism(const std::filesystem::path& golden) {
  Outcome o;
  std::ifstream in(golden / "cases.json");
  const Json cases = Json::parse(in);
  const auto saved_cwd = std::filesystem::current_path();
  const char* saved_env = std::getenv(kConfigEnv);
  const std::optional<std::string> env_backup = saved_env ? std::optional<std::string>(saved_env) : std::nullopt;
  std::filesystem::current_path(golden);
  std::size_t n = 0;
  for (const auto& c : cases) {
    unsetenv(kConfigEnv);
    if (c.contains("env")) {
      for (const auto& [k, v] : c["env"].items()) setenv(k.c_str(), v.get<std::string>().c_str(), 1);
    }
    const auto args = c["args"].get<std::vector<std::string>>();
    std::string outs[2];
    int codes[2];
    for (int i = 0; i < 2; ++i) {
      std::ostringstream out, err;
      codes[i] = run_cli(args, out, err);
      outs[i] = out.str();
    }
    std::ifstream want_file(golden / "expected" / (c["name"].get<std::string>() + ".out"), std::ios::binary);
    const std::string want{std::istreambuf_iterator<char>(want_file), {}};
    const std::string name = c["name"];
    o.expect(codes[0] == codes[1] && outs[0] == outs[1], name + ": runs differ");
    o.expect(outs[0] == want, name + ": differs from golden output");
    ++n;
  }
  std::filesystem::current_path(saved_cwd);
  if (env_backup) setenv(kConfigEnv, env_backup->c_str(), 1);
  else unsetenv(kConfigEnv);
  if (o.ok) o.detail = std::to_string(n) + " golden cases";
  return o;
}

bool report(int id, const char* name, double limit_s, const std::function<Outcome()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) {
    o.ok = false;
    char buf[64];
    std::snprintf(buf, sizeof buf, " [over %.0fs limit]", limit_s);
    o.detail += buf;
  }
  std::printf("criterion %2d %-28s %s  %7.2fs  %s\n", id, name, o.ok ? "PASS" : "FAIL", secs, o.detail.c_str());
  std::fflush(stdout);
  return o.ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path golden = argc > 1 ? argv[1] : ORDAPPROX_GOLDEN_DIR;
  int failed = 0;
  failed += !report(1, "CF identities", 5, cf_identities);
  failed += !report(2, "Fibonacci facts", 2, fibonacci_facts);
  failed += !report(3, "Ostrowski uniqueness", 60, ostrowski_uniqueness);
  failed += !report(4, "distance oracle equivalence", 60, dist_equivalence);
  failed += !report(5, "Psi power law", 1, psi_power);
  failed += !report(6, "Psi exponential", 120, psi_exponential);
  failed += !report(7, "rational round trip", 30, rational_round_trip);
  failed += !report(8, "quadratic orbit", 5, quadratic_orbit);
  failed += !report(9, "periodic construction", 10, periodic);
  failed += !report(10, "determinism", 0, [&] { return determinism(golden); });
  return failed == 0 ? 0 : 1;
}
