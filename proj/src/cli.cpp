#include "ordapprox/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "ordapprox/serialize.hpp"

namespace ordapprox {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

BigInt int_arg(const std::string& what, const std::string& text) {
  try {
    return parse_int(trim(text));
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not an integer");
  }
}

BigRat rat_arg(const std::string& what, const std::string& text) {
  try {
    return parse_rat(trim(text));
  } catch (const std::exception&) {
    throw UsageError(what + ": '" + text + "' is not a rational number");
  }
}

std::size_t count_arg(const std::string& what, const std::string& text) {
  const BigInt v = int_arg(what, text);
  if (sgn(v) <= 0 || !v.fits_ulong_p()) throw UsageError(what + " must be a positive count");
  return v.get_ui();
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

Config parse_config(const std::string& text, Config c) {
  std::stringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "precision_digits") {
      c.precision_digits = static_cast<unsigned>(count_arg(key, value));
    } else if (key == "decay_window") {
      c.decay_window = count_arg(key, value);
    } else if (key == "decay_tolerance") {
      const BigRat t = rat_arg(key, value);
      if (sgn(t) <= 0) throw UsageError("decay_tolerance must be positive");
      c.decay_tolerance = t;
    } else if (key == "digit_budget") {
      c.digit_budget = count_arg(key, value);
    } else if (key == "seed_bound") {
      c.seed_bound = count_arg(key, value);
    } else if (key == "orbit_search_bound") {
      c.orbit_search_bound = int_arg(key, value);
      if (sgn(c.orbit_search_bound) <= 0) throw UsageError("orbit_search_bound must be positive");
    } else {
      throw UsageError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  return c;
}

std::string config_text(const Config& c) {
  std::ostringstream out;
  out << "precision_digits=" << c.precision_digits << '\n'
      << "decay_window=" << c.decay_window << '\n';
  if (c.decay_tolerance) out << "decay_tolerance=" << to_string(*c.decay_tolerance) << '\n';
  out << "digit_budget=" << c.digit_budget << '\n'
      << "seed_bound=" << to_string(c.seed_bound) << '\n'
      << "orbit_search_bound=" << to_string(c.orbit_search_bound) << '\n';
  return out.str();
}

namespace {

struct Args {
  std::string alpha;
  std::string gamma;
  std::string pairs;
  std::string input;
  std::string psi;
  std::string form;
  std::string seed;
  std::string s_list;
  std::string s;
  std::string a, b, d;
  std::size_t depth = 20;
  std::size_t count = 10;
  std::size_t N = 1;
  std::size_t K = 2;
  std::size_t J = 4;
  std::size_t max_exceptions = 2;
  int root = 1;
  bool csv = false;
  bool allow_orbit = false;
};

// A BlowUp carrying a partial result.
struct PartialResult {
  DomainError error;
  Json partial;
};

template <class F>
auto usage_guard(F f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

struct Context {
  Args args;
  Config config;

  RealTarget alpha() const {
    if (args.alpha.empty()) throw UsageError("--alpha is required");
    return usage_guard([&] { return parse_target(args.alpha); });
  }

  DecayOptions decay() const {
    DecayOptions o;
    o.window = config.decay_window;
    o.tolerance = config.decay_tolerance;
    return o;
  }

  OrbitOptions orbit() const { return {args.allow_orbit, config.orbit_search_bound}; }

  Gamma gamma(const RealTarget& alpha) const {
    if (args.gamma.empty()) throw UsageError("--gamma is required");
    if (args.gamma.rfind("aff:", 0) == 0) {
      const auto parts = split(args.gamma.substr(4), ',');
      if (parts.size() != 2) throw UsageError("--gamma aff:u,v needs two rationals");
      return Gamma{Affine{rat_arg("--gamma", parts[0]), rat_arg("--gamma", parts[1])}, std::nullopt};
    }
    const RealTarget g = usage_guard([&] { return parse_target(args.gamma); });
    return to_gamma(g, alpha, config.precision_digits);
  }

  std::optional<ApproxSet> input_set() const {
    if (args.input.empty()) return std::nullopt;
    const std::string text = read_file(args.input);
    return usage_guard([&] { return approx_set_from_json(Json::parse(text)); });
  }

  std::vector<Pair> pairs() const {
    if (!args.pairs.empty()) {
      std::vector<Pair> out;
      for (const auto& item : split(args.pairs, ';')) {
        const auto rs = split(item, ',');
        if (rs.size() != 2) throw UsageError("--pairs expects r,s;r,s;...");
        out.push_back({int_arg("--pairs", rs[0]), int_arg("--pairs", rs[1])});
      }
      return out;
    }
    if (auto set = input_set()) return set->pairs;
    throw UsageError("give pairs with --pairs r,s;... or --input file.json");
  }

  ConicForm form() const {
    const auto parts = split(args.form, ',');
    if (parts.size() != 3) throw UsageError("--form expects a,b,c");
    if (args.d.empty()) throw UsageError("--d is required");
    return {int_arg("--form", parts[0]), int_arg("--form", parts[1]), int_arg("--form", parts[2]),
            int_arg("--d", args.d)};
  }
};

Json gamma_json(const Gamma& g) {
  return Json{{"form", to_json(g.form)}, {"offset", g.offset ? to_json(*g.offset) : Json(nullptr)}};
}

Json strings(const std::vector<BigInt>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

// ---------------------------------------------------------------------------

Json cmd_cf(const Context& ctx) {
  const RealTarget alpha = ctx.alpha();
  const CFExpansion cf = cf_expand(alpha, ctx.args.depth);
  std::vector<BigInt> digits;
  if (cf.finite()) {
    digits = cf.a;
  } else {
    for (std::size_t n = 0; n < ctx.args.depth && cf.has_digit(n); ++n) digits.push_back(cf.digit(n));
  }
  Json out{{"alpha", to_json(alpha)}, {"a", strings(digits)}};
  out["K"] = cf.period ? Json(cf.period->K) : Json(nullptr);
  out["L"] = cf.period ? Json(cf.period->L) : Json(nullptr);
  return out;
}

Json cmd_convergents(const Context& ctx) {
  const RealTarget alpha = ctx.alpha();
  const CFExpansion cf = cf_expand(alpha, ctx.args.depth + 1);
  std::size_t n_max = ctx.args.depth;
  if (cf.finite()) n_max = std::min(n_max, cf.a.size() - 1);
  std::vector<BigInt> p, q;
  for (const auto& c : convergents(cf, n_max)) {
    p.push_back(c.p);
    q.push_back(c.q);
  }
  return Json{{"alpha", to_json(alpha)}, {"p", strings(p)}, {"q", strings(q)}};
}

Json cmd_ostrowski_int(const Context& ctx) {
  const RealTarget alpha = ctx.alpha();
  const BigInt s = int_arg("--s", ctx.args.s);
  OstrowskiBasis basis(alpha);
  const IntDigits d = ostrowski_int(s, basis);
  return Json{{"alpha", to_json(alpha)}, {"s", to_string(s)}, {"c", strings(d.c)}, {"M", d.M}};
}

Json cmd_ostrowski_real(const Context& ctx) {
  const RealTarget alpha = ctx.alpha();
  const Gamma g = ctx.gamma(alpha);
  OstrowskiBasis basis(alpha);
  const RealDigits r = ostrowski_real(g, basis, ctx.args.depth, ctx.orbit());
  return Json{{"alpha", to_json(alpha)},
              {"gamma", gamma_json(g)},
              {"b", strings(r.b)},
              {"tail_bound", to_json(r.tail_bound)},
              {"remainder", gamma_json(r.remainder)}};
}

Json cmd_dist(const Context& ctx) {
  const RealTarget alpha = ctx.alpha();
  const Gamma g = ctx.gamma(alpha);
  const BigInt s = int_arg("--s", ctx.args.s);
  OstrowskiBasis basis(alpha);
  const DeltaProfile p = delta_profile(s, g, basis, ctx.args.depth, ctx.orbit());
  Json out{{"alpha", to_json(alpha)}, {"s", to_string(s)}, {"gamma", gamma_json(g)}, {"depth", p.depth},
           {"delta", strings(p.delta)}};
  out["m"] = p.m ? Json(*p.m) : Json(nullptr);
  if (p.m) {
    const DistValue f = dist_formula(p, basis);
    out["formula"] = to_json(as_interval(f));
    out["formula_exact"] = std::holds_alternative<QuadIrr>(f) ? to_json(std::get<QuadIrr>(f)) : Json(nullptr);
    out["alternating"] = to_json(dist_formula_alternating(p, basis));
    out["bound"] = to_string(dist_bound(p, basis));
  }
  out["direct"] = to_json(dist_direct(s, g, alpha));
  return out;
}

std::string csv_or_json(const Context& ctx, const DecayReport& rep, Json doc) {
  if (ctx.args.csv) return residual_csv(rep);
  return doc.dump(2) + "\n";
}

std::string cmd_approx_fit(const Context& ctx) {
  const auto set = ctx.input_set();
  const RealTarget alpha = !ctx.args.alpha.empty() ? ctx.alpha()
                           : set ? set->alpha
                                 : ctx.alpha();
  const FitResult fit = fit_coefficients(ctx.pairs(), alpha, ctx.args.N, ctx.decay());
  Json gamma = Json::array();
  for (const auto& g : fit.gamma) gamma.push_back(to_json(g));
  Json affine = Json::array();
  for (const auto& g : fit.gamma_affine) affine.push_back(to_json(g));
  return csv_or_json(ctx, fit.report,
                     Json{{"alpha", to_json(alpha)},
                          {"N", ctx.args.N},
                          {"gamma", gamma},
                          {"gamma_affine", affine},
                          {"report", to_json(fit.report)}});
}

std::string cmd_approx_verify(const Context& ctx) {
  auto set = ctx.input_set();
  if (!set) throw UsageError("approx-verify needs --input file.json");
  if (!ctx.args.alpha.empty()) set->alpha = ctx.alpha();
  const DecayReport rep = verify_order(*set, ctx.decay());
  return csv_or_json(ctx, rep, to_json(rep));
}

PsiSpec psi_arg(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("--psi expects exp:c, power:k or table:path");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  return usage_guard([&] {
    if (kind == "exp") return PsiSpec::exp_decay(rat_arg("--psi", body));
    if (kind == "power") return PsiSpec::power(count_arg("--psi", body));
    if (kind == "table") {
      std::vector<std::pair<BigInt, BigRat>> rows;
      std::stringstream in(read_file(body));
      std::string line;
      while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#' || line[0] == 's') continue;
        const auto parts = split(line, ',');
        if (parts.size() != 2) throw UsageError("Psi table rows are s,psi");
        rows.emplace_back(int_arg("table s", parts[0]), rat_arg("table psi", parts[1]));
      }
      return PsiSpec::from_table(std::move(rows));
    }
    throw UsageError("unknown Psi family '" + kind + "'");
  });
}

Json psi_json(const RealTarget& alpha, const PsiSpec& psi, std::size_t K, const PsiConstruction& c) {
  Json certs = Json::array();
  for (const auto& cert : c.certificate) {
    certs.push_back(Json{{"k", cert.k},
                         {"method", cert.method},
                         {"dist_upper", to_scientific(cert.dist_upper)},
                         {"psi_lower", cert.psi_lower ? Json(to_scientific(*cert.psi_lower)) : Json(nullptr)},
                         {"ok", cert.ok}});
  }
  Json out{{"alpha", to_json(alpha)},
           {"psi", psi.describe()},
           {"K", K},
           {"n", c.n},
           {"q", strings(c.q)},
           {"s", strings(c.s)},
           {"gamma_partial", to_json(c.gamma_partial)},
           {"tail", to_scientific(c.tail)},
           {"certificate", certs},
           {"certified", c.certified()},
           {"blow_up", c.blow_up}};
  out["growth"] = c.s.size() >= 3 ? Json(growth_name(growth_profile(c.s).growth)) : Json(nullptr);
  if (c.blow_up) out["blow_up_reason"] = c.blow_up_reason;
  return out;
}

Json cmd_build_psi(const Context& ctx) {
  const RealTarget alpha = ctx.alpha();
  if (ctx.args.psi.empty()) throw UsageError("--psi is required");
  const PsiSpec psi = psi_arg(ctx.args.psi);
  const PsiConstruction c = construct_psi(alpha, psi, ctx.args.K, ctx.config.digit_budget);
  Json out = psi_json(alpha, psi, ctx.args.K, c);
  if (c.blow_up) {
    throw PartialResult{DomainError(ErrorKind::BlowUp, c.blow_up_reason), std::move(out)};
  }
  out["approx_set"] = to_json(psi_approx_set(alpha, c, ctx.args.N));
  return out;
}

Json cmd_line(const Context& ctx) {
  const ApproxSet set = line_set(int_arg("--a", ctx.args.a), int_arg("--b", ctx.args.b),
                                 int_arg("--d", ctx.args.d), ctx.args.count);
  return to_json(set);
}

Json cmd_detect_line(const Context& ctx) {
  const auto line = detect_line(ctx.pairs(), ctx.args.max_exceptions);
  if (!line) return Json{{"line", nullptr}};
  return Json{{"line",
               {{"a", to_string(line->a)},
                {"b", to_string(line->b)},
                {"d", to_string(line->d)},
                {"exceptions", line->exceptions}}}};
}

Json cmd_conic_orbit(const Context& ctx) {
  const ConicForm f = ctx.form();
  Pair seed;
  if (!ctx.args.seed.empty()) {
    const auto rs = split(ctx.args.seed, ',');
    if (rs.size() != 2) throw UsageError("--seed expects r,s");
    seed = {int_arg("--seed", rs[0]), int_arg("--seed", rs[1])};
  } else {
    const auto found = find_seed(f, ctx.config.seed_bound);
    if (!found) {
      fail(ErrorKind::OutOfRegime, "no seed (r,s) with 1 <= r,s <= " + to_string(ctx.config.seed_bound) +
                                       " on the conic");
    }
    seed = *found;
  }
  const ConicOrbit o = conic_orbit(f, seed, ctx.args.count);
  Json out = to_json(o.set);
  out["form"] = to_json(f);
  out["automorph"] = Json::array({Json::array({to_string(o.step.t11), to_string(o.step.t12)}),
                                  Json::array({to_string(o.step.t21), to_string(o.step.t22)})});
  return out;
}

Json cmd_laurent(const Context& ctx) {
  const ConicForm f = ctx.form();
  if (ctx.args.root != 1 && ctx.args.root != -1) throw UsageError("--root must be 1 or -1");
  const LaurentExpansion l = laurent_expansion(f, ctx.args.J, ctx.args.root);
  Json gamma = Json::array();
  for (const auto& g : l.coefficients()) gamma.push_back(to_json(g));
  return Json{{"form", to_json(f)},
              {"alpha", to_json(conic_root(f, ctx.args.root))},
              {"gamma", gamma},
              {"remainder",
               {{"coeff", to_string(l.remainder_coeff)}, {"power", l.remainder_power}, {"s_min", to_string(l.s_min)}}}};
}

std::string cmd_build_periodic(const Context& ctx) {
  const RealTarget alpha = ctx.alpha();
  const PeriodicConstruction pc = periodic_construction(alpha, ctx.args.count, ctx.decay());
  Json out = to_json(pc.set);
  out["K"] = pc.K;
  out["L"] = pc.L;
  out["gamma2"] = to_json(pc.gamma2);
  out["integrality"] = to_string(pc.integrality);
  out["report"] = to_json(pc.report);
  return csv_or_json(ctx, pc.report, out);
}

Json cmd_detect_quad(const Context& ctx) {
  const auto f = quad_detect(ctx.pairs(), ctx.args.max_exceptions);
  return Json{{"form", f ? to_json(*f) : Json(nullptr)}};
}

Json cmd_growth(const Context& ctx) {
  std::vector<BigInt> s;
  if (!ctx.args.s_list.empty()) {
    for (const auto& item : split(ctx.args.s_list, ',')) s.push_back(int_arg("--s-list", item));
  } else {
    for (const auto& p : ctx.pairs()) s.push_back(p.s);
  }
  const GrowthProfile g = growth_profile(s);
  return Json{{"growth", growth_name(g.growth)}, {"log_ratios", g.log_ratios}, {"differences", strings(g.differences)}};
}

using Handler = std::function<std::string(const Context&)>;

template <class F>
Handler json_handler(F f) {
  return [f](const Context& ctx) { return f(ctx).dump(2) + "\n"; };
}

Json error_json(const DomainError& e) {
  return Json{{"error", std::string(e.name())}, {"message", e.message()}};
}

}  // namespace

int run_cli(const std::vector<std::string>& argv_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Order-N rational approximation toolkit", "ordapprox"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string precision_digits, decay_window, decay_tolerance, digit_budget, seed_bound, orbit_search_bound;
  app.add_option("--config", config_path, "key=value config file (default: $ORDAPPROX_CONFIG)");
  app.add_option("--precision-digits", precision_digits, "decimal digits for certified enclosures");
  app.add_option("--decay-window", decay_window, "trailing rows judged by approx-verify");
  app.add_option("--decay-tolerance", decay_tolerance, "absolute tolerance for the last scaled residual");
  app.add_option("--digit-budget", digit_budget, "largest denominator size, in digits, build-psi may reach");
  app.add_option("--seed-bound", seed_bound, "search box for conic-orbit seeds");
  app.add_option("--orbit-search-bound", orbit_search_bound, "search bound for the gamma-on-orbit test");

  Args args;
  std::map<CLI::App*, Handler> handlers;
  auto sub = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* s = app.add_subcommand(name, help);
    handlers[s] = std::move(h);
    return s;
  };
  auto alpha_opt = [&](CLI::App* s, bool required = true) {
    auto* o = s->add_option("--alpha", args.alpha, "rat:p/q | quad:P,e,D,Q | dec:digits[+-err]");
    if (required) o->required();
  };
  auto pairs_opts = [&](CLI::App* s) {
    s->add_option("--pairs", args.pairs, "r,s;r,s;...");
    s->add_option("--input", args.input, "ApproxSet JSON file ('-' for stdin)");
  };

  auto* cf = sub("cf", "continued fraction digits and period", json_handler(cmd_cf));
  alpha_opt(cf);
  cf->add_option("--depth", args.depth)->check(CLI::PositiveNumber);

  auto* conv = sub("convergents", "convergents p_n/q_n, n = 0..depth", json_handler(cmd_convergents));
  alpha_opt(conv);
  conv->add_option("--depth", args.depth)->check(CLI::PositiveNumber);

  auto* oi = sub("ostrowski-int", "Ostrowski digits of an integer", json_handler(cmd_ostrowski_int));
  alpha_opt(oi);
  oi->add_option("--s", args.s)->required();

  auto* orl = sub("ostrowski-real", "Ostrowski digits of a shift gamma", json_handler(cmd_ostrowski_real));
  alpha_opt(orl);
  orl->add_option("--gamma", args.gamma, "target or aff:u,v (u + v*alpha)")->required();
  orl->add_option("--depth", args.depth)->check(CLI::PositiveNumber);
  orl->add_flag("--allow-orbit", args.allow_orbit);

  auto* dist = sub("dist", "||s*alpha - gamma|| by formula, bound and direct evaluation", json_handler(cmd_dist));
  alpha_opt(dist);
  dist->add_option("--s", args.s)->required();
  dist->add_option("--gamma", args.gamma)->required();
  dist->add_option("--depth", args.depth)->check(CLI::PositiveNumber);
  dist->add_flag("--allow-orbit", args.allow_orbit);

  auto* fit = sub("approx-fit", "fit gamma_1..gamma_N to pairs", cmd_approx_fit);
  alpha_opt(fit, false);
  pairs_opts(fit);
  fit->add_option("--N", args.N)->required();
  fit->add_flag("--csv", args.csv);

  auto* ver = sub("approx-verify", "residual-decay verdict for an ApproxSet", cmd_approx_verify);
  alpha_opt(ver, false);
  ver->add_option("--input", args.input)->required();
  ver->add_flag("--csv", args.csv);

  auto* psi = sub("build-psi", "Psi-driven existence construction", json_handler(cmd_build_psi));
  alpha_opt(psi);
  psi->add_option("--psi", args.psi, "exp:c | power:k | table:path")->required();
  psi->add_option("--K", args.K, "number of indices n_k")->check(CLI::PositiveNumber)->capture_default_str();
  psi->add_option("--N", args.N, "order of the emitted ApproxSet")->check(CLI::PositiveNumber)->capture_default_str();

  auto* line = sub("line", "pairs on b*r = a*s + d", json_handler(cmd_line));
  line->add_option("--a", args.a)->required();
  line->add_option("--b", args.b)->required();
  line->add_option("--d", args.d)->required();
  line->add_option("--count", args.count)->check(CLI::PositiveNumber);

  auto* dl = sub("detect-line", "find b*r = a*s + d through the pairs", json_handler(cmd_detect_line));
  pairs_opts(dl);
  dl->add_option("--max-exceptions", args.max_exceptions);

  auto* orbit = sub("conic-orbit", "orbit on a*r^2 + b*rs + c*s^2 = d", json_handler(cmd_conic_orbit));
  orbit->add_option("--form", args.form, "a,b,c")->required();
  orbit->add_option("--d", args.d)->required();
  orbit->add_option("--seed", args.seed, "r,s");
  orbit->add_option("--count", args.count)->check(CLI::PositiveNumber);

  auto* lau = sub("laurent", "exact Laurent coefficients of r/s on a conic", json_handler(cmd_laurent));
  lau->add_option("--form", args.form, "a,b,c")->required();
  lau->add_option("--d", args.d)->required();
  lau->add_option("--J", args.J)->check(CLI::PositiveNumber);
  lau->add_option("--root", args.root, "1 or -1");

  auto* per = sub("build-periodic", "infinite-order pairs from a periodic continued fraction", cmd_build_periodic);
  alpha_opt(per);
  per->add_option("--count", args.count)->check(CLI::PositiveNumber);
  per->add_flag("--csv", args.csv);

  auto* dq = sub("detect-quad", "find a*r^2 + b*rs + c*s^2 = d through the pairs", json_handler(cmd_detect_quad));
  pairs_opts(dq);
  dq->add_option("--max-exceptions", args.max_exceptions);

  auto* gr = sub("growth", "growth class of a denominator sequence", json_handler(cmd_growth));
  gr->add_option("--s-list", args.s_list, "s_1,s_2,...");
  pairs_opts(gr);

  std::vector<std::string> rev(argv_in.rbegin(), argv_in.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  Context ctx;
  ctx.args = args;
  try {
    if (config_path.empty()) {
      if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
    }
    if (!config_path.empty()) ctx.config = parse_config(read_file(config_path));
    std::string overrides;
    auto add = [&](const char* key, const std::string& v) {
      if (!v.empty()) overrides += std::string(key) + "=" + v + "\n";
    };
    add("precision_digits", precision_digits);
    add("decay_window", decay_window);
    add("decay_tolerance", decay_tolerance);
    add("digit_budget", digit_budget);
    add("seed_bound", seed_bound);
    add("orbit_search_bound", orbit_search_bound);
    ctx.config = parse_config(overrides, ctx.config);

    CLI::App* chosen = app.get_subcommands().front();
    out << handlers.at(chosen)(ctx);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const PartialResult& p) {
    Json j = error_json(p.error);
    j["partial"] = p.partial;
    out << j.dump(2) << "\n";
    return 1;
  } catch (const DomainError& e) {
    out << error_json(e).dump(2) << "\n";
    return 1;
  }
}

}  // namespace ordapprox
