#include "ordapprox/serialize.hpp"

namespace ordapprox {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

void bad_input(const std::string& what) { fail(ErrorKind::PreconditionFailed, what); }

}  // namespace

RealTarget parse_target(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) bad_input("target '" + text + "' needs a rat:, quad: or dec: prefix");
  const std::string kind = text.substr(0, colon);
  const std::string body = text.substr(colon + 1);
  try {
    if (kind == "rat") return parse_rat(body);
    if (kind == "quad") {
      const auto parts = split(body, ',');
      if (parts.size() != 4) bad_input("quad: needs P,e,D,Q");
      return qi_normalize(parse_int(parts[0]), parse_int(parts[1]), parse_int(parts[2]), parse_int(parts[3]));
    }
    if (kind == "dec") {
      for (const std::string sep : {"\xC2\xB1", "+-"}) {
        if (const auto pos = body.find(sep); pos != std::string::npos) {
          return make_certified(body.substr(0, pos), parse_rat(body.substr(pos + sep.size())));
        }
      }
      return make_certified(body);
    }
  } catch (const std::invalid_argument&) {
    bad_input("malformed number in '" + text + "'");
  } catch (const std::out_of_range&) {
    bad_input("number out of range in '" + text + "'");
  }
  bad_input("unknown target kind '" + kind + "'");
  return BigRat(0);
}

Json to_json(const BigInt& x) { return to_string(x); }
Json to_json(const BigRat& x) { return to_string(x); }

Json to_json(const QuadIrr& x) {
  return Json{{"P", to_string(x.P)}, {"e", to_string(x.e)}, {"D", to_string(x.D)}, {"Q", to_string(x.Q)}};
}

Json to_json(const RatInterval& x) { return Json{{"lo", to_string(x.lo())}, {"hi", to_string(x.hi())}}; }

Json to_json(const RealTarget& x) {
  if (const auto* r = std::get_if<BigRat>(&x)) return to_json(*r);
  if (const auto* q = std::get_if<QuadIrr>(&x)) return to_json(*q);
  const auto& c = std::get<Certified>(x);
  return Json{{"digits", c.digits}, {"lo", to_string(c.enclosure.lo())}, {"hi", to_string(c.enclosure.hi())}};
}

Json to_json(const Coefficient& c) {
  return std::visit([](const auto& v) { return to_json(v); }, c);
}

Json to_json(const Affine& a) { return Json{{"c0", to_string(a.c0)}, {"c1", to_string(a.c1)}}; }

Json to_json(const ConicForm& f) {
  return Json{{"a", to_string(f.a)}, {"b", to_string(f.b)}, {"c", to_string(f.c)}, {"d", to_string(f.d)}};
}

Json to_json(const DecayReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back(Json{{"r", to_string(row.pair.r)},
                        {"s", to_string(row.pair.s)},
                        {"residual", to_json(row.residual)},
                        {"scaled", to_json(row.scaled)}});
  }
  return Json{{"N", r.N},
              {"window", r.window},
              {"tolerance", to_string(r.tolerance)},
              {"pass", r.pass},
              {"diagnostics", r.diagnostics},
              {"rows", rows}};
}

Json to_json(const ApproxSet& s) {
  Json gamma = Json::array();
  for (const auto& g : s.gamma) gamma.push_back(to_json(g));
  Json pairs = Json::array();
  for (const auto& p : s.pairs) pairs.push_back(Json::array({to_string(p.r), to_string(p.s)}));
  return Json{{"alpha", to_json(s.alpha)}, {"N", s.N}, {"gamma", gamma}, {"pairs", pairs}};
}

BigInt int_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long>());
  if (!j.is_string()) bad_input("expected an integer string");
  try {
    return parse_int(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    bad_input("malformed integer '" + j.get<std::string>() + "'");
  }
  return 0;
}

BigRat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return BigRat(j.get<long>());
  if (!j.is_string()) bad_input("expected a rational string");
  try {
    return parse_rat(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    bad_input("malformed rational '" + j.get<std::string>() + "'");
  }
  return 0;
}

RealTarget target_from_json(const Json& j) {
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    if (text.find(':') != std::string::npos) return parse_target(text);
    return rat_from_json(j);
  }
  if (!j.is_object()) bad_input("alpha must be a string or an object");
  if (j.contains("P")) {
    return qi_normalize(int_from_json(j.at("P")), int_from_json(j.at("e")), int_from_json(j.at("D")),
                        int_from_json(j.at("Q")));
  }
  if (j.contains("digits")) {
    Certified c = make_certified(j.at("digits").get<std::string>());
    if (j.contains("lo")) c.enclosure = RatInterval(rat_from_json(j.at("lo")), rat_from_json(j.at("hi")));
    return c;
  }
  bad_input("unrecognized alpha object");
  return BigRat(0);
}

Coefficient coefficient_from_json(const Json& j) {
  if (j.is_string() || j.is_number_integer()) return rat_from_json(j);
  if (j.is_object() && j.contains("P")) return std::get<QuadIrr>(target_from_json(j));
  if (j.is_object() && j.contains("lo")) return RatInterval(rat_from_json(j.at("lo")), rat_from_json(j.at("hi")));
  bad_input("unrecognized coefficient");
  return BigRat(0);
}

std::vector<Pair> pairs_from_json(const Json& j) {
  if (!j.is_array()) bad_input("pairs must be an array");
  std::vector<Pair> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) bad_input("each pair must be [r, s]");
    out.push_back({int_from_json(p[0]), int_from_json(p[1])});
  }
  return out;
}

ApproxSet approx_set_from_json(const Json& j) {
  if (!j.is_object()) bad_input("an ApproxSet is a JSON object");
  ApproxSet s;
  s.alpha = target_from_json(j.at("alpha"));
  s.pairs = pairs_from_json(j.at("pairs"));
  s.N = j.value("N", std::size_t{0});
  if (j.contains("gamma")) {
    for (const auto& g : j.at("gamma")) s.gamma.push_back(coefficient_from_json(g));
  }
  return s;
}

}  // namespace ordapprox
