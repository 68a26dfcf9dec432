#include <doctest.h>

#include <sstream>

#include "ordapprox/cli.hpp"
#include "ordapprox/serialize.hpp"

using namespace ordapprox;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("config text round trip") {
  Config c;
  CHECK(parse_config(config_text(c)) == c);
  c.precision_digits = 80;
  c.decay_window = 3;
  c.decay_tolerance = make_rat(1, 1000000);
  c.digit_budget = 5000;
  c.seed_bound = 77;
  c.orbit_search_bound = 12345;
  CHECK(parse_config(config_text(c)) == c);
  CHECK(parse_config("# comment\n\n decay_window = 9 \n").decay_window == 9);
  CHECK_THROWS_AS(parse_config("nonsense=1"), UsageError);
  CHECK_THROWS_AS(parse_config("decay_window=0"), UsageError);
  CHECK_THROWS_AS(parse_config("decay_window"), UsageError);
}

TEST_CASE("target grammar") {
  CHECK(std::get<BigRat>(parse_target("rat:6/4")) == make_rat(3, 2));
  CHECK(std::get<QuadIrr>(parse_target("quad:2,1,20,4")) == QuadIrr{1, 1, 5, 2});
  const auto c = std::get<Certified>(parse_target("dec:0.5772156649+-1e-10"));
  CHECK(c.enclosure.contains(parse_rat("0.57721566490153286")));
  const auto u = std::get<Certified>(parse_target("dec:0.5772156649\xC2\xB1" "1e-10"));
  CHECK(u.enclosure == c.enclosure);
  CHECK(std::get<Certified>(parse_target("dec:1.25")).enclosure.width() == make_rat(1, 100));
  CHECK_THROWS_AS(parse_target("phi"), DomainError);
  CHECK_THROWS_AS(parse_target("quad:1,2"), DomainError);
  CHECK_THROWS_AS(parse_target("rat:x"), DomainError);
}

TEST_CASE("ApproxSet JSON round trip") {
  ApproxSet s;
  s.alpha = QuadIrr{1, 1, 5, 2};
  s.N = 3;
  s.gamma = {BigRat(0), QuadIrr{0, 1, 5, 5}, RatInterval(make_rat(-1, 3), make_rat(1, 7))};
  s.pairs = {{2, 1}, {5, 3}, {BigInt("123456789012345678901234567890"), BigInt("76300948586022311055918768101")}};
  const Json j = to_json(s);
  CHECK(j["pairs"][2][0] == "123456789012345678901234567890");
  const ApproxSet back = approx_set_from_json(Json::parse(j.dump()));
  CHECK(std::get<QuadIrr>(back.alpha) == std::get<QuadIrr>(s.alpha));
  CHECK(back.N == 3);
  CHECK(back.pairs == s.pairs);
  CHECK(std::get<BigRat>(back.gamma[0]) == 0);
  CHECK(std::get<QuadIrr>(back.gamma[1]) == QuadIrr{0, 1, 5, 5});
  CHECK(std::get<RatInterval>(back.gamma[2]) == RatInterval(make_rat(-1, 3), make_rat(1, 7)));

  ApproxSet c;
  c.alpha = make_certified("3.14159");
  const ApproxSet cb = approx_set_from_json(to_json(c));
  CHECK(std::get<Certified>(cb.alpha).enclosure == std::get<Certified>(c.alpha).enclosure);
}

TEST_CASE("exit codes and output channels") {
  const Run ok = run({"line", "--a", "3", "--b", "7", "--d", "1", "--count", "3"});
  CHECK(ok.code == 0);
  CHECK(ok.err.empty());
  const Json j = Json::parse(ok.out);
  CHECK(j["pairs"] == Json::parse(R"([["1","2"],["4","9"],["7","16"]])"));

  const Run dom = run({"line", "--a", "2", "--b", "4", "--d", "1"});
  CHECK(dom.code == 1);
  CHECK(Json::parse(dom.out)["error"] == "PreconditionFailed");

  const Run use = run({"line", "--a", "3"});
  CHECK(use.code == 2);
  CHECK(use.out.empty());
  CHECK_FALSE(use.err.empty());

  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("cf example") {
  const Run r = run({"cf", "--alpha", "quad:1,1,5,2", "--depth", "10"});
  const Json j = Json::parse(r.out);
  CHECK(j["a"].size() == 10);
  for (const auto& d : j["a"]) CHECK(d == "1");
  CHECK(j["K"] == 0);
  CHECK(j["L"] == 1);
}

TEST_CASE("conic-orbit example") {
  const Run r = run({"conic-orbit", "--form", "1,-1,-1", "--d", "1", "--count", "4"});
  CHECK(Json::parse(r.out)["pairs"] == Json::parse(R"([["2","1"],["5","3"],["13","8"],["34","21"]])"));
  CHECK(Json::parse(r.out)["form"]["d"] == "1");
}

TEST_CASE("BlowUp carries the partial construction") {
  const Run r = run({"build-psi", "--alpha", "quad:-1,1,5,2", "--psi", "exp:1", "--K", "3", "--digit-budget", "1000"});
  CHECK(r.code == 1);
  const Json j = Json::parse(r.out);
  CHECK(j["error"] == "BlowUp");
  CHECK(j["partial"]["n"] == Json::parse("[4, 20]"));
  CHECK(j["partial"]["blow_up"] == true);
}
