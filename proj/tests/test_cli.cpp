#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "geodint/cli.hpp"
#include "geodint/error.hpp"
#include "geodint/registry.hpp"

using geodint::RefPolicy;
using geodint::Rule;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "geodint");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = geodint::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) v.push_back(line);
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("parse_vector") {
  CHECK(geodint::cli::parse_vector("2,0") == geodint::Vector{2, 0});
  CHECK(geodint::cli::parse_vector("-1.5e-3") == geodint::Vector{-1.5e-3});
  for (const char* bad : {"", "1,", "1, 2", "a", "1,,2", "nan"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(geodint::cli::parse_vector(bad), geodint::Error);
  }
}

TEST_CASE("scheme aliases") {
  const auto pend = geodint::make_problem("pendulum").system;
  const auto hh = geodint::make_problem("henon-heiles").system;
  const auto gr = geodint::cli::resolve_scheme("gr", pend, {}, false, {});
  CHECK(gr.rule == Rule::GR1D_Symmetric);
  CHECK_FALSE(gr.locally_exact);
  const auto slex = geodint::cli::resolve_scheme("gr-slex", hh, {}, false, {});
  CHECK(slex.rule == Rule::GRmulti_Symmetric);
  CHECK(slex.policy.tag == RefPolicy::Tag::Midpoint);
  CHECK(slex.locally_exact);
  const auto mod = geodint::cli::resolve_scheme("mod-gr", pend, {}, false, {});
  CHECK(mod.policy.tag == RefPolicy::Tag::Fixed);
  CHECK(mod.policy.point == geodint::Vector{0, 0});
  const auto lex = geodint::cli::resolve_scheme("gr-lex", pend, {}, false, {});
  CHECK(lex.policy.tag == RefPolicy::Tag::Current);
  const auto mid = geodint::cli::resolve_scheme("midpoint", pend, std::string("next"), false, {});
  CHECK(mid.locally_exact);
  CHECK(mid.policy.tag == RefPolicy::Tag::Next);
  CHECK_FALSE(geodint::cli::resolve_scheme("midpoint", pend, {}, false, {}).locally_exact);
  CHECK(geodint::cli::resolve_scheme("exp-euler", pend, {}, false, {}).locally_exact);
  try {
    (void)geodint::cli::resolve_scheme("rk4", pend, {}, false, {});
    FAIL("expected a throw");
  } catch (const geodint::Error& e) {
    CHECK(std::string(e.what()) == "unknown scheme: rk4");
  }
}

TEST_CASE("integrate writes the CSV contract") {
  const auto r = run({"integrate", "--problem", "pendulum", "--scheme", "gr1d-sym", "--policy", "midpoint", "--h", "0.1",
                      "--steps", "100", "--y0", "2,0", "--format", "csv"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 102);
  CHECK(ls[0] == "n,t,x1,p1,H,iters,residual");
  CHECK(ls[1].rfind("0,0,2,0,", 0) == 0);
  CHECK(ls[101].rfind("100,", 0) == 0);

  const auto hh = run({"integrate", "--problem", "henon-heiles", "--scheme", "gr-slex", "--h", "0.1", "--steps", "3"});
  CHECK(lines(hh.out)[0] == "n,t,x1,x2,p1,p2,H,iters,residual");
}

TEST_CASE("integrate JSON output") {
  const auto r = run({"integrate", "--problem", "quartic", "--scheme", "gr-lex", "--h", "0.2", "--steps", "5",
                      "--format", "json"});
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["records"].size() == 6);
  CHECK(doc["problem"] == "quartic");
  CHECK(doc["records"][5]["n"] == 5);
}

TEST_CASE("unknown scheme exits 1") {
  const auto r = run({"integrate", "--problem", "pendulum", "--scheme", "rk4", "--h", "0.1", "--steps", "3"});
  CHECK(r.code == 1);
  CHECK(r.err.find("unknown scheme: rk4") != std::string::npos);
}

TEST_CASE("configuration errors exit 1") {
  CHECK(run({"integrate", "--problem", "nowhere", "--scheme", "gr", "--h", "0.1", "--steps", "3"}).code == 1);
  CHECK(run({"integrate", "--problem", "pendulum", "--scheme", "gr", "--h", "0.1", "--steps", "3", "--y0", "1,2,3"})
            .code == 1);
  CHECK(run({"integrate", "--problem", "nonseparable", "--scheme", "grmulti-sep", "--locally-exact", "--h", "0.1",
             "--steps", "3"})
            .code == 1);
  CHECK(run({"integrate", "--bogus"}).code == 1);
  CHECK(run({}).code == 1);
}

TEST_CASE("numerical failure exits 2 with a trailer") {
  const auto r = run({"integrate", "--problem", "pendulum", "--scheme", "gr-lex", "--h", "3.1", "--steps", "3",
                      "--y0", "0.1,0"});
  CHECK(r.code == 2);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[2].rfind("# failure,n=1,kind=ArgumentTooLarge", 0) == 0);
}

TEST_CASE("order reports the slopes") {
  const std::vector<std::string> base{"order", "--problem", "pendulum", "--y0", "2,0", "--T", "2",
                                      "--h-list", "0.2,0.1,0.05,0.025"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return run(a);
  };
  const auto slex = with({"--scheme", "gr-slex"});
  REQUIRE(slex.code == 0);
  const json s = json::parse(slex.out);
  CHECK(s["slope"].get<double>() >= 3.7);
  CHECK(s["slope"].get<double>() <= 4.3);
  CHECK(s["errors"].size() == 4);
  CHECK(s["errors"][0].size() == 2);
  CHECK(s.contains("fit_residual"));

  const json g = json::parse(with({"--scheme", "gr"}).out);
  CHECK(g["slope"].get<double>() >= 1.8);
  CHECK(g["slope"].get<double>() <= 2.2);

  const auto single = run({"order", "--problem", "pendulum", "--scheme", "gr", "--T", "2", "--h-list", "0.1"});
  CHECK(single.code == 1);
  CHECK(single.err.find("need ≥ 4 step sizes") != std::string::npos);
}

TEST_CASE("drift") {
  const auto hh = run({"drift", "--problem", "henon-heiles", "--scheme", "grmulti-incre", "--locally-exact", "--h",
                       "0.05", "--steps", "100000", "--y0", "0.1,0,0,0.3"});
  REQUIRE(hh.code == 0);
  const json d = json::parse(hh.out);
  CHECK(d["drift"].get<double>() <= 1e-9);
  CHECK(d.contains("argmax_step"));

  const auto classical = run({"drift", "--problem", "pendulum", "--scheme", "midpoint", "--h", "0.05", "--steps",
                              "100000", "--y0", "2,0"});
  REQUIRE(classical.code == 0);
  MESSAGE("classical midpoint drift " << json::parse(classical.out)["drift"].get<double>());

  CHECK(run({"drift", "--problem", "pendulum", "--scheme", "gr", "--h", "0.1", "--steps", "0"}).code == 1);
}

TEST_CASE("verify suites") {
  for (const char* suite : {"linear", "theta-form", "fixed-points"}) {
    CAPTURE(suite);
    const auto r = run({"verify", suite, "--seed", "7"});
    CHECK(r.code == 0);
    CHECK(r.out.find("suite passed") != std::string::npos);
    CHECK(r.out.find("seed 7") != std::string::npos);
  }
  CHECK(run({"verify", "nonsense"}).code == 1);
}

TEST_CASE("identical runs give identical files") {
  const std::string a = "cli_repeat_a.csv", b = "cli_repeat_b.csv";
  for (const std::string& path : {a, b}) {
    const auto r = run({"integrate", "--problem", "kepler", "--scheme", "gr-slex", "--h", "0.01", "--steps", "200",
                        "--output", path});
    REQUIRE(r.code == 0);
  }
  const std::string ta = slurp(a);
  CHECK_FALSE(ta.empty());
  CHECK(ta == slurp(b));
  const auto v1 = run({"verify", "gradient-identity", "--seed", "3"});
  const auto v2 = run({"verify", "gradient-identity", "--seed", "3"});
  CHECK(v1.out == v2.out);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("listings") {
  const auto p = run({"list-problems"});
  CHECK(p.code == 0);
  CHECK(lines(p.out).size() == geodint::problem_names().size());
  const auto s = run({"list-schemes"});
  CHECK(s.out.find("gr-slex") != std::string::npos);
  CHECK(s.out.find("grmulti-sep") != std::string::npos);
}
