#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fibra/cli.hpp"
#include "fibra/error.hpp"
#include "fibra/io.hpp"
#include "support/instances.hpp"

using namespace fibra;
using io::Json;

namespace {

const std::string kFixtures = FIBRA_FIXTURES;

std::string fixture(const std::string& name) { return kFixtures + "/" + name + ".json"; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Outcome {
  int status;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

Outcome on(const std::string& file, std::vector<std::string> args) {
  args.insert(args.begin(), {"-u", fixture(file)});
  return invoke(args);
}

/// Code and message of the error thrown while loading `text`.
std::pair<ErrorCode, std::string> load_error(const std::string& text) {
  try {
    io::load_text(text);
  } catch (const Error& e) {
    return {e.code(), e.what()};
  }
  FAIL("expected the document to be rejected");
  return {ErrorCode::InvariantViolation, ""};
}

bool starts_with(const std::string& s, const std::string& prefix) {
  return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("empty documents load") {
  const auto u = io::load_text("{}");
  CHECK(u.bundles.empty());
  CHECK(io::emit(u) == Json::object());
}

TEST_CASE("load errors carry the JSON pointer of the offending value") {
  SUBCASE("syntax") {
    CHECK(load_error("{\"sets\": {").first == ErrorCode::ParseError);
  }
  SUBCASE("shapes") {
    auto [code, msg] = load_error(R"({"sets": {"S": "ab"}})");
    CHECK(code == ErrorCode::ParseError);
    CHECK(starts_with(msg, "/sets/S:"));
    std::tie(code, msg) = load_error(R"({"bundles": {"A": {"base": [], "fibers": {}, "colour": 1}}})");
    CHECK(code == ErrorCode::ParseError);
    CHECK(starts_with(msg, "/bundles/A/colour:"));
    std::tie(code, msg) = load_error(R"({"shapes": {}})");
    CHECK(starts_with(msg, "/shapes:"));
  }
  SUBCASE("dangling references") {
    const auto [code, msg] = load_error(slurp(fixture("dangling")));
    CHECK(code == ErrorCode::InvariantViolation);
    CHECK(starts_with(msg, "/reduced/R/target:"));
  }
  SUBCASE("invariants") {
    auto [code, msg] = load_error(R"({"bundles": {"A": {"base": ["m"], "fibers": {}}}})");
    CHECK(code == ErrorCode::InvariantViolation);
    CHECK(starts_with(msg, "/bundles/A/fibers:"));
    std::tie(code, msg) = load_error(
        R"({"bundles": {"A": {"base": ["m"], "fibers": {"m": ["a", "b"]},
            "trivialization": {"typical": ["t0", "t1"], "charts": {"m": {"a": "t0", "b": "t0"}}}}}})");
    CHECK(code == ErrorCode::InvariantViolation);
    CHECK(starts_with(msg, "/bundles/A:"));
    std::tie(code, msg) = load_error(
        R"({"groups": {"G": {"elements": ["e", "s"], "table": {"e|e": "e", "e|s": "s", "s|e": "s"}, "identity": "e"}}})");
    CHECK(starts_with(msg, "/groups/G/table:"));
    std::tie(code, msg) = load_error(
        R"({"topologies": {"T": {"points": ["a", "b"], "opens": [[], ["a"], ["b"]]}}})");
    CHECK(code == ErrorCode::InvariantViolation);
    CHECK(starts_with(msg, "/topologies/T:"));
    std::tie(code, msg) = load_error(R"({"sets": {"S": ["a", "a"]}})");
    CHECK(starts_with(msg, "/sets/S:"));
  }
  SUBCASE("names are unique across collections") {
    const auto [code, msg] = load_error(
        R"({"sets": {"X": ["a"]}, "bundles": {"X": {"base": ["m"], "fibers": {"m": []}}}})");
    CHECK(code == ErrorCode::InvariantViolation);
    CHECK(starts_with(msg, "/bundles/X:"));
  }
}

TEST_CASE("emit then load is the identity on canonical documents") {
  for (const char* name : {"relations", "bundles", "groups", "empty"}) {
    CAPTURE(name);
    const auto first = io::emit(io::load_text(slurp(fixture(name))));
    const auto second = io::emit(io::load(first));
    CHECK(io::dump(first) == io::dump(second));
  }
}

TEST_CASE("random universes survive a round trip") {
  testing::Rng rng(401);
  for (int trial = 0; trial < 100; ++trial) {
    io::Universe u;
    const auto a = testing::random_bundle(rng, "A", 1, 3, 1, 3, testing::coin(rng));
    const auto b = testing::random_bundle_over(rng, "B", a.base(), 1, 3);
    const auto c = testing::random_bundle(rng, "C", 1, 3, 0, 3);
    u.bundles.emplace("A", a);
    u.bundles.emplace("B", b);
    u.bundles.emplace("C", c);
    u.fibered.emplace("F", testing::random_fibered(rng, a, c, testing::coin(rng)));
    u.reduced.emplace("R", testing::random_reduced(rng, a, b));
    u.morphisms.emplace("M", testing::random_morphism(rng, a, b));
    u.correspondences.emplace("P", testing::random_relation(rng, a.base(), c.base()));
    const auto rep = testing::random_cyclic_rep(rng, testing::uniform(rng, 1, 3), 1, 2, 2);
    u.bundles.emplace("E", rep.space());
    u.representations.emplace("G", rep);
    u.towers.emplace("T", io::TowerSpec{{"A", "B"}});

    const auto doc = io::emit(u);
    const auto back = io::load(doc);
    CHECK(back.bundles.at("A") == a);
    CHECK(back.fibered.at("F") == u.fibered.at("F"));
    CHECK(back.reduced.at("R") == u.reduced.at("R"));
    CHECK(back.morphisms.at("M") == u.morphisms.at("M"));
    CHECK(back.correspondences.at("P") == u.correspondences.at("P"));
    CHECK(back.representations.at("G") == rep);
    CHECK(io::dump(io::emit(back)) == io::dump(doc));
  }
}

TEST_CASE("command reports") {
  SUBCASE("classify") {
    CHECK(on("bundles", {"classify", "diagonal"}).json()["result"]["classification"] ==
          "equivalence,ordering");
    CHECK(on("bundles", {"classify", "le"}).json()["result"]["classification"] == "ordering");
    CHECK(on("bundles", {"classify", "parity"}).json()["result"]["classification"] == "equivalence");
  }
  SUBCASE("compose of the single-pair fixtures") {
    const auto r = on("bundles", {"compose", "H", "F"});
    CHECK(r.status == cli::kOk);
    CHECK(r.json()["result"]["fibered"]["fibers"]["m|m"] == Json::parse(R"([["a", "c"]])"));
  }
  SUBCASE("check with a counterexample") {
    const auto r = on("bundles", {"check", "chain", "--property", "transitive"}).json()["result"];
    CHECK(r["holds"] == false);
    CHECK(r["counterexample"]["elements"] == Json::parse(R"(["p", "q", "r"])"));
    CHECK(on("bundles", {"check", "le", "--property", "reflexive"}).json()["result"]["holds"] == true);
  }
  SUBCASE("image") {
    const auto ok = on("bundles", {"image", "uniform", "S"});
    CHECK(ok.status == cli::kOk);
    CHECK(ok.json()["result"]["verified"] == true);
    const auto bad = on("bundles", {"image", "singular", "S"});
    CHECK(bad.status == cli::kDomain);
    CHECK(bad.json()["error"]["code"] == "SingularFiber");
  }
  SUBCASE("quotient and factorize") {
    const auto q = on("bundles", {"quotient", "Digits", "parity"}).json()["result"];
    CHECK(q["classes"]["m"]["0"] == Json::parse(R"(["0", "2"])"));
    const auto f = on("bundles", {"factorize", "collapse"}).json()["result"];
    CHECK(f["verified"] == true);
    CHECK(f["bundles"]["f(Digits)"]["fibers"]["m"] == Json::parse(R"(["u", "v"])"));
  }
  SUBCASE("sections") {
    const auto s = on("bundles", {"sections", "section_rel"}).json()["result"];
    CHECK(s["pairs"] == Json::parse(R"j([["(a,a)", "(a,a)"], ["(a,b)", "(a,b)"]])j"));
  }
  SUBCASE("towers") {
    CHECK(on("bundles", {"tower", "single"}).status == cli::kOk);
    const auto broken = on("bundles", {"tower", "broken"});
    CHECK(broken.status == cli::kDomain);
    CHECK(broken.json()["error"]["code"] == "BrokenChain");
  }
  SUBCASE("orbits") {
    const auto fp = on("groups", {"orbits", "fixed_point"}).json()["result"];
    CHECK(fp["free"] == false);
    CHECK(fp["degenerate_classes"] == Json::parse(R"([{"class": "r", "point": "o", "size": 1}])"));
    const auto free = on("groups", {"orbits", "free"}).json()["result"];
    CHECK(free["free"] == true);
    CHECK(free["bijections"]["m0"]["p"] == Json::parse(R"({"0": "p", "1": "q"})"));
  }
  SUBCASE("little group") {
    const auto r = on("groups", {"little-group", "swap", "--section", "r,p"}).json()["result"];
    CHECK(r["count"] == 4);
  }
  SUBCASE("continuity") {
    const auto r = on("relations", {"continuity", "phi", "indiscrete_xy", "discrete_uv", "--on", "x"});
    CHECK(r.json()["result"]["continuous"] == false);
    CHECK(r.json()["result"]["limit"] == false);
    const auto all = on("relations", {"continuity", "phi", "discrete_xy", "indiscrete_uv"});
    CHECK(all.json()["result"]["continuous_at"]["x"] == true);
  }
  SUBCASE("homomorphism") {
    CHECK(on("relations", {"homomorphism", "shift", "z2", "z2"}).json()["result"]["homomorphism"] == false);
    CHECK(on("relations", {"homomorphism", "id_z2", "z2", "z2"}).json()["result"]["homomorphism"] == true);
  }
}

TEST_CASE("exit statuses") {
  CHECK(invoke({"--help"}).status == cli::kOk);
  CHECK(invoke({"classify", "diagonal"}).status == cli::kUsage);
  CHECK(on("bundles", {}).status == cli::kUsage);
  CHECK(on("bundles", {"classify", "nothing"}).status == cli::kUsage);
  CHECK(on("bundles", {"classify", "A"}).status == cli::kUsage);
  CHECK(on("bundles", {"check", "le", "--property", "total"}).status == cli::kUsage);
  CHECK(on("bundles", {"compose", "F", "le"}).status == cli::kUsage);
  CHECK(invoke({"-u", fixture("missing-file"), "emit"}).status == cli::kUsage);
  const auto dangling = on("dangling", {"emit"});
  CHECK(dangling.status == cli::kDomain);
  CHECK(dangling.json()["error"]["code"] == "InvariantViolation");
  CHECK(on("malformed", {"emit"}).json()["error"]["code"] == "ParseError");
}

TEST_CASE("the enumeration bound can be lowered from the environment") {
  ::setenv("FIBRA_MAX_ENUM", "3", 1);
  const auto r = on("groups", {"little-group", "swap", "--section", "r,p"});
  ::unsetenv("FIBRA_MAX_ENUM");
  CHECK(r.status == cli::kDomain);
  CHECK(r.json()["error"]["code"] == "EnumerationBound");
}

TEST_CASE("reports are deterministic") {
  const std::vector<std::vector<std::string>> runs{
      {"bundles", "compose", "H", "F"},     {"bundles", "quotient", "Digits", "parity"},
      {"bundles", "factorize", "collapse"}, {"groups", "orbits", "swap"},
      {"bundles", "emit"},                  {"groups", "little-group", "swap", "--section", "p,q"}};
  for (const auto& r : runs) {
    const std::vector<std::string> args(r.begin() + 1, r.end());
    const auto first = on(r[0], args);
    const auto second = on(r[0], args);
    CHECK(first.status == cli::kOk);
    CHECK(first.out == second.out);
  }
}
