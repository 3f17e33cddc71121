#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <algorithm>

using namespace trni;
using namespace trni::testing;

namespace {

std::vector<std::string> codes(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& d : validate_policy(parse_policy(text))) out.push_back(d.code);
  return out;
}

bool has(const std::vector<std::string>& cs, const std::string& code) {
  return std::find(cs.begin(), cs.end(), code) != cs.end();
}

const char* kOE = "input x : int declass f\nfn f(x:int) -> int = x mod 2\n";

}  // namespace

TEST_CASE("corpus policies are valid") {
  for (const char* name : {"P_OE", "P_Ave", "P_Multi", "P_Monad", "P_Diamond", "P_Equiv"}) {
    INFO(name);
    CHECK(validate_policy(corpus_policy(name)).empty());
  }
}

TEST_CASE("simple policy diagnostics") {
  CHECK(codes(kOE).empty());
  CHECK(has(codes("input x : int\ninput x : int\n"), "DuplicateInput"));
  CHECK(has(codes("input x : int declass f\nfn f(v:int) -> int = v + z\n"), "OpenDeclassifier"));
  CHECK(has(codes("input x : int declass f\nfn f(v:int) -> int = ( )\n"), "DeclassifierTypeMismatch"));
  CHECK(has(codes("input x : int declass g\n"), "UnknownDeclassifier"));
  CHECK(has(codes("input x : int declass f, f\nfn f(v:int) -> int = v\n"), "UnknownDeclassifier"));
  CHECK(has(codes("input x : int declass f\nfn f(v:unit) -> int = 1\n"), "BadParamType"));
  CHECK(has(codes("input x : int\ngroup y = (x, z) declass s\nfn s(p:int*int) -> int = fst p\n"), "UnknownInput"));
  CHECK(has(codes("input a : int declass f\ninput b : int\ngroup y = (a, b) declass s\n"
                  "fn f(v:int) -> int = v\nfn s(p:int*int) -> int = fst p\n"),
            "GroupMemberOverlap"));
  CHECK(has(codes("input a : int\ninput b : int\ngroup y = (a, b) declass s\nfn s(p:int*int*int) -> int = fst p\n"),
            "GroupArity"));
  CHECK(has(codes("input a : int\ninput b : int\ngroup y = (a, b) declass s\nfn s(p:int*unit) -> int = fst p\n"),
            "BadParamType"));
  CHECK(has(codes("input a : int\ninput b : int\ngroup y = (a, b) declass s\nfn s(p:int) -> int = p\n"),
            "GroupArity"));
  CHECK(has(codes("input a : int\ninput y : int\ngroup y = (a) declass s\nfn s(p:int) -> int = p\n"),
            "NameCollision"));
}

TEST_CASE("generated names may not collide with inputs") {
  // x_f is both an input and the handle generated for x via f.
  CHECK(has(codes("input x : int declass f\ninput x_f : int\nfn f(v:int) -> int = v\n"), "NameCollision"));
}

TEST_CASE("equivalence witnesses") {
  CHECK(validate_policy(corpus_policy("P_Equiv")).empty());
  CHECK(has(codes("input x : int declass q\ninput z : int declass p\nfn q(v:int) -> int = v\n"
                  "fn p(v:int) -> int = v\nfn m(v:unit) -> int = 1\nequiv p = q compose m\n"),
            "EquivTypeMismatch"));
  CHECK(has(codes("input z : int declass p\nfn q(v:int) -> int = v\nfn p(v:int) -> int = v\n"
                  "fn m(v:int) -> int = v\nequiv p = q compose m\n"),
            "EquivBaseUnused"));
  auto p = std::get<SimplePolicy>(corpus_policy("P_Equiv"));
  CHECK(cross_check_equivalences(p, -6, 6).empty());
  p.fns.at("m").body = P("v mod 3");
  auto bad = cross_check_equivalences(p, -6, 6);
  REQUIRE_FALSE(bad.empty());
  CHECK(bad.front().code == "EquivCounterexample");
}

TEST_CASE("lattice closure and order") {
  LevelLattice lat = validate_lattice({"H", "M", "L"}, {{"L", "M"}, {"M", "H"}});
  CHECK(lat.levels == std::vector<std::string>{"L", "M", "H"});
  CHECK(leq(lat, "L", "H"));
  CHECK(leq(lat, "M", "M"));
  CHECK_FALSE(leq(lat, "H", "L"));
  CHECK_THROWS_AS(leq(lat, "L", "Z"), PolicyError);
  CHECK_THROWS_AS(validate_lattice({"A", "B"}, {{"A", "B"}, {"B", "A"}}), PolicyError);

  LevelLattice d = validate_lattice({"L", "A", "B", "H"}, {{"L", "A"}, {"L", "B"}, {"A", "H"}, {"B", "H"}});
  CHECK(leq(d, "L", "H"));
  CHECK_FALSE(leq(d, "A", "B"));
  CHECK_FALSE(leq(d, "B", "A"));
}

TEST_CASE("property: closure is reflexive, transitive and antisymmetric") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> levels;
    int n = 2 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) levels.push_back("L" + std::to_string(i));
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng() % 3 == 0) edges.push_back({levels[i], levels[j]});
    LevelLattice lat = validate_lattice(levels, edges);
    for (const auto& a : levels) {
      CHECK(leq(lat, a, a));
      for (const auto& b : levels) {
        if (a != b && leq(lat, a, b)) CHECK_FALSE(leq(lat, b, a));
        for (const auto& c : levels)
          if (leq(lat, a, b) && leq(lat, b, c)) CHECK(leq(lat, a, c));
      }
    }
    // Bottom-up order puts every level after the ones below it.
    for (std::size_t i = 0; i < lat.levels.size(); ++i)
      for (std::size_t j = i + 1; j < lat.levels.size(); ++j) CHECK_FALSE(leq(lat, lat.levels[j], lat.levels[i]));
  }
}

TEST_CASE("multi-level diagnostics") {
  const std::string lat = "lattice { L < M < H }\n";
  CHECK(codes(lat + "input x : int @ H declass f to M\nfn f(v:int) -> int = v\n").empty());
  CHECK(has(codes(lat + "input x : int\n"), "UnknownLevel"));
  CHECK(has(codes(lat + "input x : int @ Z\n"), "UnknownLevel"));
  CHECK(has(codes(lat + "input x : int @ H declass f to Z\nfn f(v:int) -> int = v\n"), "UnknownLevel"));
  CHECK(has(codes(lat + "input x : int @ L declass f to H\nfn f(v:int) -> int = v\n"), "DowngradeConstraint"));
  CHECK(has(codes(lat + "input x : int @ H declass q to M\ninput z : int @ H declass p to M\n"
                        "fn q(v:int) -> int = v\nfn p(v:int) -> int = v\nfn m(v:int) -> int = v\n"
                        "equiv p = q compose m\n"),
            "UnsupportedInMultiLevel"));
  CHECK(has(codes(lat + "input a : int @ L\ninput b : int @ M\ngroup y = (a, b) declass s to H\n"
                        "fn s(p:int*int) -> int = fst p\n"),
            "DowngradeConstraint"));
}
