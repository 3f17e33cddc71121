#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <filesystem>

using namespace trni;
using namespace trni::testing;

TEST_CASE("program grammar") {
  TermPtr e = P("x_f x");
  REQUIRE(e->kind == TermKind::App);
  CHECK(e->a->name == "x_f");
  CHECK(e->b->name == "x");

  e = P("fn x:int => x mod 2");
  REQUIRE(e->kind == TermKind::Lam);
  CHECK(render(e->type) == "int");
  CHECK(e->a->kind == TermKind::Prim);
  CHECK(e->a->op == PrimOp::Mod);

  e = P("fst (1,2)");
  REQUIRE(e->kind == TermKind::Proj);
  CHECK(e->index == 1);
  CHECK(e->a->kind == TermKind::Pair);
}

TEST_CASE("precedence and associativity") {
  CHECK(alpha_equal_terms(P("1 + 2 * 3 == 7"), prim(PrimOp::Eq, prim(PrimOp::Add, N(1), prim(PrimOp::Mul, N(2), N(3))), N(7))));
  CHECK(alpha_equal_terms(P("1 - 2 - 3"), prim(PrimOp::Sub, prim(PrimOp::Sub, N(1), N(2)), N(3))));
  CHECK(alpha_equal_terms(P("f x y"), app(app(var("f"), var("x")), var("y"))));
  CHECK(alpha_equal_terms(P("f x + 1"), prim(PrimOp::Add, app(var("f"), var("x")), N(1))));
  CHECK(alpha_equal_terms(P("fst p + 1"), prim(PrimOp::Add, proj(1, var("p")), N(1))));
  CHECK(alpha_equal_terms(P("g [int] 3"), app(ty_app(var("g"), int_type()), N(3))));
  CHECK(alpha_equal_terms(P("1 - -2"), prim(PrimOp::Sub, N(1), N(-2))));
  CHECK(alpha_equal_terms(P("(1, 2, 3)"), pair(N(1), pair(N(2), N(3)))));
  CHECK(alpha_equal_types(T("int -> int -> int"), arrow_type(int_type(), arrow_type(int_type(), int_type()))));
  CHECK(alpha_equal_types(T("int * int -> int"), arrow_type(prod_type(int_type(), int_type()), int_type())));
  CHECK(alpha_equal_types(T("int * unit * int"), prod_type(int_type(), prod_type(unit_type(), int_type()))));
  CHECK(alpha_equal_types(T("forall a. a -> a"), forall_type("a", arrow_type(type_var("a"), type_var("a")))));
  CHECK(alpha_equal_terms(P("ifz 0 then 1 else 2 + 3"), if_zero(N(0), N(1), prim(PrimOp::Add, N(2), N(3)))));
}

TEST_CASE("comments and unit") {
  CHECK(alpha_equal_terms(P("# note\n( ) // trailing\n"), unit_lit()));
  CHECK(alpha_equal_terms(P("()"), unit_lit()));
}

TEST_CASE("parse errors report line and column") {
  try {
    P("fn x:int =>\n  x +");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.loc.line == 2);
    CHECK(e.loc.column >= 3);
  }
  CHECK_THROWS_AS(P("fn => 1"), ParseError);
  CHECK_THROWS_AS(P("1 $ 2"), ParseError);
  CHECK_THROWS_AS(P("let x = 1"), ParseError);
  CHECK_THROWS_AS(T("int ->"), ParseError);
  CHECK_THROWS_AS(P("fn ifz:int => 1"), ParseError);
}

TEST_CASE("subterm locations") {
  ParsedProgram pp = parse_program_with_locations("y_avg\n  (x1, x1)");
  CHECK(pp.locate({}).line == 1);
  CHECK(pp.locate({1}).line == 2);
  CHECK(pp.locate({1}).column == 3);
  CHECK(pp.locate({1, 1}).column == 8);
  CHECK(pp.locate({1, 1, 4}).column == 8);
}

TEST_CASE("policy grammar") {
  auto oe = std::get<SimplePolicy>(parse_policy("input x : int declass f\nfn f(x:int) -> int = x mod 2\n"));
  CHECK(oe.inputs == std::vector<std::string>{"x"});
  CHECK(oe.declass.at("x") == std::vector<std::string>{"f"});
  CHECK(alpha_equal_terms(oe.fns.at("f").lambda(), P("fn x:int => x mod 2")));

  auto ml = std::get<MultiLevelPolicy>(
      parse_policy("lattice { L < M ; M < H }\ninput hi : int @ H declass f to M\nfn f(v:int) -> int = v\n"));
  CHECK(ml.lattice.levels == std::vector<std::string>{"L", "M", "H"});
  CHECK(ml.lvl.at("hi") == "H");
  REQUIRE(ml.declass.at("hi").size() == 1);
  CHECK(ml.declass.at("hi")[0].level == "M");

  auto ave = std::get<SimplePolicy>(corpus_policy("P_Ave"));
  REQUIRE(ave.groups.size() == 1);
  CHECK(ave.groups[0].var == "y");
  CHECK(ave.groups[0].members == std::vector<std::string>{"x1", "x2"});
  CHECK(ave.groups[0].via == "avg");

  auto eq = std::get<SimplePolicy>(corpus_policy("P_Equiv"));
  REQUIRE(eq.equivs.size() == 1);
  CHECK(eq.equivs[0].target == "p");
  CHECK(eq.equivs[0].base == "q");
  CHECK(eq.equivs[0].adapter == "m");

  auto multi = std::get<MultiLevelPolicy>(
      parse_policy("lattice { L < M < H }\ninput x : int @ H declass f, g to M, h to L\n"
                   "fn f(v:int) -> int = v\nfn g(v:int) -> int = v\nfn h(v:int) -> int = v\n"));
  auto ts = multi.declass.at("x");
  REQUIRE(ts.size() == 3);
  CHECK(ts[0].level == "M");
  CHECK(ts[1].level == "M");
  CHECK(ts[2].level == "L");
}

TEST_CASE("policy parse errors") {
  CHECK_THROWS_AS(parse_policy("input x : int @ H\n"), ParseError);
  CHECK_THROWS_AS(parse_policy("output x : int\n"), ParseError);
  CHECK_THROWS_AS(parse_policy("input x : int declass\n"), ParseError);
  CHECK_THROWS_AS(parse_policy("lattice { A < B ; B < A }\n"), PolicyError);
}

TEST_CASE("property: render then parse is the identity on corpus programs") {
  int files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(TRNI_CORPUS_DIR)) {
    if (entry.path().extension() != ".trni") continue;
    ++files;
    TermPtr e = parse_program(slurp(entry.path().string()));
    TermPtr again = parse_program(render(e));
    CHECK_MESSAGE(alpha_equal_terms(e, again), entry.path().string());
    CHECK(render(again) == render(e));
  }
  CHECK(files >= 6);
}

TEST_CASE("property: render then parse is the identity on random programs") {
  TermContext g{{"x", T("a_f")}, {"x_f", T("a_f -> int")}, {"w", T("forall b. b -> b")}};
  ProgramGen gen(17, g, true);
  int n = 0;
  for (int i = 0; i < 400; ++i) {
    auto types = gen.interesting_types();
    TypePtr want = types[static_cast<std::size_t>(i) % types.size()];
    if (i % 4 == 1) want = arrow_type(int_type(), want);
    TermPtr e = gen.gen(want, 5);
    if (!e) continue;
    ++n;
    TermPtr again = parse_program(render(e));
    CHECK_MESSAGE(alpha_equal_terms(e, again), render(e));
  }
  CHECK(n > 250);
  for (const char* t : {"forall a. (a -> int) * unit -> a", "(int -> int) -> int", "int * (int * int)", "(int * int) * int"})
    CHECK(render(T(render(T(t)))) == render(T(t)));
}
