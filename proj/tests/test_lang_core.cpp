#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "trni/eval.hpp"

using namespace trni;
using namespace trni::testing;

namespace {

long floor_div_ref(long a, long b) {
  long q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

std::vector<TermPtr> random_closed_programs(std::uint64_t seed, int count) {
  ProgramGen g(seed, {}, false);
  std::vector<TypePtr> shapes{T("int"), T("int * int"), T("int -> int"), T("(int * int) * int")};
  std::vector<TermPtr> out;
  for (int i = 0; static_cast<int>(out.size()) < count && i < count * 10; ++i)
    if (TermPtr e = g.gen(shapes[i % shapes.size()], 4)) out.push_back(e);
  return out;
}

}  // namespace

TEST_CASE("values") {
  CHECK(is_value(N(3)));
  CHECK(is_value(unit_lit()));
  CHECK(is_value(P("fn x:int => x + 1")));
  CHECK(is_value(P("tfn b => fn x:b => x")));
  CHECK(is_value(P("(1, fn x:int => x)")));
  CHECK_FALSE(is_value(P("(1, 1 + 1)")));
  CHECK_FALSE(is_value(P("fst (1, 2)")));
}

TEST_CASE("arithmetic evaluates with floored division") {
  CHECK(render(evaluate(P("1 + 2 * 3"))) == "7");
  CHECK(render(evaluate(P("7 / 2"))) == "3");
  CHECK(render(evaluate(P("-7 / 2"))) == "(-4)");
  CHECK(render(evaluate(P("-7 mod 2"))) == "1");
  CHECK(render(evaluate(P("7 mod -2"))) == "(-1)");
  CHECK(render(evaluate(P("3 == 3"))) == "1");
  CHECK(render(evaluate(P("3 == 4"))) == "0");
  CHECK_THROWS_AS(evaluate(P("1 / (2 - 2)")), DivisionByZero);
  CHECK_THROWS_AS(evaluate(P("1 mod 0")), DivisionByZero);
}

TEST_CASE("floor_div and floor_mod agree with a reference on a grid") {
  for (long a = -20; a <= 20; ++a)
    for (long b = -6; b <= 6; ++b) {
      if (b == 0) continue;
      long q = floor_div_ref(a, b);
      CHECK(floor_div(a, b) == q);
      CHECK(floor_mod(a, b) == a - b * q);
    }
}

TEST_CASE("big integers do not overflow") {
  CHECK(render(evaluate(P("99999999999 * 99999999999"))) == "9999999999800000000001");
}

TEST_CASE("call by value, left to right") {
  // The left operand fails first, so the error names it.
  try {
    evaluate(P("(1 / 0) + (2 mod 0)"));
    FAIL("expected DivisionByZero");
  } catch (const DivisionByZero& e) {
    CHECK(std::string(e.what()).find("1 / 0") != std::string::npos);
  }
  CHECK(render(evaluate(P("(fn x:int => x * x) (2 + 3)"))) == "25");
  CHECK(render(evaluate(P("snd (fst (1, 2), 3)"))) == "3");
  CHECK(render(evaluate(P("ifz 0 then 10 else 20"))) == "10");
  CHECK(render(evaluate(P("ifz 5 then 10 else 20"))) == "20");
  CHECK(render(evaluate(P("(tfn b => fn x:b => x) [int] 4"))) == "4");
}

TEST_CASE("stuck terms and fuel") {
  CHECK_THROWS_AS(evaluate(P("1 2")), StuckTerm);
  CHECK_THROWS_AS(evaluate(P("fst 1")), StuckTerm);
  CHECK_THROWS_AS(evaluate(P("x")), StuckTerm);
  CHECK_THROWS_AS(evaluate(P("1 + 2 + 3"), 1), FuelExhausted);
  CHECK(render(evaluate(P("1 + 2 + 3"), 2)) == "6");
}

TEST_CASE("substitution avoids capture") {
  TermPtr e = substitute_term(P("fn y:int => x + y"), "x", var("y"));
  REQUIRE(e->kind == TermKind::Lam);
  CHECK(e->name != "y");
  CHECK(alpha_equal_terms(e, P("fn z:int => y + z")));
  CHECK(alpha_equal_terms(substitute_term(P("fn x:int => x"), "x", N(1)), P("fn x:int => x")));

  TermPtr t = substitute_type(P("tfn b => fn x:a -> b => x"), "a", type_var("b"));
  CHECK(alpha_equal_terms(t, P("tfn c => fn x:b -> c => x")));
  CHECK(alpha_equal_types(substitute_type(T("forall b. a -> b"), "a", type_var("b")), T("forall c. b -> c")));
}

TEST_CASE("alpha equivalence and free variables") {
  CHECK(alpha_equal_types(T("forall a. a -> a"), T("forall b. b -> b")));
  CHECK_FALSE(alpha_equal_types(T("forall a. a -> b"), T("forall b. b -> b")));
  CHECK(alpha_equal_terms(P("fn x:int => fn y:int => x"), P("fn a:int => fn b:int => a")));
  CHECK_FALSE(alpha_equal_terms(P("fn x:int => fn y:int => x"), P("fn a:int => fn b:int => b")));
  CHECK(free_term_vars(P("fn x:int => x + y")) == std::set<std::string>{"y"});
  CHECK(free_type_vars(P("tfn b => fn x:b -> a => x")) == std::set<std::string>{"a"});
}

TEST_CASE("property: evaluation is deterministic") {
  for (const auto& e : random_closed_programs(11, 150)) {
    TermPtr v1 = evaluate(e), v2 = evaluate(e);
    CHECK(alpha_equal_terms(v1, v2));
    CHECK(is_value(v1));
  }
}

TEST_CASE("property: preservation and progress along every step") {
  int steps = 0;
  for (const auto& e : random_closed_programs(23, 150)) {
    TypePtr t = infer_type({}, {}, e);
    TermPtr cur = e;
    while (!is_value(cur)) {
      auto next = step(cur);
      REQUIRE_MESSAGE(next.has_value(), "well-typed term is stuck: " << render(cur));
      cur = *next;
      ++steps;
      CHECK_MESSAGE(alpha_equal_types(infer_type({}, {}, cur), t), render(cur));
    }
  }
  CHECK(steps > 500);
}
