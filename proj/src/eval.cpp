#include "trni/eval.hpp"

#include "trni/subst.hpp"

namespace trni {

StuckTerm::StuckTerm(const TermPtr& at) : EvalError("stuck term: " + render(at)), term(at) {}

DivisionByZero::DivisionByZero(const TermPtr& at)
    : EvalError("division by zero in " + render(at)), term(at) {}

FuelExhausted::FuelExhausted(std::uint64_t f)
    : EvalError("evaluation exceeded " + std::to_string(f) + " steps"), fuel(f) {}

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  BigInt r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) q -= 1;
  return q;
}

BigInt floor_mod(const BigInt& a, const BigInt& b) {
  BigInt r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

namespace {

TermPtr apply_prim(const TermPtr& whole, PrimOp op, const BigInt& x, const BigInt& y) {
  switch (op) {
    case PrimOp::Add: return int_lit(x + y);
    case PrimOp::Sub: return int_lit(x - y);
    case PrimOp::Mul: return int_lit(x * y);
    case PrimOp::Div:
      if (y == 0) throw DivisionByZero(whole);
      return int_lit(floor_div(x, y));
    case PrimOp::Mod:
      if (y == 0) throw DivisionByZero(whole);
      return int_lit(floor_mod(x, y));
    case PrimOp::Eq: return int_lit(x == y ? 1 : 0);
  }
  throw StuckTerm(whole);
}

}  // namespace

std::optional<TermPtr> step(const TermPtr& e) {
  if (is_value(e)) return std::nullopt;
  switch (e->kind) {
    case TermKind::IntLit:
    case TermKind::UnitLit:
    case TermKind::Lam:
    case TermKind::TyLam:
      return std::nullopt;
    case TermKind::Var:
      throw StuckTerm(e);
    case TermKind::App: {
      if (!is_value(e->a)) return app(*step(e->a), e->b);
      if (!is_value(e->b)) return app(e->a, *step(e->b));
      if (e->a->kind != TermKind::Lam) throw StuckTerm(e);
      return substitute_term(e->a->a, e->a->name, e->b);
    }
    case TermKind::Pair: {
      if (!is_value(e->a)) return pair(*step(e->a), e->b);
      return pair(e->a, *step(e->b));
    }
    case TermKind::Proj: {
      if (!is_value(e->a)) return proj(e->index, *step(e->a));
      if (e->a->kind != TermKind::Pair) throw StuckTerm(e);
      return e->index == 1 ? e->a->a : e->a->b;
    }
    case TermKind::TyApp: {
      if (!is_value(e->a)) return ty_app(*step(e->a), e->type);
      if (e->a->kind != TermKind::TyLam) throw StuckTerm(e);
      return substitute_type(e->a->a, e->a->name, e->type);
    }
    case TermKind::Prim: {
      if (!is_value(e->a)) return prim(e->op, *step(e->a), e->b);
      if (!is_value(e->b)) return prim(e->op, e->a, *step(e->b));
      if (e->a->kind != TermKind::IntLit || e->b->kind != TermKind::IntLit) throw StuckTerm(e);
      return apply_prim(e, e->op, e->a->value, e->b->value);
    }
    case TermKind::IfZero: {
      if (!is_value(e->a)) return if_zero(*step(e->a), e->b, e->c);
      if (e->a->kind != TermKind::IntLit) throw StuckTerm(e);
      return e->a->value == 0 ? e->b : e->c;
    }
  }
  throw StuckTerm(e);
}

TermPtr evaluate(const TermPtr& e, std::uint64_t fuel) {
  TermPtr cur = e;
  for (std::uint64_t used = 0; !is_value(cur); ++used) {
    if (used >= fuel) throw FuelExhausted(fuel);
    cur = *step(cur);
  }
  return cur;
}

}  // namespace trni
