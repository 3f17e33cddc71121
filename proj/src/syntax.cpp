#include "trni/syntax.hpp"

#include <stdexcept>
#include <utility>

namespace trni {

namespace {

TypePtr make_type(TypeKind kind, std::string name, TypePtr left, TypePtr right) {
  return std::make_shared<const Type>(Type{kind, std::move(name), std::move(left), std::move(right)});
}

TermPtr make_term(Term t) {
  return std::make_shared<const Term>(std::move(t));
}

}  // namespace

TypePtr int_type() {
  static const TypePtr t = make_type(TypeKind::Int, "", nullptr, nullptr);
  return t;
}

TypePtr unit_type() {
  static const TypePtr t = make_type(TypeKind::Unit, "", nullptr, nullptr);
  return t;
}

TypePtr type_var(std::string name) { return make_type(TypeKind::Var, std::move(name), nullptr, nullptr); }

TypePtr prod_type(TypePtr left, TypePtr right) {
  return make_type(TypeKind::Prod, "", std::move(left), std::move(right));
}

TypePtr arrow_type(TypePtr dom, TypePtr cod) {
  return make_type(TypeKind::Arrow, "", std::move(dom), std::move(cod));
}

TypePtr forall_type(std::string binder, TypePtr body) {
  return make_type(TypeKind::Forall, std::move(binder), std::move(body), nullptr);
}

TypePtr tuple_type(const std::vector<TypePtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("tuple_type: no components");
  TypePtr acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = prod_type(*it, acc);
  return acc;
}

const char* prim_symbol(PrimOp op) {
  switch (op) {
    case PrimOp::Add: return "+";
    case PrimOp::Sub: return "-";
    case PrimOp::Mul: return "*";
    case PrimOp::Div: return "/";
    case PrimOp::Mod: return "mod";
    case PrimOp::Eq: return "==";
  }
  return "?";
}

TermPtr int_lit(BigInt n) {
  Term t{TermKind::IntLit};
  t.value = std::move(n);
  t.value_form = true;
  return make_term(std::move(t));
}

TermPtr unit_lit() {
  static const TermPtr u = [] {
    Term t{TermKind::UnitLit};
    t.value_form = true;
    return make_term(std::move(t));
  }();
  return u;
}

TermPtr var(std::string name) {
  Term t{TermKind::Var};
  t.name = std::move(name);
  return make_term(std::move(t));
}

TermPtr lam(std::string binder, TypePtr annot, TermPtr body) {
  Term t{TermKind::Lam};
  t.name = std::move(binder);
  t.type = std::move(annot);
  t.a = std::move(body);
  t.value_form = true;
  return make_term(std::move(t));
}

TermPtr app(TermPtr fun, TermPtr arg) {
  Term t{TermKind::App};
  t.a = std::move(fun);
  t.b = std::move(arg);
  return make_term(std::move(t));
}

TermPtr pair(TermPtr fst, TermPtr snd) {
  Term t{TermKind::Pair};
  t.value_form = fst->value_form && snd->value_form;
  t.a = std::move(fst);
  t.b = std::move(snd);
  return make_term(std::move(t));
}

TermPtr proj(int index, TermPtr arg) {
  if (index != 1 && index != 2) throw std::invalid_argument("proj: index must be 1 or 2");
  Term t{TermKind::Proj};
  t.index = index;
  t.a = std::move(arg);
  return make_term(std::move(t));
}

TermPtr ty_lam(std::string binder, TermPtr body) {
  Term t{TermKind::TyLam};
  t.name = std::move(binder);
  t.a = std::move(body);
  t.value_form = true;
  return make_term(std::move(t));
}

TermPtr ty_app(TermPtr fun, TypePtr at) {
  Term t{TermKind::TyApp};
  t.a = std::move(fun);
  t.type = std::move(at);
  return make_term(std::move(t));
}

TermPtr prim(PrimOp op, TermPtr left, TermPtr right) {
  Term t{TermKind::Prim};
  t.op = op;
  t.a = std::move(left);
  t.b = std::move(right);
  return make_term(std::move(t));
}

TermPtr if_zero(TermPtr cond, TermPtr then_branch, TermPtr else_branch) {
  Term t{TermKind::IfZero};
  t.a = std::move(cond);
  t.b = std::move(then_branch);
  t.c = std::move(else_branch);
  return make_term(std::move(t));
}

TermPtr tuple_term(const std::vector<TermPtr>& parts) {
  if (parts.empty()) throw std::invalid_argument("tuple_term: no components");
  TermPtr acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = pair(*it, acc);
  return acc;
}

std::vector<TermPtr> children(const Term& e) {
  std::vector<TermPtr> out;
  for (const TermPtr* c : {&e.a, &e.b, &e.c})
    if (*c) out.push_back(*c);
  return out;
}

// ---------------------------------------------------------------------------
// Free variables

namespace {

void collect_ftv(const TypePtr& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (t->kind) {
    case TypeKind::Int:
    case TypeKind::Unit:
      return;
    case TypeKind::Var:
      for (const auto& b : bound)
        if (b == t->name) return;
      out.insert(t->name);
      return;
    case TypeKind::Prod:
    case TypeKind::Arrow:
      collect_ftv(t->left, bound, out);
      collect_ftv(t->right, bound, out);
      return;
    case TypeKind::Forall:
      bound.push_back(t->name);
      collect_ftv(t->left, bound, out);
      bound.pop_back();
      return;
  }
}

void collect_term_ftv(const TermPtr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (e->kind) {
    case TermKind::Lam:
      collect_ftv(e->type, bound, out);
      collect_term_ftv(e->a, bound, out);
      return;
    case TermKind::TyApp:
      collect_term_ftv(e->a, bound, out);
      collect_ftv(e->type, bound, out);
      return;
    case TermKind::TyLam:
      bound.push_back(e->name);
      collect_term_ftv(e->a, bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : children(*e)) collect_term_ftv(c, bound, out);
  }
}

void collect_fv(const TermPtr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  switch (e->kind) {
    case TermKind::Var:
      for (const auto& b : bound)
        if (b == e->name) return;
      out.insert(e->name);
      return;
    case TermKind::Lam:
      bound.push_back(e->name);
      collect_fv(e->a, bound, out);
      bound.pop_back();
      return;
    default:
      for (const auto& c : children(*e)) collect_fv(c, bound, out);
  }
}

}  // namespace

std::set<std::string> free_type_vars(const TypePtr& t) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_ftv(t, bound, out);
  return out;
}

std::set<std::string> free_type_vars(const TermPtr& e) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_term_ftv(e, bound, out);
  return out;
}

std::set<std::string> free_term_vars(const TermPtr& e) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_fv(e, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

using BinderPairs = std::vector<std::pair<std::string, std::string>>;

// Both bound at the same depth, or both free with the same name.
bool same_variable(const BinderPairs& env, const std::string& x, const std::string& y) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    bool lx = it->first == x;
    bool ry = it->second == y;
    if (lx || ry) return lx && ry;
  }
  return x == y;
}

bool types_eq(const TypePtr& a, const TypePtr& b, BinderPairs& env) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TypeKind::Int:
    case TypeKind::Unit:
      return true;
    case TypeKind::Var:
      return same_variable(env, a->name, b->name);
    case TypeKind::Prod:
    case TypeKind::Arrow:
      return types_eq(a->left, b->left, env) && types_eq(a->right, b->right, env);
    case TypeKind::Forall: {
      env.emplace_back(a->name, b->name);
      bool r = types_eq(a->left, b->left, env);
      env.pop_back();
      return r;
    }
  }
  return false;
}

bool terms_eq(const TermPtr& a, const TermPtr& b, BinderPairs& vars, BinderPairs& tvars) {
  if (a == b && vars.empty() && tvars.empty()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::IntLit:
      return a->value == b->value;
    case TermKind::UnitLit:
      return true;
    case TermKind::Var:
      return same_variable(vars, a->name, b->name);
    case TermKind::Lam: {
      if (!types_eq(a->type, b->type, tvars)) return false;
      vars.emplace_back(a->name, b->name);
      bool r = terms_eq(a->a, b->a, vars, tvars);
      vars.pop_back();
      return r;
    }
    case TermKind::TyLam: {
      tvars.emplace_back(a->name, b->name);
      bool r = terms_eq(a->a, b->a, vars, tvars);
      tvars.pop_back();
      return r;
    }
    case TermKind::TyApp:
      return types_eq(a->type, b->type, tvars) && terms_eq(a->a, b->a, vars, tvars);
    case TermKind::Proj:
      return a->index == b->index && terms_eq(a->a, b->a, vars, tvars);
    case TermKind::Prim:
      if (a->op != b->op) return false;
      [[fallthrough]];
    case TermKind::App:
    case TermKind::Pair:
      return terms_eq(a->a, b->a, vars, tvars) && terms_eq(a->b, b->b, vars, tvars);
    case TermKind::IfZero:
      return terms_eq(a->a, b->a, vars, tvars) && terms_eq(a->b, b->b, vars, tvars) &&
             terms_eq(a->c, b->c, vars, tvars);
  }
  return false;
}

}  // namespace

bool alpha_equal_types(const TypePtr& t1, const TypePtr& t2) {
  BinderPairs env;
  return types_eq(t1, t2, env);
}

bool alpha_equal_terms(const TermPtr& e1, const TermPtr& e2) {
  BinderPairs vars, tvars;
  return terms_eq(e1, e2, vars, tvars);
}

// ---------------------------------------------------------------------------
// Rendering
//
// Type precedence: forall 0 < arrow 1 < product 2 < atom 3. Both binary type
// formers associate to the right.
// Term precedence: binders/ifz 0 < == 1 < additive 2 < multiplicative 3 <
// application 4 < atom 5. Binary operators associate to the left.

namespace {

void render_type(const TypePtr& t, int prec, std::string& out) {
  switch (t->kind) {
    case TypeKind::Int: out += "int"; return;
    case TypeKind::Unit: out += "unit"; return;
    case TypeKind::Var: out += t->name; return;
    case TypeKind::Prod:
      if (prec > 2) out += '(';
      render_type(t->left, 3, out);
      out += " * ";
      render_type(t->right, 2, out);
      if (prec > 2) out += ')';
      return;
    case TypeKind::Arrow:
      if (prec > 1) out += '(';
      render_type(t->left, 2, out);
      out += " -> ";
      render_type(t->right, 1, out);
      if (prec > 1) out += ')';
      return;
    case TypeKind::Forall:
      if (prec > 0) out += '(';
      out += "forall " + t->name + ". ";
      render_type(t->left, 0, out);
      if (prec > 0) out += ')';
      return;
  }
}

int prim_level(PrimOp op) {
  switch (op) {
    case PrimOp::Eq: return 1;
    case PrimOp::Add:
    case PrimOp::Sub: return 2;
    default: return 3;
  }
}

void render_term(const TermPtr& e, int prec, std::string& out) {
  auto open = [&](int level) {
    if (prec > level) out += '(';
  };
  auto close = [&](int level) {
    if (prec > level) out += ')';
  };
  switch (e->kind) {
    case TermKind::IntLit:
      if (e->value < 0)
        out += "(" + e->value.str() + ")";
      else
        out += e->value.str();
      return;
    case TermKind::UnitLit: out += "()"; return;
    case TermKind::Var: out += e->name; return;
    case TermKind::Lam:
      open(0);
      out += "fn " + e->name + ":";
      render_type(e->type, 0, out);
      out += " => ";
      render_term(e->a, 0, out);
      close(0);
      return;
    case TermKind::TyLam:
      open(0);
      out += "tfn " + e->name + " => ";
      render_term(e->a, 0, out);
      close(0);
      return;
    case TermKind::IfZero:
      open(0);
      out += "ifz ";
      render_term(e->a, 0, out);
      out += " then ";
      render_term(e->b, 0, out);
      out += " else ";
      render_term(e->c, 0, out);
      close(0);
      return;
    case TermKind::Prim: {
      int level = prim_level(e->op);
      open(level);
      render_term(e->a, level, out);
      out += ' ';
      out += prim_symbol(e->op);
      out += ' ';
      render_term(e->b, level + 1, out);
      close(level);
      return;
    }
    case TermKind::App:
      open(4);
      render_term(e->a, 4, out);
      out += ' ';
      render_term(e->b, 5, out);
      close(4);
      return;
    case TermKind::TyApp:
      open(4);
      render_term(e->a, 4, out);
      out += " [";
      render_type(e->type, 0, out);
      out += ']';
      close(4);
      return;
    case TermKind::Proj:
      open(4);
      out += e->index == 1 ? "fst " : "snd ";
      render_term(e->a, 5, out);
      close(4);
      return;
    case TermKind::Pair:
      out += '(';
      render_term(e->a, 0, out);
      out += ", ";
      render_term(e->b, 0, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string render(const TypePtr& t) {
  std::string out;
  render_type(t, 0, out);
  return out;
}

std::string render(const TermPtr& e) {
  std::string out;
  render_term(e, 0, out);
  return out;
}

}  // namespace trni
