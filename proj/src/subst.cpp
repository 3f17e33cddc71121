#include "trni/subst.hpp"

namespace trni {

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base;
  while (avoid.count(candidate)) candidate += '\'';
  return candidate;
}

namespace {

// ---- types ---------------------------------------------------------------

TypePtr subst_type(const TypePtr& t, const TypeSubst& s, const std::set<std::string>& range_ftv) {
  switch (t->kind) {
    case TypeKind::Int:
    case TypeKind::Unit:
      return t;
    case TypeKind::Var: {
      auto it = s.find(t->name);
      return it == s.end() ? t : it->second;
    }
    case TypeKind::Prod:
    case TypeKind::Arrow: {
      TypePtr l = subst_type(t->left, s, range_ftv);
      TypePtr r = subst_type(t->right, s, range_ftv);
      if (l == t->left && r == t->right) return t;
      return t->kind == TypeKind::Prod ? prod_type(l, r) : arrow_type(l, r);
    }
    case TypeKind::Forall: {
      TypeSubst inner = s;
      inner.erase(t->name);
      if (inner.empty()) return t;
      std::string binder = t->name;
      TypePtr body = t->left;
      if (range_ftv.count(binder)) {
        std::set<std::string> avoid = range_ftv;
        for (const auto& v : free_type_vars(body)) avoid.insert(v);
        for (const auto& [k, _] : inner) avoid.insert(k);
        std::string renamed = fresh_name(binder, avoid);
        body = subst_type(body, TypeSubst{{binder, type_var(renamed)}}, {renamed});
        binder = renamed;
      }
      TypePtr nb = subst_type(body, inner, range_ftv);
      if (nb == t->left && binder == t->name) return t;
      return forall_type(binder, nb);
    }
  }
  return t;
}

std::set<std::string> range_type_vars(const TypeSubst& s) {
  std::set<std::string> out;
  for (const auto& [_, ty] : s)
    for (const auto& v : free_type_vars(ty)) out.insert(v);
  return out;
}

TermPtr subst_type_in_term(const TermPtr& e, const TypeSubst& s, const std::set<std::string>& range_ftv) {
  switch (e->kind) {
    case TermKind::IntLit:
    case TermKind::UnitLit:
    case TermKind::Var:
      return e;
    case TermKind::Lam: {
      TypePtr ty = subst_type(e->type, s, range_ftv);
      TermPtr body = subst_type_in_term(e->a, s, range_ftv);
      if (ty == e->type && body == e->a) return e;
      return lam(e->name, ty, body);
    }
    case TermKind::TyApp: {
      TermPtr f = subst_type_in_term(e->a, s, range_ftv);
      TypePtr ty = subst_type(e->type, s, range_ftv);
      if (f == e->a && ty == e->type) return e;
      return ty_app(f, ty);
    }
    case TermKind::TyLam: {
      TypeSubst inner = s;
      inner.erase(e->name);
      if (inner.empty()) return e;
      std::string binder = e->name;
      TermPtr body = e->a;
      if (range_ftv.count(binder)) {
        std::set<std::string> avoid = range_ftv;
        for (const auto& v : free_type_vars(body)) avoid.insert(v);
        for (const auto& [k, _] : inner) avoid.insert(k);
        std::string renamed = fresh_name(binder, avoid);
        body = subst_type_in_term(body, TypeSubst{{binder, type_var(renamed)}}, {renamed});
        binder = renamed;
      }
      TermPtr nb = subst_type_in_term(body, inner, range_ftv);
      if (nb == e->a && binder == e->name) return e;
      return ty_lam(binder, nb);
    }
    case TermKind::App:
    case TermKind::Pair:
    case TermKind::Prim: {
      TermPtr l = subst_type_in_term(e->a, s, range_ftv);
      TermPtr r = subst_type_in_term(e->b, s, range_ftv);
      if (l == e->a && r == e->b) return e;
      if (e->kind == TermKind::App) return app(l, r);
      if (e->kind == TermKind::Pair) return pair(l, r);
      return prim(e->op, l, r);
    }
    case TermKind::Proj: {
      TermPtr x = subst_type_in_term(e->a, s, range_ftv);
      return x == e->a ? e : proj(e->index, x);
    }
    case TermKind::IfZero: {
      TermPtr c = subst_type_in_term(e->a, s, range_ftv);
      TermPtr t = subst_type_in_term(e->b, s, range_ftv);
      TermPtr f = subst_type_in_term(e->c, s, range_ftv);
      if (c == e->a && t == e->b && f == e->c) return e;
      return if_zero(c, t, f);
    }
  }
  return e;
}

// ---- terms ---------------------------------------------------------------

TermPtr subst_terms(const TermPtr& e, const TermSubst& s, const std::set<std::string>& range_fv) {
  switch (e->kind) {
    case TermKind::IntLit:
    case TermKind::UnitLit:
      return e;
    case TermKind::Var: {
      auto it = s.find(e->name);
      return it == s.end() ? e : it->second;
    }
    case TermKind::Lam: {
      bool shadows = s.count(e->name) > 0;
      if (shadows && s.size() == 1) return e;
      if (!shadows && !range_fv.count(e->name)) {
        TermPtr nb = subst_terms(e->a, s, range_fv);
        return nb == e->a ? e : lam(e->name, e->type, nb);
      }
      TermSubst inner = s;
      inner.erase(e->name);
      if (inner.empty()) return e;
      std::string binder = e->name;
      TermPtr body = e->a;
      if (range_fv.count(binder)) {
        std::set<std::string> avoid = range_fv;
        for (const auto& v : free_term_vars(body)) avoid.insert(v);
        for (const auto& [k, _] : inner) avoid.insert(k);
        std::string renamed = fresh_name(binder, avoid);
        body = subst_terms(body, TermSubst{{binder, var(renamed)}}, {renamed});
        binder = renamed;
      }
      TermPtr nb = subst_terms(body, inner, range_fv);
      if (nb == e->a && binder == e->name) return e;
      return lam(binder, e->type, nb);
    }
    case TermKind::TyLam: {
      TermPtr nb = subst_terms(e->a, s, range_fv);
      return nb == e->a ? e : ty_lam(e->name, nb);
    }
    case TermKind::TyApp: {
      TermPtr f = subst_terms(e->a, s, range_fv);
      return f == e->a ? e : ty_app(f, e->type);
    }
    case TermKind::App:
    case TermKind::Pair:
    case TermKind::Prim: {
      TermPtr l = subst_terms(e->a, s, range_fv);
      TermPtr r = subst_terms(e->b, s, range_fv);
      if (l == e->a && r == e->b) return e;
      if (e->kind == TermKind::App) return app(l, r);
      if (e->kind == TermKind::Pair) return pair(l, r);
      return prim(e->op, l, r);
    }
    case TermKind::Proj: {
      TermPtr x = subst_terms(e->a, s, range_fv);
      return x == e->a ? e : proj(e->index, x);
    }
    case TermKind::IfZero: {
      TermPtr c = subst_terms(e->a, s, range_fv);
      TermPtr t = subst_terms(e->b, s, range_fv);
      TermPtr f = subst_terms(e->c, s, range_fv);
      if (c == e->a && t == e->b && f == e->c) return e;
      return if_zero(c, t, f);
    }
  }
  return e;
}

}  // namespace

TermPtr substitute_terms(const TermPtr& e, const TermSubst& s) {
  if (s.empty()) return e;
  std::set<std::string> range_fv;
  for (const auto& [_, v] : s)
    if (v->kind != TermKind::IntLit && v->kind != TermKind::UnitLit)
      for (const auto& x : free_term_vars(v)) range_fv.insert(x);
  return subst_terms(e, s, range_fv);
}

TermPtr substitute_term(const TermPtr& e, const std::string& x, const TermPtr& v) {
  return substitute_terms(e, TermSubst{{x, v}});
}

TypePtr apply_subst(const TypeSubst& s, const TypePtr& t) {
  if (s.empty()) return t;
  return subst_type(t, s, range_type_vars(s));
}

TermPtr apply_subst(const TypeSubst& s, const TermPtr& e) {
  if (s.empty()) return e;
  return subst_type_in_term(e, s, range_type_vars(s));
}

TypePtr substitute_type(const TypePtr& t, const std::string& a, const TypePtr& s) {
  return apply_subst(TypeSubst{{a, s}}, t);
}

TermPtr substitute_type(const TermPtr& e, const std::string& a, const TypePtr& s) {
  return apply_subst(TypeSubst{{a, s}}, e);
}

}  // namespace trni
