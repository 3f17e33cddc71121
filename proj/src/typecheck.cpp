#include "trni/typecheck.hpp"

#include "trni/subst.hpp"

#include <set>

namespace trni {

namespace {

std::string compose_message(const std::string& rule, const std::string& message, const TypePtr& expected,
                            const TypePtr& found) {
  std::string out = rule + ": " + message;
  if (expected) out += "; expected " + render(expected);
  if (found) out += ", found " + render(found);
  return out;
}

bool wf(const std::set<std::string>& delta, const TypePtr& t) {
  for (const auto& v : free_type_vars(t))
    if (!delta.count(v)) return false;
  return true;
}

struct Checker {
  std::set<std::string> delta;
  Path path;

  [[noreturn]] void fail(const std::string& rule, const std::string& msg, TypePtr expected = nullptr,
                         TypePtr found = nullptr) {
    throw TypeError(path, rule, msg, std::move(expected), std::move(found));
  }

  TypePtr child(int idx, const TermContext& gamma, const TermPtr& e) {
    path.push_back(idx);
    TypePtr t = infer(gamma, e);
    path.pop_back();
    return t;
  }

  void require_int(int idx, const TypePtr& t, const std::string& rule) {
    if (t->kind != TypeKind::Int) {
      path.push_back(idx);
      fail(rule, "operand must be an integer", int_type(), t);
    }
  }

  TypePtr infer(const TermContext& gamma, const TermPtr& e) {
    switch (e->kind) {
      case TermKind::IntLit:
        return int_type();
      case TermKind::UnitLit:
        return unit_type();
      case TermKind::Var: {
        auto it = gamma.find(e->name);
        if (it == gamma.end()) fail("FT-Var", "unbound variable " + e->name);
        return it->second;
      }
      case TermKind::Lam: {
        if (!wf(delta, e->type)) fail("FT-Fun", "annotation is not well-formed: " + render(e->type));
        TermContext inner = gamma;
        inner[e->name] = e->type;
        return arrow_type(e->type, child(0, inner, e->a));
      }
      case TermKind::App: {
        TypePtr f = child(0, gamma, e->a);
        TypePtr x = child(1, gamma, e->b);
        if (f->kind != TypeKind::Arrow) {
          path.push_back(0);
          fail("FT-App", "applying a non-function", nullptr, f);
        }
        if (!alpha_equal_types(f->left, x)) {
          path.push_back(1);
          fail("FT-App", "argument type does not match the domain", f->left, x);
        }
        return f->right;
      }
      case TermKind::Pair:
        return prod_type(child(0, gamma, e->a), child(1, gamma, e->b));
      case TermKind::Proj: {
        TypePtr t = child(0, gamma, e->a);
        if (t->kind != TypeKind::Prod) {
          path.push_back(0);
          fail("FT-Prj", "projection from a non-product", nullptr, t);
        }
        return e->index == 1 ? t->left : t->right;
      }
      case TermKind::TyLam: {
        bool added = delta.insert(e->name).second;
        TypePtr body;
        try {
          body = child(0, gamma, e->a);
        } catch (...) {
          if (added) delta.erase(e->name);
          throw;
        }
        if (added) delta.erase(e->name);
        return forall_type(e->name, body);
      }
      case TermKind::TyApp: {
        TypePtr f = child(0, gamma, e->a);
        if (!wf(delta, e->type)) fail("FT-TyApp", "type argument is not well-formed: " + render(e->type));
        if (f->kind != TypeKind::Forall) {
          path.push_back(0);
          fail("FT-TyApp", "type application of a non-polymorphic term", nullptr, f);
        }
        return substitute_type(f->left, f->name, e->type);
      }
      case TermKind::Prim: {
        TypePtr l = child(0, gamma, e->a);
        TypePtr r = child(1, gamma, e->b);
        require_int(0, l, "FT-Prim");
        require_int(1, r, "FT-Prim");
        return int_type();
      }
      case TermKind::IfZero: {
        TypePtr c = child(0, gamma, e->a);
        require_int(0, c, "FT-Ifz");
        TypePtr t = child(1, gamma, e->b);
        TypePtr f = child(2, gamma, e->c);
        if (!alpha_equal_types(t, f)) {
          path.push_back(2);
          fail("FT-Ifz", "branches disagree", t, f);
        }
        return t;
      }
    }
    fail("FT", "unknown term form");
  }
};

}  // namespace

TypeError::TypeError(Path p, std::string r, std::string message, TypePtr exp, TypePtr fnd)
    : std::runtime_error(compose_message(r, message, exp, fnd)),
      path(std::move(p)),
      rule(std::move(r)),
      detail(std::move(message)),
      expected(std::move(exp)),
      found(std::move(fnd)) {}

bool check_wf_type(const TypeContext& delta, const TypePtr& t) {
  return wf(std::set<std::string>(delta.begin(), delta.end()), t);
}

TypePtr infer_type(const TypeContext& delta, const TermContext& gamma, const TermPtr& e) {
  Checker c;
  c.delta.insert(delta.begin(), delta.end());
  return c.infer(gamma, e);
}

}  // namespace trni
