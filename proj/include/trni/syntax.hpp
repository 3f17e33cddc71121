#pragma once

// Abstract syntax of the calculus: types, terms, and the small helpers every
// other module leans on (construction, printing, free variables, alpha
// equivalence). Nodes are immutable and shared through shared_ptr<const ...>.

#include <boost/multiprecision/cpp_int.hpp>

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace trni {

using BigInt = boost::multiprecision::cpp_int;

struct Type;
struct Term;
using TypePtr = std::shared_ptr<const Type>;
using TermPtr = std::shared_ptr<const Term>;

enum class TypeKind { Int, Unit, Var, Prod, Arrow, Forall };

struct Type {
  TypeKind kind;
  std::string name;  // Var: the variable; Forall: the binder
  TypePtr left;      // Prod: left, Arrow: domain, Forall: body
  TypePtr right;     // Prod: right, Arrow: codomain
};

TypePtr int_type();
TypePtr unit_type();
TypePtr type_var(std::string name);
TypePtr prod_type(TypePtr left, TypePtr right);
TypePtr arrow_type(TypePtr dom, TypePtr cod);
TypePtr forall_type(std::string binder, TypePtr body);

/// Right-nested product of `parts`; a single part is returned unchanged.
TypePtr tuple_type(const std::vector<TypePtr>& parts);

enum class PrimOp { Add, Sub, Mul, Div, Mod, Eq };

const char* prim_symbol(PrimOp op);

enum class TermKind {
  IntLit,
  UnitLit,
  Var,
  Lam,
  App,
  Pair,
  Proj,
  TyLam,
  TyApp,
  Prim,
  IfZero
};

struct Term {
  TermKind kind;
  BigInt value;       // IntLit
  std::string name;   // Var, Lam binder, TyLam binder
  TypePtr type;       // Lam annotation, TyApp argument
  PrimOp op = PrimOp::Add;
  int index = 0;      // Proj: 1 or 2
  TermPtr a, b, c;    // children, in source order
  bool value_form = false;
};

TermPtr int_lit(BigInt n);
TermPtr unit_lit();
TermPtr var(std::string name);
TermPtr lam(std::string binder, TypePtr annot, TermPtr body);
TermPtr app(TermPtr fun, TermPtr arg);
TermPtr pair(TermPtr fst, TermPtr snd);
TermPtr proj(int index, TermPtr arg);
TermPtr ty_lam(std::string binder, TermPtr body);
TermPtr ty_app(TermPtr fun, TypePtr at);
TermPtr prim(PrimOp op, TermPtr left, TermPtr right);
TermPtr if_zero(TermPtr cond, TermPtr then_branch, TermPtr else_branch);

/// Right-nested tuple of `parts`.
TermPtr tuple_term(const std::vector<TermPtr>& parts);

inline bool is_value(const TermPtr& e) { return e->value_form; }

/// Children in the order used by subterm paths.
std::vector<TermPtr> children(const Term& e);

std::set<std::string> free_type_vars(const TypePtr& t);
std::set<std::string> free_type_vars(const TermPtr& e);
std::set<std::string> free_term_vars(const TermPtr& e);

bool alpha_equal_types(const TypePtr& t1, const TypePtr& t2);

/// Structural equality of terms up to renaming of term and type binders.
bool alpha_equal_terms(const TermPtr& e1, const TermPtr& e2);

/// Concrete syntax, accepted back by the parser.
std::string render(const TypePtr& t);
std::string render(const TermPtr& e);

}  // namespace trni
