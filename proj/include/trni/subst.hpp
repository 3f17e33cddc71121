#pragma once

#include "trni/syntax.hpp"

#include <map>
#include <string>

namespace trni {

/// Type substitution: type variable -> type (closed in every use here).
using TypeSubst = std::map<std::string, TypePtr>;

/// Term substitution: term variable -> term (closed values in every use here).
using TermSubst = std::map<std::string, TermPtr>;

/// e[x := v], capture-avoiding. Subtrees without a free x are shared.
TermPtr substitute_term(const TermPtr& e, const std::string& x, const TermPtr& v);

/// Simultaneous capture-avoiding substitution of several term variables.
TermPtr substitute_terms(const TermPtr& e, const TermSubst& s);

TypePtr substitute_type(const TypePtr& t, const std::string& a, const TypePtr& s);
TermPtr substitute_type(const TermPtr& e, const std::string& a, const TypePtr& s);

TypePtr apply_subst(const TypeSubst& s, const TypePtr& t);
TermPtr apply_subst(const TypeSubst& s, const TermPtr& e);

/// `base`, or `base` with primes appended, whichever is first not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

}  // namespace trni
