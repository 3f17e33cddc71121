#pragma once

#include "trni/syntax.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace trni {

/// Δ: type variables in scope, kept in insertion order.
using TypeContext = std::vector<std::string>;

/// Γ: term variables and their types.
using TermContext = std::map<std::string, TypePtr>;

using Path = std::vector<int>;

class TypeError : public std::runtime_error {
 public:
  TypeError(Path path, std::string rule, std::string message, TypePtr expected = nullptr,
            TypePtr found = nullptr);
  Path path;          // child indices from the root to the offending subterm
  std::string rule;   // e.g. "FT-App"
  std::string detail;
  TypePtr expected;
  TypePtr found;
};

bool check_wf_type(const TypeContext& delta, const TypePtr& t);

TypePtr infer_type(const TypeContext& delta, const TermContext& gamma, const TermPtr& e);

}  // namespace trni
