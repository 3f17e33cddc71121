#pragma once

#include "trni/syntax.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace trni {

struct SourceLoc {
  int line = 0;  // 1-based; 0 = unknown
  int column = 0;
};

struct Diagnostic {
  std::string code;
  std::string message;
  SourceLoc loc;
};

/// A closed declassification function `fn name(param : param_type) -> result_type = body`.
struct Declassifier {
  std::string name;
  std::string param;
  TypePtr param_type;
  TermPtr body;
  TypePtr result_type;
  SourceLoc loc;

  TermPtr lambda() const { return lam(param, param_type, body); }
};

struct GroupDecl {
  std::string var;                   // the fresh tuple variable
  std::vector<std::string> members;  // in tuple order
  std::string via;
  std::string target;                // multi-level only
  SourceLoc loc;
};

/// Asserts that `target` equals `base` composed with `adapter`.
struct EquivWitness {
  std::string target;
  std::string base;
  std::string adapter;
  SourceLoc loc;
};

struct SimplePolicy {
  std::vector<std::string> inputs;
  std::map<std::string, std::vector<std::string>> declass;
  std::vector<GroupDecl> groups;
  std::vector<EquivWitness> equivs;
  std::map<std::string, Declassifier> fns;
  std::map<std::string, SourceLoc> input_locs;
};

class PolicyError : public std::runtime_error {
 public:
  PolicyError(std::string code, const std::string& message);
  std::string code;  // CyclicOrder, UnknownLevel
};

struct LevelLattice {
  std::vector<std::string> levels;  // bottom-up topological order
  std::vector<std::pair<std::string, std::string>> edges;
  std::set<std::pair<std::string, std::string>> closure;
};

/// Builds the reflexive-transitive closure; throws PolicyError("CyclicOrder").
LevelLattice validate_lattice(const std::vector<std::string>& levels,
                              const std::vector<std::pair<std::string, std::string>>& edges);

/// Throws PolicyError("UnknownLevel") when either level is absent.
bool leq(const LevelLattice& lat, const std::string& a, const std::string& b);

struct DeclassTarget {
  std::string fn;
  std::string level;
};

struct MultiLevelPolicy {
  LevelLattice lattice;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> lvl;
  std::map<std::string, std::vector<DeclassTarget>> declass;
  std::map<std::string, Declassifier> fns;
  std::vector<GroupDecl> groups;
  std::vector<EquivWitness> equivs;  // always rejected; kept so validation can point at them
  std::map<std::string, SourceLoc> input_locs;
};

using Policy = std::variant<SimplePolicy, MultiLevelPolicy>;

std::vector<Diagnostic> validate_policy(const SimplePolicy& p);
std::vector<Diagnostic> validate_policy(const MultiLevelPolicy& p);
std::vector<Diagnostic> validate_policy(const Policy& p);

/// Evaluates `target n` and `base (adapter n)` for every n in [lo, hi] and
/// reports each disagreement as an EquivCounterexample diagnostic.
std::vector<Diagnostic> cross_check_equivalences(const SimplePolicy& p, long lo, long hi);

// Generated-name scheme shared by the encoders and the validators.
std::string handle_name(const std::string& input, const std::string& fn);
std::string join_tag(const std::vector<std::string>& parts);

}  // namespace trni
