#pragma once

#include "trni/policy.hpp"
#include "trni/eval.hpp"
#include "trni/views.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace trni {

enum class RelKind { Full, Empty, Identity, ViaFns, DecTuple };

/// Interpretation of one type variable. `carrier` is the concrete type both sides live in.
struct RelDescriptor {
  RelKind kind;
  TypePtr carrier;
  std::vector<Declassifier> fns;  // ViaFns: all must agree; DecTuple: exactly one
  std::string label;              // overrides the default clause name when set

  static RelDescriptor full(TypePtr carrier);
  static RelDescriptor empty(TypePtr carrier);
  static RelDescriptor identity(TypePtr carrier);
  static RelDescriptor via(std::vector<Declassifier> fns);
  static RelDescriptor dec_tuple(const Declassifier& f);

  /// Name of the indistinguishability clause this descriptor implements.
  std::string clause() const;
  std::string describe() const;
};

using ValuePair = std::pair<TermPtr, TermPtr>;

struct RelEnv {
  std::map<std::string, RelDescriptor> ty;
  std::map<std::string, ValuePair> terms;
  TypeSubst left_subst;
  TypeSubst right_subst;
};

struct EnumBudget {
  std::uint64_t max_pairs = 1'000'000;
  std::uint64_t fuel = 1'000'000;
  long lo = -4;
  long hi = 4;
};

class RelationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnenumerableDomain : public RelationError {
 public:
  explicit UnenumerableDomain(const TypePtr& t);
};

class BudgetExceeded : public RelationError {
 public:
  explicit BudgetExceeded(const std::string& which);
};

/// A declassifier failed to evaluate on a domain value.
class DeclassifierFailure : public RelationError {
 public:
  using RelationError::RelationError;
};

class PreconditionError : public std::runtime_error {
 public:
  PreconditionError(std::string clause, const std::string& message);
  std::string clause;
};

/// Simple policies: secrets are unrestricted, declassifiable inputs related through their functions.
RelEnv rho_pol(const SimplePolicy& p, const ViewPair& v);

/// Multi-level policies: what an observer at `zeta` may distinguish.
RelEnv observer_env(const MultiLevelPolicy& p, const ViewPair& v, const std::string& zeta);
RelEnv observer_env(const MultiLevelPolicy& p, const std::string& zeta);

/// When unrelated: the clause that rejected the pair and a human-readable reason.
struct Mismatch {
  std::string clause;
  std::string detail;
};

std::optional<Mismatch> explain_values(const TypePtr& t, const RelEnv& env, const TermPtr& v1, const TermPtr& v2,
                                       const EnumBudget& budget);
std::optional<Mismatch> explain_terms(const TypePtr& t, const RelEnv& env, const TermPtr& e1, const TermPtr& e2,
                                      const EnumBudget& budget);

bool related_values(const TypePtr& t, const RelEnv& env, const TermPtr& v1, const TermPtr& v2,
                    const EnumBudget& budget = {});
bool related_terms(const TypePtr& t, const RelEnv& env, const TermPtr& e1, const TermPtr& e2,
                   const EnumBudget& budget = {});

/// All related value pairs of `t` whose integers lie in [budget.lo, budget.hi].
std::vector<ValuePair> enumerate_related_pairs(const TypePtr& t, const RelEnv& env, const EnumBudget& budget = {});

/// Every closed value of a concrete type over the domain, in ascending order.
std::vector<TermPtr> carrier_values(const TypePtr& concrete, const EnumBudget& budget);

/// Total order on closed values used for deterministic enumeration.
int compare_values(const TermPtr& a, const TermPtr& b);

using Substitution = std::map<std::string, TermPtr>;

struct SubstitutionPair {
  Substitution left;
  Substitution right;
};

/// Visits related substitution pairs in lexicographic order (inputs by name,
/// then left value, then right value). Stops early when `visit` returns false.
/// Returns the number of pairs visited.
std::uint64_t for_each_substitution_pair(const ViewPair& v, const RelEnv& env, const EnumBudget& budget,
                                         const std::function<bool(const SubstitutionPair&)>& visit);

std::vector<SubstitutionPair> enumerate_substitution_pairs(const ViewPair& v, const RelEnv& env,
                                                           const EnumBudget& budget = {});

struct Counterexample {
  Substitution gamma_left;   // inputs and group variables only
  Substitution gamma_right;
  TermPtr out_left;
  TermPtr out_right;
  TypePtr at;
  std::string clause;
  std::string explanation;
  std::string observer;  // empty for simple policies
};

struct Verdict {
  enum class Kind { Pass, Fail, Unsupported };
  Kind kind = Kind::Pass;
  std::uint64_t pairs_tested = 0;
  std::optional<Counterexample> counterexample;
  std::string reason;              // Unsupported
  std::vector<std::string> notes;  // e.g. the finite relation bank caveat
};

/// Brute-force check of TRNI at `t`. For multi-level policies an empty
/// `observer` sweeps every level bottom-up. Throws PreconditionError.
Verdict semantic_trni(const Policy& p, const TermPtr& e, const TypePtr& t, const EnumBudget& budget = {},
                      const std::optional<std::string>& observer = std::nullopt);

/// Replays a counterexample and returns the two outputs.
std::pair<TermPtr, TermPtr> replay(const Policy& p, const TermPtr& e, const Counterexample& ce,
                                   std::uint64_t fuel = kDefaultFuel);

struct LawCheck {
  std::string law;  // left-unit, right-unit, associativity
  int trial = 0;
  std::string lhs;
  std::string rhs;
  std::string lhs_value;
  std::string rhs_value;
  bool ok = false;
};

struct LawReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<LawCheck> checks;
  std::size_t failures() const;
};

LawReport check_monad_laws(std::uint64_t seed, int trials, long lo = -4, long hi = 4);

}  // namespace trni
