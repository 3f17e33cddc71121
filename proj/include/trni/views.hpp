#pragma once

#include "trni/policy.hpp"
#include "trni/subst.hpp"
#include "trni/typecheck.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace trni {

class EncodeError : public std::runtime_error {
 public:
  EncodeError(std::string code, const std::string& message);
  std::string code;  // NameCollision
};

struct Binding {
  std::string name;
  TypePtr type;
};

/// What a generated type variable stands for; the relation environments are built from this.
enum class VarRole {
  Secret,      // undeclassifiable input (simple)
  Declass,     // input declassifiable via `fns` (simple)
  Group,       // tuple variable of a group (simple)
  Equiv,       // input declassifiable via fns[0] or a declared equivalent composite
  Level,       // a_L (multi-level)
  Key,         // key type of a declassifiable input or group
  Value,       // payload type of a declassifiable input or group
};

struct TyVarInfo {
  VarRole role;
  TypePtr carrier;                          // image under the collapsing substitution
  std::string level;                        // Level, Key, Value of an input
  std::vector<std::string> fns;             // declassifiers
  std::vector<std::string> targets;         // target level per fn (multi-level)
  std::vector<std::string> member_levels;   // groups (multi-level)
  bool group = false;
};

struct GroupVar {
  std::string var;
  std::vector<std::string> members;
  std::string fn;
};

struct ViewPair {
  std::vector<Binding> confidential;
  TypeContext public_delta;
  std::vector<Binding> public_gamma;
  std::map<std::string, TermPtr> pinned;

  bool multilevel = false;
  std::vector<std::string> inputs;        // term variables that range over secrets
  std::vector<GroupVar> groups;           // synthesized from their members
  std::map<std::string, TyVarInfo> tyvars;

  TermContext confidential_context() const;
  TermContext public_context() const;
  TypePtr public_type_of(const std::string& name) const;
};

ViewPair encode_simple(const SimplePolicy& p);
ViewPair encode_multilevel(const MultiLevelPolicy& p);
ViewPair encode(const Policy& p);

TypeSubst delta_pol(const SimplePolicy& p, const ViewPair& v);
TypeSubst delta_pol(const MultiLevelPolicy& p, const ViewPair& v);
/// The collapsing substitution recorded in the views themselves.
TypeSubst delta_of(const ViewPair& v);

std::map<std::string, TermPtr> interface_implementations(const MultiLevelPolicy& p);

}  // namespace trni
