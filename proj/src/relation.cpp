#include "trni/relation.hpp"

#include "trni/eval.hpp"
#include "trni/subst.hpp"
#include "trni/typecheck.hpp"

#include <algorithm>
#include <random>

namespace trni {

// ---- descriptors -------------------------------------------------------------

RelDescriptor RelDescriptor::full(TypePtr carrier) { return {RelKind::Full, std::move(carrier), {}, {}}; }
RelDescriptor RelDescriptor::empty(TypePtr carrier) { return {RelKind::Empty, std::move(carrier), {}, {}}; }
RelDescriptor RelDescriptor::identity(TypePtr carrier) { return {RelKind::Identity, std::move(carrier), {}, {}}; }
RelDescriptor RelDescriptor::via(std::vector<Declassifier> fns) {
  TypePtr carrier = fns.empty() ? int_type() : fns.front().param_type;
  return {RelKind::ViaFns, carrier, std::move(fns), {}};
}
RelDescriptor RelDescriptor::dec_tuple(const Declassifier& f) { return {RelKind::DecTuple, f.param_type, {f}, {}}; }

std::string RelDescriptor::clause() const {
  if (!label.empty()) return label;
  switch (kind) {
    case RelKind::Full: return "Eq-Var1";
    case RelKind::Empty: return "Eq-Empty";
    case RelKind::Identity: return "Eq-Id";
    case RelKind::ViaFns: return fns.size() == 1 ? "Eq-Var2" : "Eq-Var4";
    case RelKind::DecTuple: return "Eq-Var5";
  }
  return "Eq-Var";
}

std::string RelDescriptor::describe() const {
  auto names = [&] {
    std::vector<std::string> n;
    for (const auto& f : fns) n.push_back(f.name);
    std::string out;
    for (std::size_t i = 0; i < n.size(); ++i) out += (i ? ", " : "") + n[i];
    return out;
  };
  switch (kind) {
    case RelKind::Full: return "Full(" + render(carrier) + ")";
    case RelKind::Empty: return "Empty(" + render(carrier) + ")";
    case RelKind::Identity: return "Id(" + render(carrier) + ")";
    case RelKind::ViaFns: return "Via(" + names() + ")";
    case RelKind::DecTuple: return "Dec(" + names() + ")";
  }
  return "?";
}

UnenumerableDomain::UnenumerableDomain(const TypePtr& t)
    : RelationError("cannot enumerate related values of type " + render(t)) {}

BudgetExceeded::BudgetExceeded(const std::string& which) : RelationError("enumeration budget exceeded: " + which) {}

PreconditionError::PreconditionError(std::string c, const std::string& message)
    : std::runtime_error(message), clause(std::move(c)) {}

// ---- environments ------------------------------------------------------------

namespace {

void pin_terms(RelEnv& env, const ViewPair& v) {
  for (const auto& [name, impl] : v.pinned) env.terms[name] = {impl, impl};
  env.left_subst = env.right_subst = delta_of(v);
}

std::vector<Declassifier> lookup_fns(const std::map<std::string, Declassifier>& fns,
                                     const std::vector<std::string>& names) {
  std::vector<Declassifier> out;
  for (const auto& n : names) out.push_back(fns.at(n));
  return out;
}

}  // namespace

RelEnv rho_pol(const SimplePolicy& p, const ViewPair& v) {
  RelEnv env;
  for (const auto& [name, info] : v.tyvars) {
    switch (info.role) {
      case VarRole::Declass:
        env.ty.emplace(name, RelDescriptor::via(lookup_fns(p.fns, info.fns)));
        break;
      case VarRole::Equiv: {
        RelDescriptor d = RelDescriptor::via(lookup_fns(p.fns, info.fns));
        d.label = "Eq-Var6";
        env.ty.emplace(name, d);
        break;
      }
      case VarRole::Group:
        env.ty.emplace(name, RelDescriptor::dec_tuple(p.fns.at(info.fns.front())));
        break;
      default:
        env.ty.emplace(name, RelDescriptor::full(info.carrier));
        break;
    }
  }
  pin_terms(env, v);
  return env;
}

RelEnv observer_env(const MultiLevelPolicy& p, const ViewPair& v, const std::string& zeta) {
  const LevelLattice& lat = p.lattice;
  leq(lat, zeta, zeta);  // throws UnknownLevel
  auto below = [&](const std::string& l) { return leq(lat, l, zeta); };
  RelEnv env;
  for (const auto& [name, info] : v.tyvars) {
    bool members_below = !info.member_levels.empty() &&
                         std::all_of(info.member_levels.begin(), info.member_levels.end(), below);
    std::vector<std::string> visible;
    for (std::size_t i = 0; i < info.fns.size(); ++i)
      if (below(info.targets[i])) visible.push_back(info.fns[i]);
    switch (info.role) {
      case VarRole::Level:
        env.ty.emplace(name, below(info.level) ? RelDescriptor::full(unit_type()) : RelDescriptor::empty(unit_type()));
        break;
      case VarRole::Key: {
        bool open = info.group ? members_below || !visible.empty() : below(info.level) || !visible.empty();
        env.ty.emplace(name, open ? RelDescriptor::full(unit_type()) : RelDescriptor::empty(unit_type()));
        break;
      }
      case VarRole::Value: {
        bool sees_all = info.group ? members_below : below(info.level);
        if (sees_all)
          env.ty.emplace(name, RelDescriptor::identity(info.carrier));
        else if (!visible.empty())
          env.ty.emplace(name, info.group ? RelDescriptor::dec_tuple(p.fns.at(visible.front()))
                                          : RelDescriptor::via(lookup_fns(p.fns, visible)));
        else
          env.ty.emplace(name, RelDescriptor::full(info.carrier));
        break;
      }
      default:
        env.ty.emplace(name, RelDescriptor::full(info.carrier));
        break;
    }
  }
  pin_terms(env, v);
  return env;
}

RelEnv observer_env(const MultiLevelPolicy& p, const std::string& zeta) {
  return observer_env(p, encode_multilevel(p), zeta);
}

// ---- values ------------------------------------------------------------------

int compare_values(const TermPtr& a, const TermPtr& b) {
  auto rank = [](TermKind k) {
    switch (k) {
      case TermKind::IntLit: return 0;
      case TermKind::UnitLit: return 1;
      case TermKind::Pair: return 2;
      case TermKind::Lam: return 3;
      case TermKind::TyLam: return 4;
      default: return 5;
    }
  };
  if (a->kind != b->kind) return rank(a->kind) < rank(b->kind) ? -1 : 1;
  switch (a->kind) {
    case TermKind::IntLit:
      return a->value < b->value ? -1 : (a->value > b->value ? 1 : 0);
    case TermKind::UnitLit:
      return 0;
    case TermKind::Pair: {
      int c = compare_values(a->a, b->a);
      return c ? c : compare_values(a->b, b->b);
    }
    case TermKind::Lam:
      if (is_value(a->a) && is_value(b->a)) return compare_values(a->a, b->a);
      [[fallthrough]];
    default: {
      std::string ra = render(a), rb = render(b);
      return ra < rb ? -1 : (ra > rb ? 1 : 0);
    }
  }
}

std::vector<TermPtr> carrier_values(const TypePtr& t, const EnumBudget& budget) {
  switch (t->kind) {
    case TypeKind::Int: {
      std::vector<TermPtr> out;
      for (long n = budget.lo; n <= budget.hi; ++n) out.push_back(int_lit(n));
      return out;
    }
    case TypeKind::Unit:
      return {unit_lit()};
    case TypeKind::Prod: {
      auto ls = carrier_values(t->left, budget);
      auto rs = carrier_values(t->right, budget);
      if (static_cast<double>(ls.size()) * static_cast<double>(rs.size()) > static_cast<double>(budget.max_pairs))
        throw BudgetExceeded("max_pairs");
      std::vector<TermPtr> out;
      for (const auto& l : ls)
        for (const auto& r : rs) out.push_back(pair(l, r));
      return out;
    }
    default:
      throw UnenumerableDomain(t);
  }
}

// ---- the relation interpreter ------------------------------------------------

namespace {

const std::vector<RelDescriptor>& relation_bank() {
  static const std::vector<RelDescriptor> bank{
      RelDescriptor::identity(int_type()), RelDescriptor::full(int_type()), RelDescriptor::empty(int_type()),
      RelDescriptor::full(unit_type())};
  return bank;
}

const RelDescriptor& descriptor(const RelEnv& env, const std::string& name) {
  auto it = env.ty.find(name);
  if (it == env.ty.end()) throw RelationError("no interpretation for type variable " + name);
  return it->second;
}

TermPtr apply_declassifier(const Declassifier& f, const TermPtr& v, std::uint64_t fuel) {
  try {
    return evaluate(app(f.lambda(), v), fuel);
  } catch (const EvalError& e) {
    throw DeclassifierFailure("declassifier " + f.name + " failed on " + render(v) + ": " + e.what());
  }
}

std::vector<ValuePair> square(const std::vector<TermPtr>& vals, const EnumBudget& budget) {
  if (static_cast<double>(vals.size()) * static_cast<double>(vals.size()) > static_cast<double>(budget.max_pairs))
    throw BudgetExceeded("max_pairs");
  std::vector<ValuePair> out;
  for (const auto& a : vals)
    for (const auto& b : vals) out.push_back({a, b});
  return out;
}

std::vector<ValuePair> diagonal(const std::vector<TermPtr>& vals) {
  std::vector<ValuePair> out;
  for (const auto& a : vals) out.push_back({a, a});
  return out;
}

std::optional<Mismatch> rel_values(const TypePtr& t, const RelEnv& env, const TermPtr& v1, const TermPtr& v2,
                                   const EnumBudget& budget);
std::vector<ValuePair> rel_pairs(const TypePtr& t, const RelEnv& env, const EnumBudget& budget);

std::optional<Mismatch> rel_terms(const TypePtr& t, const RelEnv& env, const TermPtr& e1, const TermPtr& e2,
                                  const EnumBudget& budget) {
  return rel_values(t, env, evaluate(e1, budget.fuel), evaluate(e2, budget.fuel), budget);
}

std::optional<Mismatch> rel_var(const RelDescriptor& d, const RelEnv& env, const TermPtr& v1, const TermPtr& v2,
                                const EnumBudget& budget) {
  switch (d.kind) {
    case RelKind::Full:
      return std::nullopt;
    case RelKind::Empty:
      return Mismatch{d.clause(), "no values are related under " + d.describe()};
    case RelKind::Identity:
      if (alpha_equal_terms(v1, v2)) return std::nullopt;
      return Mismatch{d.clause(), render(v1) + " and " + render(v2) + " differ"};
    case RelKind::ViaFns:
    case RelKind::DecTuple:
      for (const auto& f : d.fns) {
        TermPtr r1 = apply_declassifier(f, v1, budget.fuel);
        TermPtr r2 = apply_declassifier(f, v2, budget.fuel);
        if (rel_values(f.result_type, env, r1, r2, budget))
          return Mismatch{d.clause(), f.name + " " + render(v1) + " = " + render(r1) + " but " + f.name + " " +
                                          render(v2) + " = " + render(r2)};
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Mismatch> rel_values(const TypePtr& t, const RelEnv& env, const TermPtr& v1, const TermPtr& v2,
                                   const EnumBudget& budget) {
  switch (t->kind) {
    case TypeKind::Int:
      if (v1->kind == TermKind::IntLit && v2->kind == TermKind::IntLit && v1->value == v2->value) return std::nullopt;
      return Mismatch{"Eq-Int", render(v1) + " != " + render(v2)};
    case TypeKind::Unit:
      if (v1->kind == TermKind::UnitLit && v2->kind == TermKind::UnitLit) return std::nullopt;
      return Mismatch{"Eq-Unit", "not both ()"};
    case TypeKind::Prod: {
      if (v1->kind != TermKind::Pair || v2->kind != TermKind::Pair) return Mismatch{"Eq-Pair", "not both pairs"};
      if (auto m = rel_values(t->left, env, v1->a, v2->a, budget)) return m;
      return rel_values(t->right, env, v1->b, v2->b, budget);
    }
    case TypeKind::Var:
      return rel_var(descriptor(env, t->name), env, v1, v2, budget);
    case TypeKind::Arrow: {
      for (const auto& [a1, a2] : rel_pairs(t->left, env, budget)) {
        if (auto m = rel_terms(t->right, env, app(v1, a1), app(v2, a2), budget)) {
          m->detail = "applied to " + render(a1) + " and " + render(a2) + ": " + m->detail;
          return m;
        }
      }
      return std::nullopt;
    }
    case TypeKind::Forall: {
      for (const auto& r : relation_bank()) {
        RelEnv inner = env;
        inner.ty.insert_or_assign(t->name, r);
        inner.left_subst[t->name] = r.carrier;
        inner.right_subst[t->name] = r.carrier;
        if (auto m = rel_terms(t->left, inner, ty_app(v1, r.carrier), ty_app(v2, r.carrier), budget)) {
          m->detail = "with " + t->name + " as " + r.describe() + ": " + m->detail;
          return m;
        }
      }
      return std::nullopt;
    }
  }
  return Mismatch{"Eq", "unknown type form"};
}

TermPtr wrapper(const TermPtr& payload) { return lam("_", unit_type(), payload); }

std::vector<ValuePair> rel_pairs(const TypePtr& t, const RelEnv& env, const EnumBudget& budget) {
  switch (t->kind) {
    case TypeKind::Int:
      return diagonal(carrier_values(t, budget));
    case TypeKind::Unit:
      return {{unit_lit(), unit_lit()}};
    case TypeKind::Var: {
      const RelDescriptor& d = descriptor(env, t->name);
      switch (d.kind) {
        case RelKind::Full:
          return square(carrier_values(d.carrier, budget), budget);
        case RelKind::Empty:
          return {};
        case RelKind::Identity:
          return diagonal(carrier_values(d.carrier, budget));
        default: {
          std::vector<ValuePair> out;
          for (const auto& [a, b] : square(carrier_values(d.carrier, budget), budget))
            if (!rel_var(d, env, a, b, budget)) out.push_back({a, b});
          return out;
        }
      }
    }
    case TypeKind::Prod: {
      auto ls = rel_pairs(t->left, env, budget);
      auto rs = rel_pairs(t->right, env, budget);
      if (static_cast<double>(ls.size()) * static_cast<double>(rs.size()) > static_cast<double>(budget.max_pairs))
        throw BudgetExceeded("max_pairs");
      std::vector<ValuePair> out;
      for (const auto& l : ls)
        for (const auto& r : rs) out.push_back({pair(l.first, r.first), pair(l.second, r.second)});
      return out;
    }
    case TypeKind::Arrow: {
      const TypePtr& dom = t->left;
      bool key_like = dom->kind == TypeKind::Unit ||
                      (dom->kind == TypeKind::Var && descriptor(env, dom->name).carrier->kind == TypeKind::Unit);
      if (!key_like) throw UnenumerableDomain(t);
      std::vector<ValuePair> payloads =
          rel_pairs(dom, env, budget).empty()
              ? square(carrier_values(apply_subst(env.left_subst, t->right), budget), budget)
              : rel_pairs(t->right, env, budget);
      std::vector<ValuePair> out;
      for (const auto& [a, b] : payloads) out.push_back({wrapper(a), wrapper(b)});
      return out;
    }
    case TypeKind::Forall:
      throw UnenumerableDomain(t);
  }
  throw UnenumerableDomain(t);
}

}  // namespace

std::optional<Mismatch> explain_values(const TypePtr& t, const RelEnv& env, const TermPtr& v1, const TermPtr& v2,
                                       const EnumBudget& budget) {
  return rel_values(t, env, v1, v2, budget);
}

std::optional<Mismatch> explain_terms(const TypePtr& t, const RelEnv& env, const TermPtr& e1, const TermPtr& e2,
                                      const EnumBudget& budget) {
  return rel_terms(t, env, e1, e2, budget);
}

bool related_values(const TypePtr& t, const RelEnv& env, const TermPtr& v1, const TermPtr& v2,
                    const EnumBudget& budget) {
  return !rel_values(t, env, v1, v2, budget);
}

bool related_terms(const TypePtr& t, const RelEnv& env, const TermPtr& e1, const TermPtr& e2,
                   const EnumBudget& budget) {
  return !rel_terms(t, env, e1, e2, budget);
}

std::vector<ValuePair> enumerate_related_pairs(const TypePtr& t, const RelEnv& env, const EnumBudget& budget) {
  return rel_pairs(t, env, budget);
}

// ---- substitution space ------------------------------------------------------

namespace {

struct InputSpace {
  std::string name;
  std::vector<TermPtr> values;             // ascending
  std::vector<std::pair<int, int>> pairs;  // indices into values, ascending
};

struct GroupSpace {
  std::string var;
  TypePtr type;
  std::vector<std::size_t> members;  // indices into Space::inputs
};

struct Space {
  std::vector<InputSpace> inputs;  // sorted by name
  std::vector<GroupSpace> groups;
  Substitution pinned;
  bool multilevel = false;
};

Space build_space(const ViewPair& v, const RelEnv& env, const EnumBudget& budget) {
  Space s;
  s.multilevel = v.multilevel;
  for (const auto& [name, pr] : env.terms) s.pinned[name] = pr.first;
  std::vector<std::string> names = v.inputs;
  std::sort(names.begin(), names.end());
  double total = 1;
  for (const auto& x : names) {
    InputSpace in;
    in.name = x;
    auto pairs = rel_pairs(v.public_type_of(x), env, budget);
    auto less = [](const TermPtr& a, const TermPtr& b) { return compare_values(a, b) < 0; };
    for (const auto& [a, b] : pairs) {
      in.values.push_back(a);
      in.values.push_back(b);
    }
    std::sort(in.values.begin(), in.values.end(), less);
    in.values.erase(std::unique(in.values.begin(), in.values.end(),
                                [](const TermPtr& a, const TermPtr& b) { return compare_values(a, b) == 0; }),
                    in.values.end());
    auto index = [&](const TermPtr& t) {
      return static_cast<int>(std::lower_bound(in.values.begin(), in.values.end(), t, less) - in.values.begin());
    };
    for (const auto& [a, b] : pairs) in.pairs.push_back({index(a), index(b)});
    std::sort(in.pairs.begin(), in.pairs.end());
    in.pairs.erase(std::unique(in.pairs.begin(), in.pairs.end()), in.pairs.end());
    total *= static_cast<double>(in.pairs.size());
    s.inputs.push_back(std::move(in));
  }
  if (total > static_cast<double>(budget.max_pairs)) throw BudgetExceeded("max_pairs");
  for (const auto& g : v.groups) {
    GroupSpace gs{g.var, v.public_type_of(g.var), {}};
    for (const auto& m : g.members)
      gs.members.push_back(static_cast<std::size_t>(std::find(names.begin(), names.end(), m) - names.begin()));
    s.groups.push_back(gs);
  }
  return s;
}

// The tuple value a group variable takes given its members' values.
TermPtr group_value(const Space& s, const GroupSpace& g, const std::vector<int>& idx) {
  std::vector<TermPtr> parts;
  for (auto m : g.members) {
    const TermPtr& val = s.inputs[m].values[idx[m]];
    parts.push_back(s.multilevel ? val->a : val);
  }
  TermPtr tuple = tuple_term(parts);
  return s.multilevel ? wrapper(tuple) : tuple;
}

Substitution one_side(const Space& s, const std::vector<int>& idx, bool with_pinned) {
  Substitution out;
  if (with_pinned) out = s.pinned;
  for (std::size_t i = 0; i < s.inputs.size(); ++i) out[s.inputs[i].name] = s.inputs[i].values[idx[i]];
  for (const auto& g : s.groups) out[g.var] = group_value(s, g, idx);
  return out;
}

// Odometer over the per-input pair lists; the first input is the most significant digit.
template <typename Visit>
void odometer(const Space& s, Visit&& visit) {
  std::size_t n = s.inputs.size();
  for (const auto& in : s.inputs)
    if (in.pairs.empty()) return;
  std::vector<std::size_t> digit(n, 0);
  std::vector<int> left(n), right(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) {
      left[i] = s.inputs[i].pairs[digit[i]].first;
      right[i] = s.inputs[i].pairs[digit[i]].second;
    }
    if (!visit(left, right)) return;
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++digit[i] < s.inputs[i].pairs.size()) break;
      digit[i] = 0;
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

bool groups_related(const Space& s, const RelEnv& env, const std::vector<int>& l, const std::vector<int>& r,
                    const EnumBudget& budget, std::map<std::pair<std::vector<int>, std::vector<int>>, bool>& cache) {
  for (std::size_t gi = 0; gi < s.groups.size(); ++gi) {
    const auto& g = s.groups[gi];
    std::vector<int> kl{static_cast<int>(gi)}, kr;
    for (auto m : g.members) {
      kl.push_back(l[m]);
      kr.push_back(r[m]);
    }
    auto key = std::make_pair(kl, kr);
    auto it = cache.find(key);
    bool ok;
    if (it != cache.end()) {
      ok = it->second;
    } else {
      ok = !rel_values(g.type, env, group_value(s, g, l), group_value(s, g, r), budget);
      cache.emplace(key, ok);
    }
    if (!ok) return false;
  }
  return true;
}

}  // namespace

std::uint64_t for_each_substitution_pair(const ViewPair& v, const RelEnv& env, const EnumBudget& budget,
                                         const std::function<bool(const SubstitutionPair&)>& visit) {
  Space s = build_space(v, env, budget);
  std::map<std::pair<std::vector<int>, std::vector<int>>, bool> cache;
  std::uint64_t count = 0;
  odometer(s, [&](const std::vector<int>& l, const std::vector<int>& r) {
    if (!groups_related(s, env, l, r, budget, cache)) return true;
    ++count;
    return visit(SubstitutionPair{one_side(s, l, true), one_side(s, r, true)});
  });
  return count;
}

std::vector<SubstitutionPair> enumerate_substitution_pairs(const ViewPair& v, const RelEnv& env,
                                                           const EnumBudget& budget) {
  std::vector<SubstitutionPair> out;
  for_each_substitution_pair(v, env, budget, [&](const SubstitutionPair& sp) {
    out.push_back(sp);
    return true;
  });
  return out;
}

// ---- semantic TRNI -----------------------------------------------------------

namespace {

bool mentions_forall(const TypePtr& t) {
  if (!t) return false;
  if (t->kind == TypeKind::Forall) return true;
  return mentions_forall(t->left) || mentions_forall(t->right);
}

struct Sweep {
  const Space& space;
  const RelEnv& env;
  const TermPtr& program;
  const TypePtr& at;
  const EnumBudget& budget;

  std::map<std::vector<int>, int> output_ids;
  std::vector<TermPtr> outputs;
  std::map<std::string, int> interned;
  std::map<std::pair<int, int>, std::optional<Mismatch>> verdicts;

  int output_of(const std::vector<int>& idx) {
    auto it = output_ids.find(idx);
    if (it != output_ids.end()) return it->second;
    TermPtr out = evaluate(substitute_terms(program, one_side(space, idx, true)), budget.fuel);
    auto [slot, fresh] = interned.emplace(render(out), static_cast<int>(outputs.size()));
    if (fresh) outputs.push_back(out);
    output_ids.emplace(idx, slot->second);
    return slot->second;
  }

  const std::optional<Mismatch>& relate(int a, int b) {
    auto it = verdicts.find({a, b});
    if (it != verdicts.end()) return it->second;
    return verdicts.emplace(std::make_pair(a, b), rel_values(at, env, outputs[a], outputs[b], budget)).first->second;
  }
};

// Returns false when a counterexample was recorded.
bool sweep(const ViewPair& v, const RelEnv& env, const TermPtr& program, const TypePtr& at, const EnumBudget& budget,
           const std::string& observer, Verdict& verdict) {
  Space s = build_space(v, env, budget);
  Sweep sw{s, env, program, at, budget, {}, {}, {}, {}};
  std::map<std::pair<std::vector<int>, std::vector<int>>, bool> group_cache;
  bool clean = true;
  odometer(s, [&](const std::vector<int>& l, const std::vector<int>& r) {
    if (!groups_related(s, env, l, r, budget, group_cache)) return true;
    ++verdict.pairs_tested;
    int a = sw.output_of(l);
    int b = sw.output_of(r);
    const auto& m = sw.relate(a, b);
    if (!m) return true;
    Counterexample ce;
    ce.gamma_left = one_side(s, l, false);
    ce.gamma_right = one_side(s, r, false);
    ce.out_left = sw.outputs[a];
    ce.out_right = sw.outputs[b];
    ce.at = at;
    ce.clause = m->clause;
    ce.explanation = m->detail;
    ce.observer = observer;
    verdict.kind = Verdict::Kind::Fail;
    verdict.counterexample = ce;
    clean = false;
    return false;
  });
  return clean;
}

Verdict unsupported(const std::string& reason, std::uint64_t tested) {
  Verdict v;
  v.kind = Verdict::Kind::Unsupported;
  v.reason = reason;
  v.pairs_tested = tested;
  return v;
}

}  // namespace

Verdict semantic_trni(const Policy& p, const TermPtr& e, const TypePtr& t, const EnumBudget& budget,
                      const std::optional<std::string>& observer) {
  ViewPair v = encode(p);
  TypeSubst delta = delta_of(v);
  if (!check_wf_type(v.public_delta, t))
    throw PreconditionError("well-formed type", "type " + render(t) + " is not well-formed in the public view");

  TermPtr program = e;
  if (!v.multilevel) {
    if (!free_type_vars(e).empty())
      throw PreconditionError("no type variables", "program mentions type variable " + *free_type_vars(e).begin());
  } else {
    program = apply_subst(delta, e);
  }
  TypePtr conf;
  try {
    conf = infer_type({}, v.confidential_context(), program);
  } catch (const TypeError& err) {
    throw PreconditionError("confidential typability",
                            std::string("program does not typecheck in the confidential view: ") + err.what());
  }
  TypePtr want = apply_subst(delta, t);
  if (!alpha_equal_types(conf, want))
    throw PreconditionError("result type", "program has confidential type " + render(conf) + ", expected " +
                                               render(want));

  Verdict verdict;
  if (mentions_forall(t))
    verdict.notes.push_back(
        "polymorphic components were checked only against the relations Id(int), Full(int), Empty(int), "
        "Full(unit)");
  try {
    if (const auto* sp = std::get_if<SimplePolicy>(&p)) {
      sweep(v, rho_pol(*sp, v), program, t, budget, "", verdict);
    } else {
      const auto& mp = std::get<MultiLevelPolicy>(p);
      std::vector<std::string> observers = observer ? std::vector<std::string>{*observer} : mp.lattice.levels;
      for (const auto& z : observers)
        if (!sweep(v, observer_env(mp, v, z), program, t, budget, z, verdict)) break;
    }
  } catch (const RelationError& err) {
    return unsupported(err.what(), verdict.pairs_tested);
  } catch (const EvalError& err) {
    return unsupported(std::string("evaluation failed: ") + err.what(), verdict.pairs_tested);
  }
  return verdict;
}

std::pair<TermPtr, TermPtr> replay(const Policy& p, const TermPtr& e, const Counterexample& ce, std::uint64_t fuel) {
  ViewPair v = encode(p);
  TermPtr program = v.multilevel ? apply_subst(delta_of(v), e) : e;
  auto run = [&](const Substitution& g) {
    Substitution full = v.pinned;
    for (const auto& [k, val] : g) full[k] = val;
    return evaluate(substitute_terms(program, full), fuel);
  };
  return {run(ce.gamma_left), run(ce.gamma_right)};
}

// ---- monad laws --------------------------------------------------------------

std::size_t LawReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const LawCheck& c) { return !c.ok; }));
}

namespace {

struct ExprGen {
  std::mt19937_64 rng;
  long lo, hi;

  long pick(long a, long b) { return std::uniform_int_distribution<long>(a, b)(rng); }
  TermPtr literal() { return int_lit(pick(lo, hi)); }

  // Integer expression over the variable x.
  TermPtr expr(int depth) {
    if (depth == 0 || pick(0, 2) == 0) return pick(0, 1) ? var("x") : literal();
    switch (pick(0, 4)) {
      case 0: return prim(PrimOp::Add, expr(depth - 1), expr(depth - 1));
      case 1: return prim(PrimOp::Sub, expr(depth - 1), expr(depth - 1));
      case 2: return prim(PrimOp::Mul, expr(depth - 1), expr(depth - 1));
      case 3: {
        long d = pick(1, std::max(2L, hi));
        return prim(PrimOp::Mod, expr(depth - 1), int_lit(pick(0, 1) ? d : -d));
      }
      default: return if_zero(expr(depth - 1), expr(depth - 1), expr(depth - 1));
    }
  }

  // fn x:int => fn _:unit => expr
  TermPtr kleisli() { return lam("x", int_type(), lam("_", unit_type(), expr(3))); }
  TermPtr wrapped() { return lam("_", unit_type(), substitute_term(expr(3), "x", literal())); }
};

}  // namespace

LawReport check_monad_laws(std::uint64_t seed, int trials, long lo, long hi) {
  MultiLevelPolicy single;
  single.lattice = validate_lattice({"L"}, {});
  auto impls = interface_implementations(single);
  TermPtr comp = ty_app(ty_app(impls.at("comp_L"), int_type()), int_type());
  TermPtr wrap = ty_app(impls.at("wrap_L"), int_type());
  auto bind = [&](TermPtr m, TermPtr k) { return app(app(comp, std::move(m)), std::move(k)); };
  auto run = [](const TermPtr& t) { return app(t, unit_lit()); };

  LawReport report;
  report.seed = seed;
  report.trials = trials;
  ExprGen gen{std::mt19937_64(seed), lo, hi};
  for (int i = 0; i < trials; ++i) {
    TermPtr n = gen.literal();
    TermPtr m = gen.wrapped();
    TermPtr f = gen.kleisli();
    TermPtr g = gen.kleisli();
    std::vector<std::pair<std::string, std::pair<TermPtr, TermPtr>>> laws{
        {"left-unit", {run(bind(app(wrap, n), f)), run(app(f, n))}},
        {"right-unit", {run(bind(m, wrap)), run(m)}},
        {"associativity",
         {run(bind(bind(m, f), g)), run(bind(m, lam("x", int_type(), bind(app(f, var("x")), g))))}},
    };
    for (const auto& [name, sides] : laws) {
      LawCheck c;
      c.law = name;
      c.trial = i;
      c.lhs = render(sides.first);
      c.rhs = render(sides.second);
      try {
        TermPtr a = evaluate(sides.first);
        TermPtr b = evaluate(sides.second);
        c.lhs_value = render(a);
        c.rhs_value = render(b);
        c.ok = alpha_equal_terms(a, b);
      } catch (const EvalError& err) {
        c.lhs_value = err.what();
        c.ok = false;
      }
      report.checks.push_back(std::move(c));
    }
  }
  return report;
}

}  // namespace trni
