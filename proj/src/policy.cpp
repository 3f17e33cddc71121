#include "trni/policy.hpp"

#include "trni/eval.hpp"
#include "trni/typecheck.hpp"
#include "trni/views.hpp"

#include <algorithm>

namespace trni {

PolicyError::PolicyError(std::string c, const std::string& message)
    : std::runtime_error(c + ": " + message), code(std::move(c)) {}

std::string handle_name(const std::string& input, const std::string& fn) { return input + "_" + fn; }

std::string join_tag(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "_";
    out += parts[i];
  }
  return out;
}

LevelLattice validate_lattice(const std::vector<std::string>& levels,
                              const std::vector<std::pair<std::string, std::string>>& edges) {
  LevelLattice lat;
  std::set<std::string> known;
  auto add_level = [&](const std::string& l) {
    if (known.insert(l).second) lat.levels.push_back(l);
  };
  for (const auto& l : levels) add_level(l);
  for (const auto& [lo, hi] : edges) {
    add_level(lo);
    add_level(hi);
  }
  lat.edges = edges;
  for (const auto& l : lat.levels) lat.closure.insert({l, l});
  for (const auto& e : edges) lat.closure.insert(e);
  // Warshall over the level list
  for (const auto& k : lat.levels)
    for (const auto& i : lat.levels)
      if (lat.closure.count({i, k}))
        for (const auto& j : lat.levels)
          if (lat.closure.count({k, j})) lat.closure.insert({i, j});
  for (const auto& [a, b] : lat.closure)
    if (a != b && lat.closure.count({b, a}))
      throw PolicyError("CyclicOrder", "levels " + a + " and " + b + " are ordered both ways");

  // bottom-up order: repeatedly take the first level whose strict predecessors are all placed
  std::vector<std::string> order;
  std::set<std::string> placed;
  while (order.size() < lat.levels.size()) {
    for (const auto& l : lat.levels) {
      if (placed.count(l)) continue;
      bool ready = std::all_of(lat.levels.begin(), lat.levels.end(), [&](const std::string& m) {
        return m == l || !lat.closure.count({m, l}) || placed.count(m);
      });
      if (ready) {
        order.push_back(l);
        placed.insert(l);
        break;
      }
    }
  }
  lat.levels = order;
  return lat;
}

bool leq(const LevelLattice& lat, const std::string& a, const std::string& b) {
  for (const auto& l : {a, b})
    if (std::find(lat.levels.begin(), lat.levels.end(), l) == lat.levels.end())
      throw PolicyError("UnknownLevel", "unknown level " + l);
  return lat.closure.count({a, b}) > 0;
}

namespace {

bool is_int_tuple(const TypePtr& t, std::size_t& arity) {
  if (t->kind == TypeKind::Int) {
    arity = 1;
    return true;
  }
  if (t->kind != TypeKind::Prod || t->left->kind != TypeKind::Int) return false;
  std::size_t rest = 0;
  if (!is_int_tuple(t->right, rest)) return false;
  arity = rest + 1;
  return true;
}

struct Collector {
  std::vector<Diagnostic> out;
  void add(const std::string& code, const std::string& msg, SourceLoc loc = {}) {
    out.push_back({code, msg, loc});
  }
};

void check_fns(const std::map<std::string, Declassifier>& fns, Collector& c) {
  for (const auto& [name, f] : fns) {
    std::set<std::string> free = free_term_vars(f.body);
    free.erase(f.param);
    std::set<std::string> tfree = free_type_vars(f.body);
    for (const auto& v : free_type_vars(f.param_type)) tfree.insert(v);
    if (!free.empty()) {
      c.add("OpenDeclassifier", "declassifier " + name + " mentions free variable " + *free.begin(), f.loc);
      continue;
    }
    if (!tfree.empty()) {
      c.add("OpenDeclassifier", "declassifier " + name + " mentions type variable " + *tfree.begin(), f.loc);
      continue;
    }
    if (!free_type_vars(f.result_type).empty()) {
      c.add("DeclassifierTypeMismatch", "result type of " + name + " is not closed", f.loc);
      continue;
    }
    try {
      TypePtr t = infer_type({}, {{f.param, f.param_type}}, f.body);
      if (!alpha_equal_types(t, f.result_type))
        c.add("DeclassifierTypeMismatch",
              "body of " + name + " has type " + render(t) + ", declared " + render(f.result_type), f.loc);
    } catch (const TypeError& e) {
      c.add("DeclassifierTypeMismatch", "body of " + name + " does not typecheck: " + e.what(), f.loc);
    }
  }
}

void check_fn_ref(const std::map<std::string, Declassifier>& fns, const std::string& fn, SourceLoc loc,
                  Collector& c, bool& ok) {
  if (!fns.count(fn)) {
    c.add("UnknownDeclassifier", "no declassifier named " + fn, loc);
    ok = false;
  }
}

void check_inputs(const std::vector<std::string>& inputs, const std::map<std::string, SourceLoc>& locs,
                  Collector& c) {
  std::set<std::string> seen;
  for (const auto& x : inputs) {
    if (!seen.insert(x).second) {
      auto it = locs.find(x);
      c.add("DuplicateInput", "input " + x + " declared twice", it == locs.end() ? SourceLoc{} : it->second);
    }
  }
}

SourceLoc loc_of(const std::map<std::string, SourceLoc>& locs, const std::string& x) {
  auto it = locs.find(x);
  return it == locs.end() ? SourceLoc{} : it->second;
}

void check_groups(const std::vector<GroupDecl>& groups, const std::vector<std::string>& inputs,
                  const std::set<std::string>& declassified, const std::map<std::string, Declassifier>& fns,
                  Collector& c) {
  std::set<std::string> input_set(inputs.begin(), inputs.end());
  std::set<std::string> grouped;
  for (const auto& g : groups) {
    if (g.members.empty()) c.add("GroupArity", "group " + g.var + " has no members", g.loc);
    if (input_set.count(g.var)) c.add("NameCollision", "group variable " + g.var + " is also an input", g.loc);
    for (const auto& m : g.members) {
      if (!input_set.count(m)) {
        c.add("UnknownInput", "group " + g.var + " mentions unknown input " + m, g.loc);
        continue;
      }
      if (declassified.count(m))
        c.add("GroupMemberOverlap", "input " + m + " is both grouped and individually declassifiable", g.loc);
      if (!grouped.insert(m).second)
        c.add("GroupMemberOverlap", "input " + m + " belongs to more than one group", g.loc);
    }
    bool ok = true;
    check_fn_ref(fns, g.via, g.loc, c, ok);
    if (!ok) continue;
    std::size_t arity = 0;
    const Declassifier& f = fns.at(g.via);
    if (!is_int_tuple(f.param_type, arity))
      c.add("BadParamType", "group declassifier " + g.via + " must take a tuple of integers", g.loc);
    else if (arity != g.members.size())
      c.add("GroupArity",
            "group " + g.var + " has " + std::to_string(g.members.size()) + " members but " + g.via + " takes " +
                std::to_string(arity),
            g.loc);
  }
}

}  // namespace

std::vector<Diagnostic> validate_policy(const SimplePolicy& p) {
  Collector c;
  check_inputs(p.inputs, p.input_locs, c);
  check_fns(p.fns, c);
  std::set<std::string> input_set(p.inputs.begin(), p.inputs.end());
  std::set<std::string> declassified;
  for (const auto& [x, fs] : p.declass) {
    SourceLoc loc = loc_of(p.input_locs, x);
    if (!input_set.count(x)) {
      c.add("UnknownInput", "declassification for unknown input " + x, loc);
      continue;
    }
    declassified.insert(x);
    std::set<std::string> seen;
    for (const auto& f : fs) {
      bool ok = true;
      check_fn_ref(p.fns, f, loc, c, ok);
      if (!seen.insert(f).second) c.add("UnknownDeclassifier", "declassifier " + f + " listed twice for " + x, loc);
      if (ok && p.fns.at(f).param_type->kind != TypeKind::Int)
        c.add("BadParamType", "declassifier " + f + " applied to input " + x + " must take int", loc);
    }
  }
  check_groups(p.groups, p.inputs, declassified, p.fns, c);

  std::set<std::string> targets_seen;
  for (const auto& w : p.equivs) {
    bool ok = true;
    for (const auto& f : {w.target, w.base, w.adapter}) check_fn_ref(p.fns, f, w.loc, c, ok);
    if (!ok) continue;
    const Declassifier& g = p.fns.at(w.target);
    const Declassifier& f = p.fns.at(w.base);
    const Declassifier& a = p.fns.at(w.adapter);
    if (g.param_type->kind != TypeKind::Int || f.param_type->kind != TypeKind::Int)
      c.add("EquivTypeMismatch", "equivalent functions must take int", w.loc);
    else if (!alpha_equal_types(g.result_type, f.result_type))
      c.add("EquivTypeMismatch",
            w.target + " returns " + render(g.result_type) + " but " + w.base + " returns " + render(f.result_type),
            w.loc);
    if (a.param_type->kind != TypeKind::Int || a.result_type->kind != TypeKind::Int)
      c.add("EquivTypeMismatch", "adapter " + w.adapter + " must have type int -> int", w.loc);
    auto sole = [&](const std::string& fn) {
      return std::any_of(p.declass.begin(), p.declass.end(), [&](const auto& kv) {
        return kv.second.size() == 1 && kv.second[0] == fn;
      });
    };
    if (!sole(w.base))
      c.add("EquivBaseUnused", "no input is declassified via " + w.base + " alone", w.loc);
    if (!sole(w.target))
      c.add("EquivBaseUnused", "no input is declassified via " + w.target + " alone", w.loc);
    if (w.target == w.base)
      c.add("EquivTypeMismatch", "an equivalence must relate two different functions", w.loc);
  }

  if (c.out.empty()) {
    try {
      encode_simple(p);
    } catch (const EncodeError& e) {
      c.add(e.code, e.what());
    }
  }
  return c.out;
}

std::vector<Diagnostic> validate_policy(const MultiLevelPolicy& p) {
  Collector c;
  check_inputs(p.inputs, p.input_locs, c);
  check_fns(p.fns, c);
  const auto& levels = p.lattice.levels;
  auto known_level = [&](const std::string& l) { return std::find(levels.begin(), levels.end(), l) != levels.end(); };
  for (const auto& w : p.equivs)
    c.add("UnsupportedInMultiLevel", "equivalence witnesses are only supported without a lattice", w.loc);
  std::set<std::string> input_set(p.inputs.begin(), p.inputs.end());
  for (const auto& x : p.inputs) {
    auto it = p.lvl.find(x);
    if (it == p.lvl.end())
      c.add("UnknownLevel", "input " + x + " has no level", loc_of(p.input_locs, x));
    else if (!known_level(it->second))
      c.add("UnknownLevel", "input " + x + " is at unknown level " + it->second, loc_of(p.input_locs, x));
  }
  std::set<std::string> declassified;
  for (const auto& [x, targets] : p.declass) {
    SourceLoc loc = loc_of(p.input_locs, x);
    if (!input_set.count(x)) {
      c.add("UnknownInput", "declassification for unknown input " + x, loc);
      continue;
    }
    declassified.insert(x);
    std::set<std::string> seen;
    for (const auto& t : targets) {
      bool ok = true;
      check_fn_ref(p.fns, t.fn, loc, c, ok);
      if (!seen.insert(t.fn).second) c.add("UnknownDeclassifier", "declassifier " + t.fn + " listed twice for " + x, loc);
      if (ok && p.fns.at(t.fn).param_type->kind != TypeKind::Int)
        c.add("BadParamType", "declassifier " + t.fn + " applied to input " + x + " must take int", loc);
      if (t.level.empty()) {
        c.add("UnknownLevel", "declassification of " + x + " via " + t.fn + " has no target level", loc);
        continue;
      }
      if (!known_level(t.level)) {
        c.add("UnknownLevel", "unknown target level " + t.level, loc);
        continue;
      }
      auto lv = p.lvl.find(x);
      if (lv != p.lvl.end() && known_level(lv->second) && leq(p.lattice, lv->second, t.level))
        c.add("DowngradeConstraint",
              "input " + x + " at " + lv->second + " already flows to " + t.level + "; declassifying it is not a downgrade",
              loc);
    }
  }
  check_groups(p.groups, p.inputs, declassified, p.fns, c);
  for (const auto& g : p.groups) {
    if (g.target.empty()) {
      c.add("UnknownLevel", "group " + g.var + " needs a target level", g.loc);
      continue;
    }
    if (!known_level(g.target)) {
      c.add("UnknownLevel", "unknown target level " + g.target, g.loc);
      continue;
    }
    bool all_below = !g.members.empty();
    for (const auto& m : g.members) {
      auto lv = p.lvl.find(m);
      if (lv == p.lvl.end() || !known_level(lv->second) || !leq(p.lattice, lv->second, g.target)) all_below = false;
    }
    if (all_below)
      c.add("DowngradeConstraint", "every member of " + g.var + " already flows to " + g.target, g.loc);
  }

  if (c.out.empty()) {
    try {
      encode_multilevel(p);
    } catch (const EncodeError& e) {
      c.add(e.code, e.what());
    }
  }
  return c.out;
}

std::vector<Diagnostic> validate_policy(const Policy& p) {
  return std::visit([](const auto& q) { return validate_policy(q); }, p);
}

std::vector<Diagnostic> cross_check_equivalences(const SimplePolicy& p, long lo, long hi) {
  std::vector<Diagnostic> out;
  for (const auto& w : p.equivs) {
    TermPtr g = p.fns.at(w.target).lambda();
    TermPtr f = p.fns.at(w.base).lambda();
    TermPtr a = p.fns.at(w.adapter).lambda();
    for (long n = lo; n <= hi; ++n) {
      TermPtr lhs = app(g, int_lit(n));
      TermPtr rhs = app(f, app(a, int_lit(n)));
      std::string problem;
      try {
        TermPtr v1 = evaluate(lhs);
        TermPtr v2 = evaluate(rhs);
        if (!alpha_equal_terms(v1, v2))
          problem = w.target + " " + std::to_string(n) + " = " + render(v1) + " but " + w.base + " (" + w.adapter +
                    " " + std::to_string(n) + ") = " + render(v2);
      } catch (const EvalError& e) {
        problem = std::string("evaluation failed at ") + std::to_string(n) + ": " + e.what();
      }
      if (!problem.empty()) {
        out.push_back({"EquivCounterexample", problem, w.loc});
        break;
      }
    }
  }
  return out;
}

}  // namespace trni
