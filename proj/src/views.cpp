#include "trni/views.hpp"

#include <set>

namespace trni {

EncodeError::EncodeError(std::string c, const std::string& message)
    : std::runtime_error(message), code(std::move(c)) {}

TermContext ViewPair::confidential_context() const {
  TermContext out;
  for (const auto& b : confidential) out[b.name] = b.type;
  return out;
}

TermContext ViewPair::public_context() const {
  TermContext out;
  for (const auto& b : public_gamma) out[b.name] = b.type;
  return out;
}

TypePtr ViewPair::public_type_of(const std::string& name) const {
  for (const auto& b : public_gamma)
    if (b.name == name) return b.type;
  return nullptr;
}

namespace {

struct Names {
  std::map<std::string, std::string> ty_meaning;
  std::set<std::string> terms;

  // First candidate that is unused or already means the same thing.
  std::string claim_type(const std::vector<std::string>& candidates, const std::string& meaning) {
    for (const auto& c : candidates) {
      auto it = ty_meaning.find(c);
      if (it == ty_meaning.end()) {
        ty_meaning[c] = meaning;
        return c;
      }
      if (it->second == meaning) return c;
    }
    throw EncodeError("NameCollision", "generated type variable " + candidates.front() +
                                           " is already used for " + ty_meaning[candidates.front()]);
  }

  void claim_term(const std::string& name) {
    if (!terms.insert(name).second)
      throw EncodeError("NameCollision", "generated name " + name + " clashes with another identifier");
  }
};

struct Builder {
  ViewPair v;
  Names names;

  void tyvar(const std::string& name, TyVarInfo info) {
    if (v.tyvars.emplace(name, std::move(info)).second) v.public_delta.push_back(name);
  }
  void bind(const std::string& name, TypePtr conf, TypePtr pub) {
    v.confidential.push_back({name, std::move(conf)});
    v.public_gamma.push_back({name, std::move(pub)});
  }
};

TypePtr int_tuple(std::size_t n) { return tuple_type(std::vector<TypePtr>(n, int_type())); }

TyVarInfo info_of(VarRole role, TypePtr carrier) {
  TyVarInfo i{};
  i.role = role;
  i.carrier = std::move(carrier);
  return i;
}

// fn x:unit->T => fn _:unit => body[param := x ()]
TermPtr dec_impl(const Declassifier& f) {
  TypePtr arg = arrow_type(unit_type(), f.param_type);
  TermPtr applied = substitute_term(f.body, f.param, app(var("x"), unit_lit()));
  return lam("x", arg, lam("_", unit_type(), applied));
}

TermPtr comp_impl() {
  TypePtr b1 = type_var("b1"), b2 = type_var("b2");
  return ty_lam("b1", ty_lam("b2",
      lam("x", arrow_type(unit_type(), b1),
          lam("f", arrow_type(b1, arrow_type(unit_type(), b2)),
              app(var("f"), app(var("x"), unit_lit()))))));
}

TermPtr wrap_impl() {
  return ty_lam("b", lam("x", type_var("b"), lam("_", unit_type(), var("x"))));
}

TermPtr convup_impl() {
  return ty_lam("b", lam("x", arrow_type(unit_type(), type_var("b")), var("x")));
}

TermPtr conv_impl() { return lam("x", arrow_type(unit_type(), int_type()), var("x")); }

}  // namespace

ViewPair encode_simple(const SimplePolicy& p) {
  Builder b;
  for (const auto& x : p.inputs) b.names.claim_term(x);

  std::map<std::string, std::vector<const EquivWitness*>> by_target;
  for (const auto& w : p.equivs) by_target[w.target].push_back(&w);
  std::set<std::string> grouped;
  for (const auto& g : p.groups) grouped.insert(g.members.begin(), g.members.end());

  for (const auto& x : p.inputs) {
    b.v.inputs.push_back(x);
    auto it = p.declass.find(x);
    if (it == p.declass.end() || grouped.count(x)) {
      std::string a = b.names.claim_type({"a_" + x}, "input " + x);
      b.tyvar(a, info_of(VarRole::Secret, int_type()));
      b.bind(x, int_type(), type_var(a));
      continue;
    }
    const auto& fns = it->second;
    if (fns.size() == 1 && by_target.count(fns[0])) {
      const Declassifier& g = p.fns.at(fns[0]);
      std::vector<std::string> parts{g.name};
      for (const auto* w : by_target[g.name]) {
        parts.push_back(w->base);
        parts.push_back(w->adapter);
      }
      std::string tag = join_tag(parts);
      std::string a = b.names.claim_type({"a_" + tag}, "equivalence " + tag);
      TyVarInfo info = info_of(VarRole::Equiv, int_type());
      info.fns = {g.name};
      b.tyvar(a, info);
      b.bind(x, int_type(), type_var(a));
      std::string hg = handle_name(x, g.name);
      b.names.claim_term(hg);
      b.bind(hg, arrow_type(int_type(), g.result_type), arrow_type(type_var(a), g.result_type));
      b.v.pinned[hg] = g.lambda();
      for (const auto* w : by_target[g.name]) {
        std::string base = b.names.claim_type({"a_" + w->base}, "declassifiers " + w->base);
        std::string ha = handle_name(x, w->adapter);
        b.names.claim_term(ha);
        b.bind(ha, arrow_type(int_type(), int_type()), arrow_type(type_var(a), type_var(base)));
        b.v.pinned[ha] = p.fns.at(w->adapter).lambda();
      }
      continue;
    }
    std::string tag = join_tag(fns);
    std::string a = b.names.claim_type({"a_" + tag}, "declassifiers " + tag);
    TyVarInfo info = info_of(VarRole::Declass, int_type());
    info.fns = fns;
    b.tyvar(a, info);
    b.bind(x, int_type(), type_var(a));
    for (const auto& fname : fns) {
      const Declassifier& f = p.fns.at(fname);
      std::string h = handle_name(x, fname);
      b.names.claim_term(h);
      b.bind(h, arrow_type(int_type(), f.result_type), arrow_type(type_var(a), f.result_type));
      b.v.pinned[h] = f.lambda();
    }
  }

  for (const auto& g : p.groups) {
    const Declassifier& f = p.fns.at(g.via);
    std::string a = b.names.claim_type({"a_" + g.via, "a_" + g.var + "_" + g.via}, "group " + g.var);
    TypePtr carrier = int_tuple(g.members.size());
    TyVarInfo info = info_of(VarRole::Group, carrier);
    info.fns = {g.via};
    info.group = true;
    b.tyvar(a, info);
    b.names.claim_term(g.var);
    b.bind(g.var, carrier, type_var(a));
    std::string h = handle_name(g.var, g.via);
    b.names.claim_term(h);
    b.bind(h, arrow_type(carrier, f.result_type), arrow_type(type_var(a), f.result_type));
    b.v.pinned[h] = f.lambda();
    b.v.groups.push_back({g.var, g.members, g.via});
  }
  return b.v;
}

ViewPair encode_multilevel(const MultiLevelPolicy& p) {
  Builder b;
  b.v.multilevel = true;

  const auto& levels = p.lattice.levels;
  std::map<std::string, TypePtr> level_var;
  for (const auto& l : levels) {
    std::string a = b.names.claim_type({"a_" + l}, "level " + l);
    TyVarInfo info = info_of(VarRole::Level, unit_type());
    info.level = l;
    b.tyvar(a, info);
    level_var[l] = type_var(a);
  }

  std::vector<Binding> pub;
  auto bind = [&](const std::string& name, TypePtr t, TermPtr impl = nullptr) {
    b.names.claim_term(name);
    pub.push_back({name, std::move(t)});
    if (impl) b.v.pinned[name] = std::move(impl);
  };

  for (const auto& l : levels) {
    TypePtr al = level_var[l];
    TypePtr b1 = type_var("b1"), b2 = type_var("b2"), bb = type_var("b");
    TypePtr comp_t = forall_type("b1", forall_type("b2",
        arrow_type(arrow_type(al, b1),
                   arrow_type(arrow_type(b1, arrow_type(al, b2)), arrow_type(al, b2)))));
    bind("comp_" + l, comp_t, comp_impl());
    bind("wrap_" + l, forall_type("b", arrow_type(bb, arrow_type(al, bb))), wrap_impl());
  }
  for (const auto& lo : levels)
    for (const auto& hi : levels)
      if (lo != hi && p.lattice.closure.count({lo, hi})) {
        TypePtr bb = type_var("b");
        bind("convup_" + lo + "_" + hi,
             forall_type("b", arrow_type(arrow_type(level_var[lo], bb), arrow_type(level_var[hi], bb))),
             convup_impl());
      }

  std::set<std::string> grouped;
  for (const auto& g : p.groups) grouped.insert(g.members.begin(), g.members.end());

  for (const auto& x : p.inputs) {
    b.v.inputs.push_back(x);
    const std::string& l = p.lvl.at(x);
    auto it = p.declass.find(x);
    if (it == p.declass.end() || grouped.count(x)) {
      bind(x, arrow_type(level_var[l], int_type()));
      continue;
    }
    std::vector<std::string> fns, targets;
    for (const auto& t : it->second) {
      fns.push_back(t.fn);
      targets.push_back(t.level);
    }
    std::string tag = join_tag(fns);
    std::string to = "_to_" + join_tag(targets);
    std::string sig = "input at " + l + " declassifiable via " + tag + to;
    std::string key = b.names.claim_type({"a_" + l + "_" + tag, "a_" + l + "_" + tag + to}, "key of " + sig);
    std::string val =
        b.names.claim_type({"a__" + tag, "a__" + l + "_" + tag, "a__" + l + "_" + tag + to}, "payload of " + sig);
    TyVarInfo ki = info_of(VarRole::Key, unit_type());
    ki.level = l;
    ki.fns = fns;
    ki.targets = targets;
    TyVarInfo vi = ki;
    vi.role = VarRole::Value;
    vi.carrier = int_type();
    b.tyvar(key, ki);
    b.tyvar(val, vi);
    TypePtr xt = arrow_type(type_var(key), type_var(val));
    bind(x, xt);
    for (std::size_t i = 0; i < fns.size(); ++i) {
      const Declassifier& f = p.fns.at(fns[i]);
      bind(handle_name(x, fns[i]), arrow_type(xt, arrow_type(level_var[targets[i]], f.result_type)), dec_impl(f));
    }
    bind("conv_" + x, arrow_type(xt, arrow_type(level_var[l], int_type())), conv_impl());
  }

  for (const auto& g : p.groups) {
    const Declassifier& f = p.fns.at(g.via);
    std::vector<std::string> member_levels;
    for (const auto& m : g.members) member_levels.push_back(p.lvl.at(m));
    std::string key = b.names.claim_type({"a_" + join_tag(member_levels) + "_" + g.via, "a_" + g.var + "_" + g.via},
                                         "key of group " + g.var);
    std::string val = b.names.claim_type({"a__" + g.via, "a__" + g.var + "_" + g.via}, "payload of group " + g.var);
    TypePtr carrier = int_tuple(g.members.size());
    TyVarInfo ki = info_of(VarRole::Key, unit_type());
    ki.fns = {g.via};
    ki.targets = {g.target};
    ki.member_levels = member_levels;
    ki.group = true;
    TyVarInfo vi = ki;
    vi.role = VarRole::Value;
    vi.carrier = carrier;
    b.tyvar(key, ki);
    b.tyvar(val, vi);
    TypePtr yt = arrow_type(type_var(key), type_var(val));
    bind(g.var, yt);
    bind(handle_name(g.var, g.via), arrow_type(yt, arrow_type(level_var[g.target], f.result_type)), dec_impl(f));
    b.v.groups.push_back({g.var, g.members, g.via});
  }

  TypeSubst delta = delta_of(b.v);
  for (const auto& bd : pub) {
    b.v.public_gamma.push_back(bd);
    b.v.confidential.push_back({bd.name, apply_subst(delta, bd.type)});
  }
  return b.v;
}

ViewPair encode(const Policy& p) {
  if (const auto* s = std::get_if<SimplePolicy>(&p)) return encode_simple(*s);
  return encode_multilevel(std::get<MultiLevelPolicy>(p));
}

TypeSubst delta_of(const ViewPair& v) {
  TypeSubst out;
  for (const auto& [name, info] : v.tyvars) out[name] = info.carrier;
  return out;
}

TypeSubst delta_pol(const SimplePolicy& p, const ViewPair& v) {
  TypeSubst out;
  for (const auto& a : v.public_delta) out[a] = int_type();
  for (const auto& g : p.groups) {
    TypePtr t = v.public_type_of(g.var);
    if (t && t->kind == TypeKind::Var) out[t->name] = int_tuple(g.members.size());
  }
  return out;
}
TypeSubst delta_pol(const MultiLevelPolicy&, const ViewPair& v) { return delta_of(v); }

std::map<std::string, TermPtr> interface_implementations(const MultiLevelPolicy& p) {
  return encode_multilevel(p).pinned;
}

}  // namespace trni
