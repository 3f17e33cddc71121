// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "test_support.hpp"
#include "trni/cli.hpp"

#include <json.hpp>

#include <chrono>
#include <functional>
#include <iostream>

using namespace trni;
using namespace trni::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok;
  std::string detail;
};

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }
std::string pol(const std::string& n) { return corpus_path(n + ".pol"); }
std::string prog(const std::string& n) { return corpus_path(n + ".trni"); }

long fmod_ref(long a, long b) { return ((a % b) + b) % b; }
long fdiv_ref(long a, long b) {
  long q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

TermPtr wrapper(long n) { return lam("_", unit_type(), int_lit(n)); }

Outcome ac1() {
  auto t0 = Clock::now();
  CliRun a = cli({"check", "--policy", pol("P_OE"), "--program", prog("oe_declassified")});
  CliRun b = cli({"check", "--policy", pol("P_OE"), "--program", prog("oe_raw"), "--at", "int"});
  CliRun braw = cli({"--format", "json", "check", "--policy", pol("P_OE"), "--program", prog("oe_raw")});
  CliRun c = cli({"check", "--policy", pol("P_OE"), "--program", prog("oe_mod3")});
  double s = seconds_since(t0);
  bool ok = a.code == 0 && first_line(a.out) == "TRNI(P_OE, int)";
  ok = ok && b.code == 1 && braw.out.find("\"type\": \"a_f\"") != std::string::npos;
  ok = ok && c.code == 1 && c.err.find("TypeError") != std::string::npos && s < 1.0;
  return {ok, first_line(a.out) + "; x infers a_f; x mod 3 rejected with TypeError; " + std::to_string(s) + " s"};
}

Outcome ac2() {
  std::vector<std::string> args{"--format", "json", "oracle", "--policy", pol("P_OE"), "--program", prog("oe_mod3"),
                                "--at", "a_f", "--domain", "4"};
  CliRun r1 = cli(args), r2 = cli(args);
  auto j = nlohmann::json::parse(r1.out);
  if (!j.contains("counterexample")) return {false, "no counterexample reported"};
  auto ce = j["counterexample"];
  std::string l = ce["left"]["inputs"]["x"], r = ce["right"]["inputs"]["x"];
  std::string ol = ce["left"]["output"], orr = ce["right"]["output"];
  std::string clause = ce["clause"];
  bool deterministic = r1.out == r2.out;
  bool ok = r1.code == 1 && clause == "Eq-Var2" && l == "2" && r == "4" && ol == "2" && orr == "1" && deterministic;
  return {ok, "witness x=" + l + "/x=" + r + " -> " + ol + "/" + orr + ", clause " + clause +
                  (deterministic ? ", deterministic" : ", NOT deterministic") + " (expected 2/4 -> 2/1)"};
}

Outcome ac3() {
  auto t0 = Clock::now();
  CliRun r = cli({"oracle", "--policy", pol("P_OE"), "--program", prog("oe_declassified"), "--at", "int", "--domain",
                  "8"});
  double s = seconds_since(t0);
  long expected = 0;
  for (long i = -8; i <= 8; ++i)
    for (long k = -8; k <= 8; ++k) expected += fmod_ref(i, 2) == fmod_ref(k, 2);
  std::string want = "Pass(" + std::to_string(expected) + ")";
  bool ok = r.code == 0 && first_line(r.out) == want && expected == 145 && s < 1.0;
  return {ok, first_line(r.out) + ", expected " + want + ", " + std::to_string(s) + " s"};
}

Outcome ac4() {
  CliRun a = cli({"check", "--policy", pol("P_Ave"), "--program", prog("ave_declassified"), "--at", "int"});
  CliRun b = cli({"check", "--policy", pol("P_Ave"), "--program", prog("ave_laundered")});
  CliRun c = cli({"oracle", "--policy", pol("P_Ave"), "--program", prog("ave_declassified"), "--at", "int", "--domain",
                  "0..3"});
  long expected = 0;
  for (long w = 0; w <= 3; ++w)
    for (long x = 0; x <= 3; ++x)
      for (long y = 0; y <= 3; ++y)
        for (long z = 0; z <= 3; ++z) expected += fdiv_ref(w + x, 2) == fdiv_ref(y + z, 2);
  bool ok = a.code == 0 && first_line(a.out) == "TRNI(P_Ave, int)";
  ok = ok && b.code == 1 && b.err.find("TypeError") != std::string::npos;
  ok = ok && c.code == 0 && first_line(c.out) == "Pass(" + std::to_string(expected) + ")";
  return {ok, first_line(a.out) + "; laundering rejected; oracle " + first_line(c.out)};
}

Outcome ac5() {
  std::mt19937_64 rng(2024);
  int mismatches = 0, policies = 0;
  for (int i = 0; i < 20; ++i) {
    Policy p = parse_policy(random_policy_text(rng, i % 2 == 1));
    if (!validate_policy(p).empty()) return {false, "generator produced an invalid policy"};
    ViewPair v = encode(p);
    TypeSubst d = std::holds_alternative<SimplePolicy>(p) ? delta_pol(std::get<SimplePolicy>(p), v)
                                                          : delta_pol(std::get<MultiLevelPolicy>(p), v);
    ++policies;
    if (v.public_gamma.size() != v.confidential.size()) ++mismatches;
    for (std::size_t k = 0; k < v.public_gamma.size() && k < v.confidential.size(); ++k) {
      const auto& pb = v.public_gamma[k];
      bool found = false;
      for (const auto& cb : v.confidential)
        if (cb.name == pb.name) found = alpha_equal_types(cb.type, apply_subst(d, pb.type));
      mismatches += !found;
    }
  }
  return {mismatches == 0, std::to_string(policies) + " policies, " + std::to_string(mismatches) + " mismatches"};
}

Outcome ac6() {
  Policy p = corpus_policy("P_Monad");
  auto ml = std::get<MultiLevelPolicy>(p);
  ViewPair v = encode(p);
  TermPtr e = corpus_program("monad_e");
  TypePtr at = T("(a_H -> int) * (a_M -> int) * (a_L -> int)");
  bool typed = alpha_equal_types(infer_type(v.public_delta, v.public_context(), e), at);
  EnumBudget b;
  b.lo = -2;
  b.hi = 2;
  Verdict l = semantic_trni(p, e, at, b, std::string("L"));
  Verdict h = semantic_trni(p, e, at, b, std::string("H"));
  RelEnv el = observer_env(ml, "L"), em = observer_env(ml, "M"), eh = observer_env(ml, "H");
  // At L the H and M components carry no information; M sees hi through f; H needs equal payloads.
  bool vacuous = related_values(T("a_H -> int"), el, wrapper(0), wrapper(1)) &&
                 related_values(T("a_M -> int"), el, wrapper(0), wrapper(1));
  bool via_f = related_values(T("a_H_f -> a__f"), em, wrapper(0), wrapper(2)) &&
               !related_values(T("a_H_f -> a__f"), em, wrapper(0), wrapper(1));
  bool exact = true;
  for (const char* t : {"a_H -> int", "a_M -> int", "a_L -> int"})
    exact = exact && !related_values(T(t), eh, wrapper(0), wrapper(1)) && related_values(T(t), eh, wrapper(1), wrapper(1));
  bool ok = typed && l.kind == Verdict::Kind::Pass && h.kind == Verdict::Kind::Pass && vacuous && via_f && exact;
  return {ok, std::string(typed ? "typed at the triple" : "NOT typed") + "; L Pass(" + std::to_string(l.pairs_tested) +
                  "), H Pass(" + std::to_string(h.pairs_tested) + ")"};
}

Outcome ac7() {
  auto t0 = Clock::now();
  LawReport r = check_monad_laws(7, 50);
  double s = seconds_since(t0);
  bool ok = r.checks.size() == 150 && r.failures() == 0 && s < 5.0;
  return {ok, std::to_string(r.checks.size()) + " instances, " + std::to_string(r.failures()) + " failures, " +
                  std::to_string(s) + " s"};
}

Outcome ac8() {
  std::vector<TermPtr> ints, wrapped;
  for (long i = -4; i <= 4; ++i) {
    ints.push_back(int_lit(i));
    wrapped.push_back(wrapper(i));
  }
  auto pairs = [](const std::vector<TermPtr>& a) {
    std::vector<TermPtr> out;
    for (const auto& x : a)
      for (const auto& y : a) out.push_back(pair(x, y));
    return out;
  };
  long failures = 0, checked = 0;
  auto per = [&](const TypePtr& t, const RelEnv& env, const std::vector<TermPtr>& vals) {
    std::size_t n = vals.size();
    std::vector<std::vector<char>> rel(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rel[i][j] = related_values(t, env, vals[i], vals[j]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        ++checked;
        failures += rel[i][j] != rel[j][i];
        if (rel[i][j])
          for (std::size_t k = 0; k < n; ++k) failures += rel[j][k] && !rel[i][k];
      }
  };
  auto oe = std::get<SimplePolicy>(corpus_policy("P_OE"));
  RelEnv e_oe = rho_pol(oe, encode(oe));
  auto multi = std::get<SimplePolicy>(corpus_policy("P_Multi"));
  RelEnv e_multi = rho_pol(multi, encode(multi));
  per(T("a_f"), e_oe, ints);
  per(T("a_k"), e_multi, ints);
  per(T("a_f * a_f"), e_oe, pairs(ints));
  per(T("a_k * a_sign_parity"), e_multi, pairs(ints));
  auto ml = std::get<MultiLevelPolicy>(corpus_policy("P_Monad"));
  for (const auto& zeta : ml.lattice.levels) {
    RelEnv env = observer_env(ml, zeta);
    per(T("a__f"), env, ints);
    per(T("a_H_f -> a__f"), env, wrapped);
    per(T("a__f * a__f"), env, pairs(ints));
  }
  return {failures == 0, std::to_string(checked) + " pairs checked, " + std::to_string(failures) + " violations"};
}

Outcome ac9() {
  auto t0 = Clock::now();
  struct Target {
    std::string policy;
    std::vector<std::string> types;  // empty: derive from the context
  };
  std::vector<Target> targets{
      {"P_OE", {}},
      {"P_Ave", {}},
      {"P_Multi", {}},
      {"P_Monad", {"a_L -> int", "a_M -> int", "a_H -> int", "int", "(a_H -> int) * (a_L -> int)", "a_M -> a_M -> int"}},
  };
  int programs = 0, counterexamples = 0, unsupported = 0;
  std::string first_problem;
  for (const auto& tg : targets) {
    Policy p = corpus_policy(tg.policy);
    ViewPair v = encode(p);
    ProgramGen gen(1000 + programs, v.public_context(), v.multilevel);
    std::vector<TypePtr> types;
    for (const auto& t : tg.types) types.push_back(T(t));
    if (types.empty()) {
      types = gen.interesting_types();
      std::size_t base = types.size();
      for (std::size_t i = 0; i < base; ++i) types.push_back(prod_type(types[i], int_type()));
    }
    int made = 0;
    for (int attempt = 0; made < 60 && attempt < 2000; ++attempt) {
      TypePtr t = types[static_cast<std::size_t>(attempt) % types.size()];
      TermPtr e = gen.gen(t, 4);
      if (!e) continue;
      if (!alpha_equal_types(infer_type(v.public_delta, v.public_context(), e), t))
        return {false, "generator produced an ill-typed program: " + render(e)};
      ++made;
      Verdict verdict = semantic_trni(p, e, t, {});
      if (verdict.kind == Verdict::Kind::Fail) {
        ++counterexamples;
        if (first_problem.empty()) first_problem = tg.policy + ": " + render(e);
      } else if (verdict.kind == Verdict::Kind::Unsupported) {
        ++unsupported;
        if (first_problem.empty()) first_problem = tg.policy + ": " + verdict.reason;
      }
    }
    programs += made;
  }
  double s = seconds_since(t0);
  bool ok = programs >= 200 && counterexamples == 0 && unsupported == 0 && s < 60.0;
  std::string detail = std::to_string(programs) + " programs, " + std::to_string(counterexamples) +
                       " counterexamples, " + std::to_string(unsupported) + " unsupported, " + std::to_string(s) + " s";
  if (!first_problem.empty()) detail += "; first: " + first_problem;
  return {ok, detail};
}

Outcome ac10() {
  auto ml = std::get<MultiLevelPolicy>(corpus_policy("P_Monad"));
  bool at_l = related_values(T("a_M -> int"), observer_env(ml, "L"), wrapper(0), wrapper(1));
  bool at_h = related_values(T("a_M -> int"), observer_env(ml, "H"), wrapper(0), wrapper(1));
  return {at_l && !at_h, std::string("L relates: ") + (at_l ? "true" : "false") + ", H relates: " + (at_h ? "true" : "false")};
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1 P_OE golden triple", ac1},          {"AC2 oracle counterexample", ac2},
      {"AC3 oracle soundness sweep", ac3},      {"AC4 group policy", ac4},
      {"AC5 collapse invariant", ac5},          {"AC6 multi-level golden", ac6},
      {"AC7 monad laws", ac7},                  {"AC8 partial equivalences", ac8},
      {"AC9 free-theorem fuzz", ac9},           {"AC10 vacuity", ac10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
