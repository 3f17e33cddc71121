#include "trni/cli.hpp"

#include "trni/eval.hpp"
#include "trni/parser.hpp"
#include "trni/relation.hpp"
#include "trni/typecheck.hpp"
#include "trni/views.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace trni {

namespace {

using json = nlohmann::ordered_json;

struct FileDiagnostic {
  std::string file;
  Diagnostic diag;
};

struct Report {
  std::string command;
  std::string verdict;  // empty for commands without a verdict
  std::string type;
  std::vector<FileDiagnostic> diagnostics;
  json extra = json::object();
  std::vector<std::string> body;
  int exit = kExitOk;
  bool good = false;  // colour of the verdict line
};

// Thrown to abandon a command once its diagnostics are recorded.
struct Abort {
  int exit;
};

std::string read_file(const std::string& path, Report& r) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    r.diagnostics.push_back({path, {"IOError", "cannot read " + path, {}}});
    r.verdict = "Error(IOError)";
    throw Abort{kExitUsage};
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void fail_with(Report& r, const std::string& file, const std::string& code, const std::string& message,
               SourceLoc loc, int exit) {
  r.diagnostics.push_back({file, {code, message, loc}});
  r.verdict = "Error(" + code + ")";
  throw Abort{exit};
}

Policy load_policy(const std::string& path, Report& r) {
  std::string text = read_file(path, r);
  Policy p;
  try {
    p = parse_policy(text);
  } catch (const ParseError& e) {
    fail_with(r, path, "ParseError", e.what(), e.loc, kExitUsage);
  } catch (const PolicyError& e) {
    fail_with(r, path, e.code, e.what(), {}, kExitUsage);
  }
  auto diags = validate_policy(p);
  if (!diags.empty()) {
    for (const auto& d : diags) r.diagnostics.push_back({path, d});
    r.verdict = "Error(InvalidPolicy)";
    throw Abort{kExitUsage};
  }
  return p;
}

ParsedProgram load_program(const std::string& path, Report& r) {
  std::string text = read_file(path, r);
  try {
    return parse_program_with_locations(text);
  } catch (const ParseError& e) {
    fail_with(r, path, "ParseError", e.what(), e.loc, kExitUsage);
  }
}

TypePtr load_type(const std::string& text, Report& r) {
  try {
    return parse_type(text);
  } catch (const ParseError& e) {
    fail_with(r, "--at", "ParseError", e.what(), e.loc, kExitUsage);
  }
}

std::string policy_name(const std::string& path) { return std::filesystem::path(path).stem().string(); }

struct Domain {
  long lo = -4;
  long hi = 4;
};

Domain parse_domain(const std::string& text, Report& r) {
  try {
    auto dots = text.find("..");
    if (dots == std::string::npos) {
      long n = std::stol(text);
      if (n < 0) throw std::invalid_argument("negative");
      return {-n, n};
    }
    Domain d{std::stol(text.substr(0, dots)), std::stol(text.substr(dots + 2))};
    if (d.lo > d.hi) throw std::invalid_argument("empty");
    return d;
  } catch (const std::exception&) {
    fail_with(r, "--domain", "UsageError", "domain must be N (meaning -N..N) or LO..HI, got " + text, {}, kExitUsage);
  }
}

json bindings_json(const std::vector<Binding>& bs) {
  json out = json::array();
  for (const auto& b : bs) out.push_back({{"name", b.name}, {"type", render(b.type)}});
  return out;
}

json substitution_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [k, v] : s) out[k] = render(v);
  return out;
}

std::string substitution_text(const Substitution& s) {
  std::string out;
  for (const auto& [k, v] : s) out += (out.empty() ? "" : ", ") + k + " = " + render(v);
  return out.empty() ? "(no inputs)" : out;
}

// ---- commands ----------------------------------------------------------------

struct Args {
  std::string policy, program, at, domain = "4", observer;
  bool all_observers = false;
  std::optional<std::uint64_t> seed;
  int trials = 50;
  std::uint64_t fuel = kDefaultFuel;
  std::uint64_t max_pairs = 1'000'000;
};

void type_error_diag(Report& r, const std::string& file, const ParsedProgram& prog, const TypeError& e) {
  r.diagnostics.push_back({file, {"TypeError", e.what(), prog.locate(e.path)}});
}

void cmd_check(const Args& a, Report& r) {
  Policy p = load_policy(a.policy, r);
  ParsedProgram prog = load_program(a.program, r);
  ViewPair v = encode(p);
  std::string name = policy_name(a.policy);
  r.extra["policy"] = name;
  r.exit = kExitNotEstablished;
  r.verdict = "NotEstablished";

  TypePtr inferred;
  try {
    inferred = infer_type(v.public_delta, v.public_context(), prog.term);
  } catch (const TypeError& e) {
    type_error_diag(r, a.program, prog, e);
    r.body.push_back("the program does not typecheck in the public view: " + std::string(e.what()));
    return;
  }
  r.type = render(inferred);

  TypeSubst delta = delta_of(v);
  if (!v.multilevel && !free_type_vars(prog.term).empty()) {
    std::string tv = *free_type_vars(prog.term).begin();
    r.diagnostics.push_back({a.program, {"PreconditionError", "program mentions type variable " + tv, {}}});
    r.body.push_back("the program mentions type variable " + tv + "; only programs without type variables qualify");
    return;
  }
  TermPtr collapsed = v.multilevel ? apply_subst(delta, prog.term) : prog.term;
  try {
    TypePtr conf = infer_type({}, v.confidential_context(), collapsed);
    if (!alpha_equal_types(conf, apply_subst(delta, inferred))) {
      r.diagnostics.push_back(
          {a.program, {"PreconditionError", "confidential type " + render(conf) + " disagrees with the public type", {}}});
      r.body.push_back("the confidential and public views disagree on the program's type");
      return;
    }
  } catch (const TypeError& e) {
    type_error_diag(r, a.program, prog, e);
    r.body.push_back("the program does not typecheck in the confidential view: " + std::string(e.what()));
    return;
  }

  TypePtr claimed = inferred;
  if (!a.at.empty()) {
    claimed = load_type(a.at, r);
    if (!check_wf_type(v.public_delta, claimed))
      fail_with(r, "--at", "UsageError", "type " + a.at + " is not well-formed in the public view", {}, kExitUsage);
    if (!alpha_equal_types(claimed, inferred)) {
      r.body.push_back("the program has type " + render(inferred) + " in the public view, not " + render(claimed));
      return;
    }
  }
  r.verdict = "TRNI(" + name + ", " + render(claimed) + ")";
  r.exit = kExitOk;
  r.good = true;
}

void cmd_views(const Args& a, Report& r) {
  Policy p = load_policy(a.policy, r);
  ViewPair v = encode(p);
  r.extra["policy"] = policy_name(a.policy);
  json pinned = json::array();
  for (const auto& [k, t] : v.pinned) pinned.push_back({{"name", k}, {"term", render(t)}});
  json delta = json::array();
  for (const auto& [k, t] : delta_of(v)) delta.push_back({{"name", k}, {"type", render(t)}});
  r.extra["views"] = {{"confidential", bindings_json(v.confidential)},
                      {"publicTypes", v.public_delta},
                      {"public", bindings_json(v.public_gamma)},
                      {"delta", delta},
                      {"pinned", pinned}};
  r.body.push_back("confidential view");
  for (const auto& b : v.confidential) r.body.push_back("  " + b.name + " : " + render(b.type));
  std::string types;
  for (const auto& t : v.public_delta) types += (types.empty() ? "" : ", ") + t;
  r.body.push_back("public view");
  r.body.push_back("  types: " + (types.empty() ? std::string("(none)") : types));
  for (const auto& b : v.public_gamma) r.body.push_back("  " + b.name + " : " + render(b.type));
  r.body.push_back("collapse");
  for (const auto& [k, t] : delta_of(v)) r.body.push_back("  " + k + " := " + render(t));
  r.body.push_back("pinned");
  for (const auto& [k, t] : v.pinned) r.body.push_back("  " + k + " = " + render(t));
}

void cmd_oracle(const Args& a, Report& r) {
  Policy p = load_policy(a.policy, r);
  ParsedProgram prog = load_program(a.program, r);
  TypePtr at = load_type(a.at, r);
  Domain dom = parse_domain(a.domain, r);
  r.type = render(at);
  r.extra["policy"] = policy_name(a.policy);
  r.extra["domain"] = {dom.lo, dom.hi};
  if (a.seed) r.extra["seed"] = *a.seed;

  bool multilevel = std::holds_alternative<MultiLevelPolicy>(p);
  std::optional<std::string> observer;
  if (!a.observer.empty()) {
    if (!multilevel)
      fail_with(r, "--observer", "UsageError", "observers apply only to policies with a lattice", {}, kExitUsage);
    const auto& levels = std::get<MultiLevelPolicy>(p).lattice.levels;
    if (std::find(levels.begin(), levels.end(), a.observer) == levels.end())
      fail_with(r, "--observer", "UnknownLevel", "unknown level " + a.observer, {}, kExitUsage);
    observer = a.observer;
  }

  EnumBudget budget;
  budget.lo = dom.lo;
  budget.hi = dom.hi;
  budget.fuel = a.fuel;
  budget.max_pairs = a.max_pairs;
  Verdict verdict;
  try {
    verdict = semantic_trni(p, prog.term, at, budget, observer);
  } catch (const PreconditionError& e) {
    fail_with(r, a.program, "PreconditionError", e.clause + ": " + e.what(), {}, kExitUsage);
  }
  r.extra["pairsTested"] = verdict.pairs_tested;
  if (!verdict.notes.empty()) r.extra["notes"] = verdict.notes;
  for (const auto& n : verdict.notes) r.body.push_back("note: " + n);
  switch (verdict.kind) {
    case Verdict::Kind::Pass:
      r.verdict = "Pass(" + std::to_string(verdict.pairs_tested) + ")";
      r.good = true;
      r.exit = kExitOk;
      break;
    case Verdict::Kind::Unsupported:
      r.verdict = "Unsupported(" + verdict.reason + ")";
      r.diagnostics.push_back({a.program, {"Unsupported", verdict.reason, {}}});
      r.exit = kExitUnsupported;
      break;
    case Verdict::Kind::Fail: {
      const Counterexample& ce = *verdict.counterexample;
      r.verdict = "Fail(" + ce.clause + ")";
      r.exit = kExitNotEstablished;
      r.extra["counterexample"] = {
          {"at", render(ce.at)},
          {"clause", ce.clause},
          {"explanation", ce.explanation},
          {"observer", ce.observer.empty() ? json(nullptr) : json(ce.observer)},
          {"left", {{"inputs", substitution_json(ce.gamma_left)}, {"output", render(ce.out_left)}}},
          {"right", {{"inputs", substitution_json(ce.gamma_right)}, {"output", render(ce.out_right)}}}};
      if (!ce.observer.empty()) r.body.push_back("observer: " + ce.observer);
      r.body.push_back("left:  " + substitution_text(ce.gamma_left) + "  =>  " + render(ce.out_left));
      r.body.push_back("right: " + substitution_text(ce.gamma_right) + "  =>  " + render(ce.out_right));
      r.body.push_back("at " + render(ce.at) + ", " + ce.clause + ": " + ce.explanation);
      break;
    }
  }
  r.body.push_back("pairs tested: " + std::to_string(verdict.pairs_tested));
}

void cmd_laws(const Args& a, Report& r) {
  if (!a.policy.empty()) {
    load_policy(a.policy, r);
    r.extra["policy"] = policy_name(a.policy);
  }
  Domain dom = parse_domain(a.domain, r);
  std::uint64_t seed = a.seed.value_or(0);
  LawReport report = check_monad_laws(seed, a.trials, dom.lo, dom.hi);
  r.extra["seed"] = seed;
  json failures = json::array();
  for (const auto& c : report.checks) {
    if (c.ok) continue;
    failures.push_back({{"law", c.law},
                        {"trial", c.trial},
                        {"lhs", c.lhs},
                        {"rhs", c.rhs},
                        {"lhsValue", c.lhs_value},
                        {"rhsValue", c.rhs_value}});
    r.body.push_back(c.law + " #" + std::to_string(c.trial) + ": " + c.lhs + " gives " + c.lhs_value + " but " + c.rhs +
                     " gives " + c.rhs_value);
  }
  r.extra["laws"] = {{"trials", report.trials}, {"checks", report.checks.size()}, {"failures", failures}};
  std::size_t bad = report.failures();
  if (bad == 0) {
    r.verdict = "Pass(" + std::to_string(report.checks.size()) + ")";
    r.good = true;
    r.exit = kExitOk;
  } else {
    r.verdict = "Fail(" + std::to_string(bad) + " of " + std::to_string(report.checks.size()) + ")";
    r.exit = kExitNotEstablished;
  }
  r.body.push_back(std::to_string(report.trials) + " trials of left-unit, right-unit and associativity, seed " +
                   std::to_string(seed));
}

void cmd_eval(const Args& a, Report& r) {
  ParsedProgram prog = load_program(a.program, r);
  try {
    r.type = render(infer_type({}, {}, prog.term));
  } catch (const TypeError& e) {
    type_error_diag(r, a.program, prog, e);
  }
  try {
    TermPtr v = evaluate(prog.term, a.fuel);
    r.extra["value"] = render(v);
    r.body.push_back(render(v));
  } catch (const EvalError& e) {
    r.diagnostics.push_back({a.program, {"EvalError", e.what(), {}}});
    r.extra["value"] = nullptr;
    r.exit = kExitNotEstablished;
  }
}

// ---- output ------------------------------------------------------------------

void emit_json(const Report& r, std::ostream& out) {
  json j;
  j["command"] = r.command;
  j["verdict"] = r.verdict.empty() ? json(nullptr) : json(r.verdict);
  j["type"] = r.type.empty() ? json(nullptr) : json(r.type);
  json diags = json::array();
  for (const auto& d : r.diagnostics)
    diags.push_back({{"code", d.diag.code},
                     {"message", d.diag.message},
                     {"file", d.file},
                     {"line", d.diag.loc.line},
                     {"column", d.diag.loc.column}});
  j["diagnostics"] = diags;
  for (const auto& [k, v] : r.extra.items()) j[k] = v;
  out << j.dump(2) << "\n";
}

void emit_text(const Report& r, std::ostream& out, std::ostream& err, bool color) {
  if (!r.verdict.empty()) {
    if (color) out << (r.good ? "\x1b[32m" : "\x1b[31m");
    out << r.verdict;
    if (color) out << "\x1b[0m";
    out << "\n";
  }
  for (const auto& line : r.body) out << (r.verdict.empty() ? "" : "  ") << line << "\n";
  for (const auto& d : r.diagnostics) {
    err << d.file;
    if (d.diag.loc.line) err << ":" << d.diag.loc.line << ":" << d.diag.loc.column;
    err << ": " << d.diag.code << ": " << d.diag.message << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, bool color) {
  CLI::App app{"Checks declassification security of lambda-calculus programs", "trni"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  Args a;
  auto common = [&](CLI::App* sub) {
    sub->fallthrough();
    return sub;
  };
  auto* check = common(app.add_subcommand("check", "Typecheck a program in the public view"));
  check->add_option("--policy", a.policy, "Policy file")->required();
  check->add_option("--program", a.program, "Program file")->required();
  check->add_option("--at", a.at, "Expected result type");

  auto* views = common(app.add_subcommand("views", "Print the confidential and public views"));
  views->add_option("--policy", a.policy, "Policy file")->required();

  auto* oracle = common(app.add_subcommand("oracle", "Brute-force indistinguishability check"));
  oracle->add_option("--policy", a.policy, "Policy file")->required();
  oracle->add_option("--program", a.program, "Program file")->required();
  oracle->add_option("--at", a.at, "Result type")->required();
  oracle->add_option("--domain", a.domain, "N for -N..N, or LO..HI");
  auto* obs = oracle->add_option("--observer", a.observer, "Observer level");
  oracle->add_flag("--all-observers", a.all_observers, "Check every observer level")->excludes(obs);
  oracle->add_option("--seed", a.seed, "Recorded in the report; enumeration is deterministic");
  oracle->add_option("--fuel", a.fuel, "Evaluation step limit");
  oracle->add_option("--max-pairs", a.max_pairs, "Substitution pair limit");

  auto* laws = common(app.add_subcommand("laws", "Random checks of the monad laws"));
  laws->add_option("--policy", a.policy, "Policy file");
  laws->add_option("--trials", a.trials, "Instances per law")->check(CLI::PositiveNumber);
  laws->add_option("--seed", a.seed, "Random seed");
  laws->add_option("--domain", a.domain, "Range of literals: N or LO..HI");

  auto* eval = common(app.add_subcommand("eval", "Evaluate a closed program"));
  eval->add_option("--program", a.program, "Program file")->required();
  eval->add_option("--fuel", a.fuel, "Evaluation step limit");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    Report r;
    r.command = app.get_subcommands().empty() ? "" : app.get_subcommands().front()->get_name();
    r.verdict = "Error(UsageError)";
    r.diagnostics.push_back({"", {"UsageError", e.what(), {}}});
    if (format == "json")
      emit_json(r, out);
    else
      err << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  Report r;
  CLI::App* sub = app.get_subcommands().front();
  r.command = sub->get_name();
  try {
    if (sub == check) cmd_check(a, r);
    if (sub == views) cmd_views(a, r);
    if (sub == oracle) cmd_oracle(a, r);
    if (sub == laws) cmd_laws(a, r);
    if (sub == eval) cmd_eval(a, r);
  } catch (const Abort& ab) {
    r.exit = ab.exit;
    r.good = false;
  }
  if (format == "json")
    emit_json(r, out);
  else
    emit_text(r, out, err, color);
  return r.exit;
}

}  // namespace trni
