#include "trni/parser.hpp"

#include <cctype>
#include <set>

namespace trni {

ParseError::ParseError(SourceLoc l, const std::string& message)
    : std::runtime_error(std::to_string(l.line) + ":" + std::to_string(l.column) + ": " + message), loc(l) {}

SourceLoc ParsedProgram::locate(const Path& path) const {
  Path p = path;
  while (true) {
    auto it = locations.find(p);
    if (it != locations.end()) return it->second;
    if (p.empty()) return {};
    p.pop_back();
  }
}

namespace {

enum class Tok { Int, Ident, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
  bool line_start = false;
};

const std::set<std::string>& reserved() {
  static const std::set<std::string> r{"fn", "tfn", "ifz", "then", "else", "fst", "snd", "mod", "forall", "int", "unit"};
  return r;
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  bool fresh_line = true;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
        fresh_line = true;
      } else {
        ++col;
      }
      ++i;
    }
  };
  static const std::vector<std::string> symbols{"=>", "->", "==", "()", "(", ")", ",", ":", "[", "]", ".",
                                                "+",  "-",  "*",  "/",  "{", "}", ";", "<", "@", "="};
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || (c == '/' && i + 1 < src.size() && src[i + 1] == '/')) {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    t.line_start = fresh_line;
    fresh_line = false;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else {
      bool matched = false;
      for (const auto& s : symbols) {
        if (src.compare(i, s.size(), s) == 0) {
          t.kind = Tok::Sym;
          t.text = s;
          advance(s.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError(t.loc, std::string("unexpected character '") + c + "'");
    }
    out.push_back(t);
  }
  Token end{Tok::End, "", {line, col}, true};
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::size_t begin, std::size_t end)
      : toks_(std::move(toks)), pos_(begin), end_(end) {
    end_tok_ = {Tok::End, "", {0, 0}, true};
    if (end_ > 0 && end_ <= toks_.size()) {
      const Token& last = toks_[end_ - 1];
      end_tok_.loc = last.kind == Tok::End ? last.loc : SourceLoc{last.loc.line, last.loc.column + static_cast<int>(last.text.size())};
    }
  }

  std::map<const Term*, SourceLoc> term_locs;

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return k < end_ ? toks_[k] : end_tok_;
  }
  bool at_end() const { return pos_ >= end_; }
  bool is_sym(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Sym && t.text == s;
  }
  bool is_word(const std::string& s, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Ident && t.text == s;
  }
  Token next() {
    Token t = peek();
    if (pos_ < end_) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    throw ParseError(t.loc, msg + (t.kind == Tok::End ? " at end of input" : " near '" + t.text + "'"));
  }
  void expect_sym(const std::string& s) {
    if (!is_sym(s)) fail("expected '" + s + "'");
    next();
  }
  void expect_word(const std::string& s) {
    if (!is_word(s)) fail("expected '" + s + "'");
    next();
  }
  std::string ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || reserved().count(t.text)) fail("expected an identifier");
    return next().text;
  }

  // ---- types ----
  TypePtr type() {
    if (is_word("forall")) {
      next();
      std::string a = ident();
      expect_sym(".");
      return forall_type(a, type());
    }
    TypePtr left = prod_type_level();
    if (is_sym("->")) {
      next();
      return arrow_type(left, type());
    }
    return left;
  }
  TypePtr prod_type_level() {
    TypePtr left = type_atom();
    if (is_sym("*")) {
      next();
      return prod_type(left, prod_type_level());
    }
    return left;
  }
  TypePtr type_atom() {
    if (is_word("int")) {
      next();
      return int_type();
    }
    if (is_word("unit")) {
      next();
      return unit_type();
    }
    if (is_sym("(")) {
      next();
      TypePtr t = type();
      expect_sym(")");
      return t;
    }
    if (peek().kind == Tok::Ident && !reserved().count(peek().text)) return type_var(next().text);
    fail("expected a type");
  }

  // ---- terms ----
  TermPtr mark(TermPtr t, SourceLoc loc) {
    term_locs.emplace(t.get(), loc);
    return t;
  }

  TermPtr term() {
    SourceLoc loc = peek().loc;
    if (is_word("fn")) {
      next();
      std::string x = ident();
      expect_sym(":");
      TypePtr t = type();
      expect_sym("=>");
      return mark(lam(x, t, term()), loc);
    }
    if (is_word("tfn")) {
      next();
      std::string a = ident();
      expect_sym("=>");
      return mark(ty_lam(a, term()), loc);
    }
    if (is_word("ifz")) {
      next();
      TermPtr c = term();
      expect_word("then");
      TermPtr t = term();
      expect_word("else");
      TermPtr f = term();
      return mark(if_zero(c, t, f), loc);
    }
    return binary(1);
  }

  bool binary_op(int level, PrimOp& op) const {
    static const std::map<std::string, std::pair<int, PrimOp>> table{
        {"==", {1, PrimOp::Eq}}, {"+", {2, PrimOp::Add}}, {"-", {2, PrimOp::Sub}},
        {"*", {3, PrimOp::Mul}}, {"/", {3, PrimOp::Div}}, {"mod", {3, PrimOp::Mod}}};
    const Token& t = peek();
    if (t.kind != Tok::Sym && !(t.kind == Tok::Ident && t.text == "mod")) return false;
    auto it = table.find(t.text);
    if (it == table.end() || it->second.first != level) return false;
    op = it->second.second;
    return true;
  }

  // Binary levels 1..3; a trailing binder form is allowed as the last operand.
  TermPtr operand(int level) {
    if (is_word("fn") || is_word("tfn") || is_word("ifz")) return term();
    return level < 3 ? binary(level + 1) : application();
  }

  TermPtr binary(int level) {
    SourceLoc loc = peek().loc;
    TermPtr left = level < 3 ? binary(level + 1) : application();
    PrimOp op;
    while (binary_op(level, op)) {
      next();
      left = mark(prim(op, left, operand(level)), loc);
    }
    return left;
  }

  bool starts_atom() const {
    const Token& t = peek();
    if (t.kind == Tok::Int) return true;
    if (t.kind == Tok::Ident) return !reserved().count(t.text);
    return t.kind == Tok::Sym && (t.text == "(" || t.text == "()");
  }

  TermPtr application() {
    SourceLoc loc = peek().loc;
    TermPtr head;
    if (is_word("fst") || is_word("snd")) {
      int idx = next().text == "fst" ? 1 : 2;
      head = mark(proj(idx, atom()), loc);
    } else {
      head = atom();
    }
    while (true) {
      if (is_sym("[")) {
        next();
        TypePtr t = type();
        expect_sym("]");
        head = mark(ty_app(head, t), loc);
      } else if (starts_atom()) {
        head = mark(app(head, atom()), loc);
      } else {
        return head;
      }
    }
  }

  TermPtr atom() {
    SourceLoc loc = peek().loc;
    const Token& t = peek();
    if (t.kind == Tok::Int) return mark(int_lit(BigInt(next().text)), loc);
    if (is_sym("-") && peek(1).kind == Tok::Int) {
      next();
      return mark(int_lit(-BigInt(next().text)), loc);
    }
    if (is_sym("()")) {
      next();
      return mark(unit_lit(), loc);
    }
    if (t.kind == Tok::Ident && !reserved().count(t.text)) return mark(var(next().text), loc);
    if (is_sym("(") && is_sym(")", 1)) {
      next();
      next();
      return mark(unit_lit(), loc);
    }
    if (is_sym("(")) {
      next();
      std::vector<TermPtr> parts{term()};
      while (is_sym(",")) {
        next();
        parts.push_back(term());
      }
      expect_sym(")");
      if (parts.size() == 1) return parts[0];
      return mark(tuple_term(parts), loc);
    }
    fail("expected a term");
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_;
  std::size_t end_;
  Token end_tok_;
};

void collect_paths(const TermPtr& t, Path& path, const std::map<const Term*, SourceLoc>& locs,
                   std::map<Path, SourceLoc>& out) {
  auto it = locs.find(t.get());
  if (it != locs.end()) out.emplace(path, it->second);
  auto kids = children(*t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(static_cast<int>(i));
    collect_paths(kids[i], path, locs, out);
    path.pop_back();
  }
}

}  // namespace

ParsedProgram parse_program_with_locations(const std::string& text) {
  auto toks = lex(text);
  std::size_t n = toks.size() - 1;
  Parser p(toks, 0, n);
  TermPtr t = p.term();
  if (!p.at_end()) p.fail("unexpected trailing input");
  ParsedProgram out;
  out.term = t;
  Path path;
  collect_paths(t, path, p.term_locs, out.locations);
  return out;
}

TermPtr parse_program(const std::string& text) { return parse_program_with_locations(text).term; }

TypePtr parse_type(const std::string& text) {
  auto toks = lex(text);
  Parser p(toks, 0, toks.size() - 1);
  TypePtr t = p.type();
  if (!p.at_end()) p.fail("unexpected trailing input");
  return t;
}

// ---- policies ------------------------------------------------------------------

namespace {

bool starts_statement(const std::vector<Token>& toks, std::size_t i) {
  const Token& t = toks[i];
  if (!t.line_start || t.kind != Tok::Ident) return false;
  if (t.text == "lattice" || t.text == "input" || t.text == "group" || t.text == "equiv") return true;
  return t.text == "fn" && i + 2 < toks.size() && toks[i + 1].kind == Tok::Ident && toks[i + 2].kind == Tok::Sym &&
         toks[i + 2].text == "(";
}

struct PolicyDraft {
  bool has_lattice = false;
  std::vector<std::string> levels;
  std::vector<std::pair<std::string, std::string>> edges;
  SourceLoc lattice_loc;
  std::vector<std::string> inputs;
  std::map<std::string, SourceLoc> input_locs;
  std::map<std::string, std::string> lvl;
  std::map<std::string, std::vector<DeclassTarget>> declass;
  std::vector<GroupDecl> groups;
  std::vector<EquivWitness> equivs;
  std::map<std::string, Declassifier> fns;
};

void parse_lattice(Parser& p, PolicyDraft& d) {
  d.has_lattice = true;
  p.expect_sym("{");
  while (!p.is_sym("}")) {
    if (p.is_sym(";") || p.is_sym(",")) {
      p.next();
      continue;
    }
    std::string lo = p.ident();
    d.levels.push_back(lo);
    while (p.is_sym("<")) {
      p.next();
      std::string hi = p.ident();
      d.levels.push_back(hi);
      d.edges.push_back({lo, hi});
      lo = hi;
    }
    if (!p.is_sym(";") && !p.is_sym(",") && !p.is_sym("}")) p.fail("expected ';' or '}' in lattice");
  }
  p.next();
}

// declass F [to L] {, F [to L]} ; an item without its own level takes the next explicit one
std::vector<DeclassTarget> parse_declass_list(Parser& p) {
  std::vector<DeclassTarget> items;
  while (true) {
    DeclassTarget t{p.ident(), ""};
    if (p.is_word("to")) {
      p.next();
      t.level = p.ident();
      for (auto it = items.rbegin(); it != items.rend() && it->level.empty(); ++it) it->level = t.level;
    }
    items.push_back(t);
    if (!p.is_sym(",")) break;
    p.next();
  }
  return items;
}

void parse_input(Parser& p, PolicyDraft& d, SourceLoc loc) {
  std::string x = p.ident();
  p.expect_sym(":");
  p.expect_word("int");
  d.inputs.push_back(x);
  d.input_locs.emplace(x, loc);
  if (p.is_sym("@")) {
    p.next();
    d.lvl[x] = p.ident();
  }
  if (p.is_word("declass")) {
    p.next();
    auto& list = d.declass[x];
    auto items = parse_declass_list(p);
    list.insert(list.end(), items.begin(), items.end());
  }
}

void parse_group(Parser& p, PolicyDraft& d, SourceLoc loc) {
  GroupDecl g;
  g.loc = loc;
  g.var = p.ident();
  p.expect_sym("=");
  p.expect_sym("(");
  g.members.push_back(p.ident());
  while (p.is_sym(",")) {
    p.next();
    g.members.push_back(p.ident());
  }
  p.expect_sym(")");
  p.expect_word("declass");
  g.via = p.ident();
  if (p.is_word("to")) {
    p.next();
    g.target = p.ident();
  }
  d.groups.push_back(g);
}

void parse_equiv(Parser& p, PolicyDraft& d, SourceLoc loc) {
  EquivWitness w;
  w.loc = loc;
  w.target = p.ident();
  p.expect_sym("=");
  w.base = p.ident();
  p.expect_word("compose");
  w.adapter = p.ident();
  d.equivs.push_back(w);
}

void parse_fn(Parser& p, PolicyDraft& d, SourceLoc loc) {
  Declassifier f;
  f.loc = loc;
  f.name = p.ident();
  p.expect_sym("(");
  f.param = p.ident();
  p.expect_sym(":");
  f.param_type = p.type();
  p.expect_sym(")");
  p.expect_sym("->");
  f.result_type = p.type();
  p.expect_sym("=");
  f.body = p.term();
  if (d.fns.count(f.name)) throw ParseError(loc, "declassifier " + f.name + " defined twice");
  d.fns.emplace(f.name, f);
}

}  // namespace

Policy parse_policy(const std::string& text) {
  auto toks = lex(text);
  std::size_t n = toks.size() - 1;
  PolicyDraft d;
  std::size_t i = 0;
  while (i < n) {
    if (!starts_statement(toks, i))
      throw ParseError(toks[i].loc, "expected a statement (lattice, input, group, equiv, fn) near '" + toks[i].text + "'");
    std::size_t j = i + 1;
    while (j < n && !starts_statement(toks, j)) ++j;
    Parser p(toks, i, j);
    Token kw = p.next();
    if (kw.text == "lattice") {
      if (d.has_lattice) throw ParseError(kw.loc, "only one lattice block is allowed");
      d.lattice_loc = kw.loc;
      parse_lattice(p, d);
    } else if (kw.text == "input") {
      parse_input(p, d, kw.loc);
    } else if (kw.text == "group") {
      parse_group(p, d, kw.loc);
    } else if (kw.text == "equiv") {
      parse_equiv(p, d, kw.loc);
    } else {
      parse_fn(p, d, kw.loc);
    }
    if (!p.at_end()) p.fail("unexpected trailing input in statement");
    i = j;
  }

  if (!d.has_lattice) {
    for (const auto& [x, l] : d.lvl)
      throw ParseError(d.input_locs[x], "input " + x + " has level " + l + " but the policy declares no lattice");
    SimplePolicy s;
    s.inputs = d.inputs;
    s.input_locs = d.input_locs;
    for (const auto& [x, items] : d.declass) {
      for (const auto& t : items) {
        if (!t.level.empty())
          throw ParseError(d.input_locs[x], "declassification target " + t.level + " needs a lattice");
        s.declass[x].push_back(t.fn);
      }
    }
    for (const auto& g : d.groups)
      if (!g.target.empty()) throw ParseError(g.loc, "group target " + g.target + " needs a lattice");
    s.groups = d.groups;
    s.equivs = d.equivs;
    s.fns = d.fns;
    return s;
  }
  MultiLevelPolicy m;
  m.lattice = validate_lattice(d.levels, d.edges);
  m.inputs = d.inputs;
  m.input_locs = d.input_locs;
  m.lvl = d.lvl;
  m.declass = d.declass;
  m.groups = d.groups;
  m.equivs = d.equivs;
  m.fns = d.fns;
  return m;
}

}  // namespace trni
