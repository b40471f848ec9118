#include "etamp/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace etamp {

const PredicateDef* DomainDef::find_predicate(const std::string& pname) const {
  for (const auto& p : predicates)
    if (p.name == pname) return &p;
  return nullptr;
}

bool DomainDef::type_declared(const std::string& t) const {
  if (t == "object") return true;
  for (const auto& ty : types)
    if (ty.name == t) return true;
  return false;
}

bool DomainDef::is_subtype(const std::string& t, const std::string& ancestor) const {
  if (ancestor == "object") return true;
  std::string cur = t;
  for (size_t hop = 0; hop <= types.size(); ++hop) {
    if (cur == ancestor) return true;
    if (cur == "object") return false;
    bool found = false;
    for (const auto& ty : types)
      if (ty.name == cur) {
        cur = ty.type;
        found = true;
        break;
      }
    if (!found) return false;
  }
  return false;
}

namespace {

struct Token {
  enum Kind { LParen, RParen, Symbol, End } kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::string filename)
      : m_text(text), m_file(std::move(filename)) {}

  Token next() {
    skip_ws();
    int line = m_line, col = m_col;
    if (m_pos >= m_text.size()) return {Token::End, "", line, col};
    char c = m_text[m_pos];
    if (c == '(') {
      advance();
      return {Token::LParen, "(", line, col};
    }
    if (c == ')') {
      advance();
      return {Token::RParen, ")", line, col};
    }
    // identifiers are case-insensitive: normalize at the source
    std::string sym;
    while (m_pos < m_text.size()) {
      char d = m_text[m_pos];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d))) break;
      sym.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(d))));
      advance();
    }
    return {Token::Symbol, sym, line, col};
  }

  const std::string& file() const { return m_file; }

 private:
  void advance() {
    if (m_text[m_pos] == '\n') {
      ++m_line;
      m_col = 1;
    } else {
      ++m_col;
    }
    ++m_pos;
  }

  void skip_ws() {
    while (m_pos < m_text.size()) {
      char c = m_text[m_pos];
      if (c == ';') {
        while (m_pos < m_text.size() && m_text[m_pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view m_text;
  std::string m_file;
  size_t m_pos = 0;
  int m_line = 1;
  int m_col = 1;
};

// S-expression tree; leaves keep source positions for diagnostics.
struct Sexp {
  bool is_list = false;
  std::string atom;
  std::vector<Sexp> items;
  int line = 0;
  int col = 0;
};

class Parser {
 public:
  Parser(std::string_view text, std::string filename) : m_lex(text, std::move(filename)) {
    m_tok = m_lex.next();
  }

  Sexp parse_one() {
    Sexp e = parse_expr();
    if (m_tok.kind != Token::End)
      fail(DiagKind::SyntaxError, m_tok, "trailing content after top-level form");
    return e;
  }

  [[noreturn]] void fail(DiagKind kind, const Token& at, const std::string& msg) const {
    throw ParseError(kind, m_lex.file(), at.line, at.col, msg);
  }

  const std::string& file() const { return m_lex.file(); }

 private:
  Sexp parse_expr() {
    if (m_tok.kind == Token::End) fail(DiagKind::SyntaxError, m_tok, "unexpected end of input");
    if (m_tok.kind == Token::RParen) fail(DiagKind::SyntaxError, m_tok, "unexpected ')'");
    if (m_tok.kind == Token::Symbol) {
      Sexp e{false, m_tok.text, {}, m_tok.line, m_tok.col};
      m_tok = m_lex.next();
      return e;
    }
    Sexp e{true, "", {}, m_tok.line, m_tok.col};
    m_tok = m_lex.next();
    while (m_tok.kind != Token::RParen) {
      if (m_tok.kind == Token::End)
        fail(DiagKind::SyntaxError, m_tok, "unclosed '(' — expected ')'");
      e.items.push_back(parse_expr());
    }
    m_tok = m_lex.next();
    return e;
  }

  Lexer m_lex;
  Token m_tok;
};

[[noreturn]] void fail_at(const std::string& file, const Sexp& at, DiagKind kind,
                          const std::string& msg) {
  throw ParseError(kind, file, at.line, at.col, msg);
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

bool is_keyword(const Sexp& e, const char* kw) { return !e.is_list && lower(e.atom) == kw; }

const Sexp& expect_list(const std::string& file, const Sexp& e, const std::string& what) {
  if (!e.is_list) fail_at(file, e, DiagKind::SyntaxError, "expected " + what + ", got atom '" + e.atom + "'");
  return e;
}

std::string expect_atom(const std::string& file, const Sexp& e, const std::string& what) {
  if (e.is_list) fail_at(file, e, DiagKind::SyntaxError, "expected " + what + ", got a list");
  return e.atom;
}

// Parses `name... - type name... - type ...`; names without a trailing type
// get "object".
std::vector<TypedName> parse_typed_list(const std::string& file, const Sexp& list, size_t from,
                                        bool vars_required) {
  std::vector<TypedName> out;
  std::vector<size_t> pending;
  for (size_t i = from; i < list.items.size(); ++i) {
    const Sexp& it = list.items[i];
    std::string sym = expect_atom(file, it, vars_required ? "a ?variable" : "a name");
    if (sym == "-") {
      if (pending.empty())
        fail_at(file, it, DiagKind::SyntaxError, "'-' without preceding names");
      if (i + 1 >= list.items.size())
        fail_at(file, it, DiagKind::SyntaxError, "missing type after '-'");
      std::string ty = expect_atom(file, list.items[i + 1], "a type name");
      ++i;
      for (size_t k : pending) out[k].type = ty;
      pending.clear();
      continue;
    }
    if (vars_required && sym[0] != '?')
      fail_at(file, it, DiagKind::SyntaxError, "expected a ?variable, got '" + sym + "'");
    if (!vars_required && sym[0] == '?')
      fail_at(file, it, DiagKind::SyntaxError, "unexpected variable '" + sym + "'");
    pending.push_back(out.size());
    out.push_back({sym, "object"});
  }
  return out;
}

Literal parse_atom_expr(const std::string& file, const Sexp& e) {
  const Sexp& l = expect_list(file, e, "an atom '(pred args...)'");
  if (l.items.empty()) fail_at(file, l, DiagKind::SyntaxError, "empty atom");
  Literal lit;
  lit.pred = expect_atom(file, l.items[0], "a predicate name");
  for (size_t i = 1; i < l.items.size(); ++i)
    lit.args.push_back(expect_atom(file, l.items[i], "an argument"));
  return lit;
}

// Conjunction of literals: `(and lit...)`, a single literal, or `(and)`.
void parse_literal_conjunction(const std::string& file, const Sexp& e, bool allow_negation,
                               std::vector<Literal>& pos, std::vector<Literal>& neg) {
  const Sexp& l = expect_list(file, e, "a condition");
  if (!l.items.empty() && is_keyword(l.items[0], "and")) {
    for (size_t i = 1; i < l.items.size(); ++i)
      parse_literal_conjunction(file, l.items[i], allow_negation, pos, neg);
    return;
  }
  if (!l.items.empty() && is_keyword(l.items[0], "not")) {
    if (!allow_negation)
      fail_at(file, l, DiagKind::SyntaxError, "negation not allowed here");
    if (l.items.size() != 2)
      fail_at(file, l, DiagKind::SyntaxError, "'not' takes exactly one atom");
    neg.push_back(parse_atom_expr(file, l.items[1]));
    return;
  }
  if (!l.items.empty() && is_keyword(l.items[0], "or"))
    fail_at(file, l, DiagKind::SyntaxError, "disjunction is not supported");
  pos.push_back(parse_atom_expr(file, l));
}

struct ScopeChecker {
  const std::string& file;
  const DomainDef& domain;
  // name -> type for everything nameable in the current scope
  std::vector<TypedName> scope;

  const std::string* lookup(const std::string& name) const {
    for (const auto& tn : scope)
      if (tn.name == name) return &tn.type;
    return nullptr;
  }

  void check_literal(const Literal& lit, const Sexp& at) const {
    const PredicateDef* pd = domain.find_predicate(lit.pred);
    if (!pd)
      fail_at(file, at, DiagKind::UndeclaredSymbol, "undeclared predicate '" + lit.pred + "'");
    if (pd->params.size() != lit.args.size())
      fail_at(file, at, DiagKind::TypeMismatch,
              "predicate '" + lit.pred + "' expects " + std::to_string(pd->params.size()) +
                  " arguments, got " + std::to_string(lit.args.size()));
    for (size_t i = 0; i < lit.args.size(); ++i) {
      const std::string* ty = lookup(lit.args[i]);
      if (!ty)
        fail_at(file, at, DiagKind::UndeclaredSymbol,
                "undeclared argument '" + lit.args[i] + "' of '" + lit.pred + "'");
      if (!domain.is_subtype(*ty, pd->params[i].type))
        fail_at(file, at, DiagKind::TypeMismatch,
                "argument '" + lit.args[i] + "' has type '" + *ty + "', predicate '" + lit.pred +
                    "' expects '" + pd->params[i].type + "'");
    }
  }
};

void check_declared_types(const std::string& file, const DomainDef& d,
                          const std::vector<TypedName>& names, const Sexp& at) {
  for (const auto& tn : names)
    if (!d.type_declared(tn.type))
      fail_at(file, at, DiagKind::TypeMismatch,
              "'" + tn.name + "' declared with undeclared type '" + tn.type + "'");
}

}  // namespace

DomainDef parse_domain(std::string_view text, const std::string& filename) {
  Parser parser(text, filename);
  Sexp top = parser.parse_one();
  const std::string& file = parser.file();

  expect_list(file, top, "(define ...)");
  if (top.items.empty() || !is_keyword(top.items[0], "define"))
    fail_at(file, top, DiagKind::SyntaxError, "expected (define (domain ...) ...)");
  if (top.items.size() < 2 || !top.items[1].is_list || top.items[1].items.size() != 2 ||
      !is_keyword(top.items[1].items[0], "domain"))
    fail_at(file, top, DiagKind::SyntaxError, "expected (domain <name>) after define");

  DomainDef d;
  d.name = expect_atom(file, top.items[1].items[1], "a domain name");

  for (size_t i = 2; i < top.items.size(); ++i) {
    const Sexp& sec = expect_list(file, top.items[i], "a domain section");
    if (sec.items.empty())
      fail_at(file, sec, DiagKind::SyntaxError, "empty domain section");
    std::string head = lower(expect_atom(file, sec.items[0], "a section keyword"));

    if (head == ":requirements") {
      for (size_t k = 1; k < sec.items.size(); ++k) {
        std::string req = lower(expect_atom(file, sec.items[k], "a requirement"));
        if (req != ":strips" && req != ":typing" && req != ":negative-preconditions")
          fail_at(file, sec.items[k], DiagKind::UnsupportedRequirement,
                  "requirement '" + req + "' is not supported");
        d.requirements.push_back(req);
      }
    } else if (head == ":types") {
      d.types = parse_typed_list(file, sec, 1, false);
      for (const auto& ty : d.types)
        if (ty.type != "object" && !d.type_declared(ty.type))
          fail_at(file, sec, DiagKind::TypeMismatch,
                  "type '" + ty.name + "' has undeclared parent '" + ty.type + "'");
    } else if (head == ":constants") {
      d.constants = parse_typed_list(file, sec, 1, false);
      check_declared_types(file, d, d.constants, sec);
    } else if (head == ":predicates") {
      for (size_t k = 1; k < sec.items.size(); ++k) {
        const Sexp& pl = expect_list(file, sec.items[k], "a predicate declaration");
        if (pl.items.empty())
          fail_at(file, pl, DiagKind::SyntaxError, "empty predicate declaration");
        PredicateDef pd;
        pd.name = expect_atom(file, pl.items[0], "a predicate name");
        if (d.find_predicate(pd.name))
          fail_at(file, pl, DiagKind::SyntaxError, "duplicate predicate '" + pd.name + "'");
        pd.params = parse_typed_list(file, pl, 1, true);
        check_declared_types(file, d, pd.params, pl);
        d.predicates.push_back(std::move(pd));
      }
    } else if (head == ":action") {
      if (sec.items.size() < 2)
        fail_at(file, sec, DiagKind::SyntaxError, "action without a name");
      ActionSchema a;
      a.name = expect_atom(file, sec.items[1], "an action name");
      for (const auto& other : d.actions)
        if (other.name == a.name)
          fail_at(file, sec, DiagKind::SyntaxError, "duplicate action '" + a.name + "'");
      size_t k = 2;
      while (k < sec.items.size()) {
        std::string kw = lower(expect_atom(file, sec.items[k], "an action keyword"));
        if (k + 1 >= sec.items.size())
          fail_at(file, sec.items[k], DiagKind::SyntaxError, "missing value after '" + kw + "'");
        const Sexp& val = sec.items[k + 1];
        if (kw == ":parameters") {
          a.params = parse_typed_list(file, expect_list(file, val, "a parameter list"), 0, true);
          check_declared_types(file, d, a.params, val);
        } else if (kw == ":precondition") {
          parse_literal_conjunction(file, val, true, a.precon_pos, a.precon_neg);
        } else if (kw == ":effect") {
          parse_literal_conjunction(file, val, true, a.add, a.del);
        } else {
          fail_at(file, sec.items[k], DiagKind::SyntaxError,
                  "unknown action keyword '" + kw + "'");
        }
        k += 2;
      }
      ScopeChecker checker{file, d, {}};
      checker.scope = a.params;
      for (const auto& c : d.constants) checker.scope.push_back(c);
      for (const auto& lit : a.precon_pos) checker.check_literal(lit, sec);
      for (const auto& lit : a.precon_neg) checker.check_literal(lit, sec);
      for (const auto& lit : a.add) checker.check_literal(lit, sec);
      for (const auto& lit : a.del) checker.check_literal(lit, sec);
      for (const auto& lit : a.add)
        if (std::find(a.del.begin(), a.del.end(), lit) != a.del.end())
          fail_at(file, sec, DiagKind::SyntaxError,
                  "'" + lit.pred + "' appears both added and deleted in '" + a.name + "'");
      d.actions.push_back(std::move(a));
    } else {
      fail_at(file, sec, DiagKind::SyntaxError, "unknown domain section '" + head + "'");
    }
  }
  return d;
}

ProblemDef parse_problem(std::string_view text, const DomainDef& domain,
                         const std::string& filename) {
  Parser parser(text, filename);
  Sexp top = parser.parse_one();
  const std::string& file = parser.file();

  expect_list(file, top, "(define ...)");
  if (top.items.empty() || !is_keyword(top.items[0], "define"))
    fail_at(file, top, DiagKind::SyntaxError, "expected (define (problem ...) ...)");
  if (top.items.size() < 2 || !top.items[1].is_list || top.items[1].items.size() != 2 ||
      !is_keyword(top.items[1].items[0], "problem"))
    fail_at(file, top, DiagKind::SyntaxError, "expected (problem <name>) after define");

  ProblemDef p;
  p.name = expect_atom(file, top.items[1].items[1], "a problem name");

  ScopeChecker checker{file, domain, {}};
  for (const auto& c : domain.constants) checker.scope.push_back(c);

  for (size_t i = 2; i < top.items.size(); ++i) {
    const Sexp& sec = expect_list(file, top.items[i], "a problem section");
    if (sec.items.empty())
      fail_at(file, sec, DiagKind::SyntaxError, "empty problem section");
    std::string head = lower(expect_atom(file, sec.items[0], "a section keyword"));

    if (head == ":domain") {
      if (sec.items.size() != 2)
        fail_at(file, sec, DiagKind::SyntaxError, ":domain takes one name");
      p.domain_name = expect_atom(file, sec.items[1], "a domain name");
      if (p.domain_name != domain.name)
        fail_at(file, sec.items[1], DiagKind::UndeclaredSymbol,
                "problem references domain '" + p.domain_name + "', loaded domain is '" +
                    domain.name + "'");
    } else if (head == ":objects") {
      p.objects = parse_typed_list(file, sec, 1, false);
      check_declared_types(file, domain, p.objects, sec);
      for (const auto& o : p.objects) checker.scope.push_back(o);
    } else if (head == ":init") {
      for (size_t k = 1; k < sec.items.size(); ++k) {
        Literal lit = parse_atom_expr(file, sec.items[k]);
        checker.check_literal(lit, sec.items[k]);
        p.init.push_back(std::move(lit));
      }
    } else if (head == ":goal") {
      if (sec.items.size() != 2)
        fail_at(file, sec, DiagKind::SyntaxError, ":goal takes one condition");
      parse_literal_conjunction(file, sec.items[1], true, p.goal_pos, p.goal_neg);
      for (const auto& lit : p.goal_pos) checker.check_literal(lit, sec.items[1]);
      for (const auto& lit : p.goal_neg) checker.check_literal(lit, sec.items[1]);
    } else {
      fail_at(file, sec, DiagKind::SyntaxError, "unknown problem section '" + head + "'");
    }
  }
  for (const auto& lit : p.init)
    for (const auto& arg : lit.args)
      if (!arg.empty() && arg[0] == '?')
        throw ParseError(DiagKind::UndeclaredSymbol, file, 1, 1,
                         "variable '" + arg + "' in :init");
  return p;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(DiagKind::IoError, path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DomainDef parse_domain_file(const std::string& path) {
  return parse_domain(read_text_file(path), path);
}

ProblemDef parse_problem_file(const std::string& path, const DomainDef& domain) {
  return parse_problem(read_text_file(path), domain, path);
}

namespace {

void print_typed_list(std::ostream& os, const std::vector<TypedName>& names) {
  for (size_t i = 0; i < names.size(); ++i) {
    if (i) os << " ";
    os << names[i].name << " - " << names[i].type;
  }
}

void print_literal(std::ostream& os, const Literal& lit, bool negated) {
  if (negated) os << "(not ";
  os << "(" << lit.pred;
  for (const auto& a : lit.args) os << " " << a;
  os << ")";
  if (negated) os << ")";
}

void print_conjunction(std::ostream& os, const std::vector<Literal>& pos,
                       const std::vector<Literal>& neg) {
  os << "(and";
  for (const auto& l : pos) {
    os << " ";
    print_literal(os, l, false);
  }
  for (const auto& l : neg) {
    os << " ";
    print_literal(os, l, true);
  }
  os << ")";
}

}  // namespace

std::string to_pddl(const DomainDef& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")\n";
  if (!d.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : d.requirements) os << " " << r;
    os << ")\n";
  }
  if (!d.types.empty()) {
    os << "  (:types ";
    print_typed_list(os, d.types);
    os << ")\n";
  }
  if (!d.constants.empty()) {
    os << "  (:constants ";
    print_typed_list(os, d.constants);
    os << ")\n";
  }
  if (!d.predicates.empty()) {
    os << "  (:predicates";
    for (const auto& p : d.predicates) {
      os << " (" << p.name;
      if (!p.params.empty()) {
        os << " ";
        print_typed_list(os, p.params);
      }
      os << ")";
    }
    os << ")\n";
  }
  for (const auto& a : d.actions) {
    os << "  (:action " << a.name << "\n    :parameters (";
    print_typed_list(os, a.params);
    os << ")\n    :precondition ";
    print_conjunction(os, a.precon_pos, a.precon_neg);
    os << "\n    :effect ";
    print_conjunction(os, a.add, a.del);
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

std::string to_pddl(const ProblemDef& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n";
  if (!p.domain_name.empty()) os << "  (:domain " << p.domain_name << ")\n";
  if (!p.objects.empty()) {
    os << "  (:objects ";
    print_typed_list(os, p.objects);
    os << ")\n";
  }
  os << "  (:init";
  for (const auto& l : p.init) {
    os << " ";
    print_literal(os, l, false);
  }
  os << ")\n  (:goal ";
  print_conjunction(os, p.goal_pos, p.goal_neg);
  os << "))\n";
  return os.str();
}

}  // namespace etamp
