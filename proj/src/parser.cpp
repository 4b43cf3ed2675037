#include <cctype>
#include <map>

#include "chrm/syntax.hpp"

namespace chrm {

namespace {

enum class Tok {
  Var, Atom, Number, LParen, RParen, Comma, Dot, Bar, At, Simp, Prop,
  Eq, Ge, Gt, Lt, Le, Neq, End
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Var: return "variable";
    case Tok::Atom: return "identifier";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Bar: return "'|'";
    case Tok::At: return "'@'";
    case Tok::Simp: return "'<=>'";
    case Tok::Prop: return "'==>'";
    case Tok::Eq: return "'='";
    case Tok::Ge: return "'>='";
    case Tok::Gt: return "'>'";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'=<'";
    case Tok::Neq: return "'\\='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t{Tok::End, "", line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Var;
        t.text = take_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '\''; });
      } else if (std::islower(static_cast<unsigned char>(c))) {
        t.kind = Tok::Atom;
        t.text = take_while([](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; });
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::Number;
        t.text = take_while([](char ch) { return std::isdigit(static_cast<unsigned char>(ch)) != 0; });
      } else {
        static const std::pair<const char*, Tok> ops[] = {
            {"<=>", Tok::Simp}, {"==>", Tok::Prop}, {"=>", Tok::Prop}, {"\\=", Tok::Neq}, {">=", Tok::Ge},
            {"=<", Tok::Le},    {"=", Tok::Eq},     {">", Tok::Gt},    {"<", Tok::Lt},    {"(", Tok::LParen},
            {")", Tok::RParen}, {",", Tok::Comma},  {".", Tok::Dot},   {"|", Tok::Bar},   {"@", Tok::At},
        };
        bool matched = false;
        for (const auto& [text, kind] : ops) {
          std::string_view s(text);
          if (src_.substr(pos_, s.size()) == s) {
            t.kind = kind;
            t.text = std::string(s);
            advance(s.size());
            matched = true;
            break;
          }
        }
        if (!matched) {
          throw ParseError(line_, col_, {"a term or operator"}, "'" + std::string(1, c) + "'",
                           "unexpected character '" + std::string(1, c) + "'");
        }
      }
      out.push_back(std::move(t));
    }
  }

 private:
  template <typename Pred>
  std::string take_while(Pred p) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && p(src_[pos_])) advance(1);
    return std::string(src_.substr(start, pos_ - start));
  }

  void advance(std::size_t n) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i, ++pos_) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance(1);
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

// One parsed conjunct: either a built-in atom or a user constraint.
struct Conjunct {
  bool builtin = false;
  BuiltinAtom atom;
  UserConstraint user;
  Token where;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  Program program() {
    Program p;
    std::map<std::string, std::pair<std::size_t, Token>> arity;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      Token start = peek();
      Rule r = rule();
      if (!r.name.empty() && !names.insert(r.name).second) {
        throw ParseError(start.line, start.column, {"a unique rule name"}, "'" + r.name + "'",
                         "duplicate rule name '" + r.name + "'");
      }
      r.label = r.name.empty() ? "rule" + std::to_string(p.rules.size() + 1) : r.name;
      auto check = [&](const UserConstraint& c) {
        auto [it, inserted] = arity.emplace(c.predicate, std::make_pair(c.arity(), start));
        if (!inserted && it->second.first != c.arity()) {
          throw ParseError(start.line, start.column, {c.predicate + "/" + std::to_string(it->second.first)},
                           c.predicate + "/" + std::to_string(c.arity()),
                           "predicate " + c.predicate + " used with arity " + std::to_string(c.arity()) +
                               " and " + std::to_string(it->second.first));
        }
      };
      for (const auto& h : r.head) check(h);
      for (const auto& b : r.body_user) check(b);
      p.rules.push_back(std::move(r));
    }
    return p;
  }

  Goal goal() {
    Goal g;
    if (peek().kind == Tok::End) return g;
    for (auto& c : conjunction()) {
      if (c.builtin) {
        if (c.atom.kind != BuiltinKind::True) g.builtins.push_back(std::move(c.atom));
      } else {
        g.user.push_back(std::move(c.user));
      }
    }
    if (peek().kind == Tok::Dot) next();
    expect(Tok::End, {tok_name(Tok::End)});
    return g;
  }

  BuiltinConjunction builtins() {
    BuiltinConjunction out;
    if (peek().kind == Tok::End) return out;
    for (auto& c : conjunction()) {
      if (!c.builtin) {
        throw ParseError(c.where.line, c.where.column, {"a built-in constraint"}, "'" + c.user.predicate + "'",
                         "user constraint " + c.user.predicate + " not allowed here");
      }
      if (c.atom.kind != BuiltinKind::True) out.push_back(std::move(c.atom));
    }
    if (peek().kind == Tok::Dot) next();
    expect(Tok::End, {tok_name(Tok::End)});
    return out;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const Token& t = peek();
    throw ParseError(t.line, t.column, std::move(expected), describe(t));
  }

  Token expect(Tok kind, std::vector<std::string> expected) {
    if (peek().kind != kind) fail(std::move(expected));
    return next();
  }

  Term variable(const std::string& name) {
    if (name == "_") return Term::var("_G" + std::to_string(fresh_var_id()));
    auto it = scope_.find(name);
    if (it != scope_.end()) return it->second;
    Term v = Term::var(name);
    scope_.emplace(name, v);
    return v;
  }

  Term term() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var: return variable(next().text);
      case Tok::Number: {
        Token n = next();
        if (n.text.size() > 6) {
          throw ParseError(n.line, n.column, {"a number below 1000000"}, describe(n), "number too large");
        }
        return Term::numeral(static_cast<unsigned>(std::stoul(n.text)));
      }
      case Tok::Atom: {
        Token f = next();
        std::vector<Term> args;
        if (peek().kind == Tok::LParen) {
          next();
          args.push_back(term());
          while (peek().kind == Tok::Comma) {
            next();
            args.push_back(term());
          }
          expect(Tok::RParen, {"','", "')'"});
        }
        return Term::compound(f.text, std::move(args));
      }
      default: fail({"variable", "identifier", "number"});
    }
  }

  static std::optional<BuiltinKind> relation(Tok t) {
    switch (t) {
      case Tok::Eq: return BuiltinKind::Eq;
      case Tok::Ge: return BuiltinKind::Ge;
      case Tok::Le: return BuiltinKind::Ge;
      case Tok::Gt: return BuiltinKind::Gt;
      case Tok::Lt: return BuiltinKind::Lt;
      case Tok::Neq: return BuiltinKind::Neq;
      default: return std::nullopt;
    }
  }

  Conjunct conjunct() {
    Conjunct c;
    c.where = peek();
    Term lhs = term();
    Tok op = peek().kind;
    if (auto kind = relation(op)) {
      next();
      Term rhs = term();
      c.builtin = true;
      c.atom = op == Tok::Le ? BuiltinAtom{BuiltinKind::Ge, {rhs, lhs}} : BuiltinAtom{*kind, {lhs, rhs}};
    } else if (lhs.is_var()) {
      fail({"'='", "'>='", "'>'", "'<'", "'=<'", "'\\='"});
    } else {
      static const std::map<std::string, BuiltinKind> unary = {
          {"odd", BuiltinKind::Odd}, {"even", BuiltinKind::Even},
          {"prime", BuiltinKind::Prime}, {"notprime", BuiltinKind::NotPrime}};
      auto u = unary.find(lhs.name());
      if (u != unary.end() && lhs.arity() == 1) {
        c.builtin = true;
        c.atom = BuiltinAtom{u->second, {lhs.args()[0]}};
      } else if ((lhs.name() == "true" || lhs.name() == "false") && lhs.arity() == 0) {
        c.builtin = true;
        c.atom = lhs.name() == "true" ? BuiltinAtom::truth() : BuiltinAtom::falsity();
      } else if (numeral_value(lhs)) {
        fail({"a constraint"});
      } else {
        c.user = UserConstraint{lhs.name(), lhs.args()};
      }
    }
    if (c.builtin) {
      try {
        check_well_formed(c.atom);
      } catch (const IllFormed& e) {
        throw ParseError(c.where.line, c.where.column, {"a numeral argument"}, describe(c.where), e.what());
      }
    }
    return c;
  }

  std::vector<Conjunct> conjunction() {
    std::vector<Conjunct> out;
    out.push_back(conjunct());
    while (peek().kind == Tok::Comma) {
      next();
      out.push_back(conjunct());
    }
    return out;
  }

  Rule rule() {
    scope_.clear();
    Rule r;
    if (peek().kind == Tok::Atom && peek(1).kind == Tok::At) {
      r.name = next().text;
      next();
    }
    for (auto& c : conjunction()) {
      if (c.builtin) {
        throw ParseError(c.where.line, c.where.column, {"a user constraint"}, describe(c.where),
                         "rule head must consist of user constraints");
      }
      r.head.push_back(std::move(c.user));
    }
    if (peek().kind == Tok::Prop) {
      const Token& t = peek();
      throw ParseError(t.line, t.column, {"'<=>'"}, describe(t),
                       "propagation rules are not supported; only simplification rules (<=>) are");
    }
    expect(Tok::Simp, {"','", "'<=>'"});
    if (peek().kind == Tok::Bar) {
      const Token& t = peek();
      throw ParseError(t.line, t.column, {"a constraint"}, describe(t),
                       "empty guard must be omitted, not written as '|'");
    }
    auto first = conjunction();
    std::vector<Conjunct> body;
    if (peek().kind == Tok::Bar) {
      next();
      for (auto& c : first) {
        if (!c.builtin) {
          throw ParseError(c.where.line, c.where.column, {"a built-in constraint"}, describe(c.where),
                           "guard may only contain built-in constraints");
        }
        r.guard.push_back(std::move(c.atom));
      }
      body = conjunction();
    } else {
      body = std::move(first);
    }
    for (auto& c : body) {
      if (c.builtin) {
        if (c.atom.kind != BuiltinKind::True) r.body_builtins.push_back(std::move(c.atom));
      } else {
        r.body_user.push_back(std::move(c.user));
      }
    }
    if (r.guard.size() == 1 && r.guard.front().kind == BuiltinKind::True) r.guard.clear();
    expect(Tok::Dot, {"','", "'|'", "'.'"});
    return r;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, Term> scope_;
};

}  // namespace

Program parse_program(std::string_view text) { return Parser(text).program(); }
Goal parse_goal(std::string_view text) { return Parser(text).goal(); }
BuiltinConjunction parse_builtins(std::string_view text) { return Parser(text).builtins(); }

}  // namespace chrm
