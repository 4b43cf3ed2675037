#include "chrm/syntax.hpp"

namespace chrm {

const Rule* Program::find(std::string_view label) const {
  for (const auto& r : rules) {
    if (r.label == label || (!r.name.empty() && r.name == label)) return &r;
  }
  return nullptr;
}

RecursionShape classify(const Rule& rule) {
  RecursionShape s;
  if (rule.head.size() != 1) {
    s.reason = "multi-headed";
    return s;
  }
  if (rule.body_user.empty()) {
    s.reason = "no recursive call";
    return s;
  }
  if (rule.body_user.size() > 1) {
    s.reason = "non-linear";
    return s;
  }
  const auto& h = rule.head.front();
  const auto& b = rule.body_user.front();
  if (h.predicate != b.predicate || h.arity() != b.arity()) {
    s.reason = "not direct recursive";
    return s;
  }
  s.kind = RecursionShape::Kind::LinearDirect;
  s.head_atom = h;
  s.body_atom = b;
  return s;
}

std::string to_string(const RecursionShape& s) {
  if (s.linear_direct())
    return "linear-direct(" + s.head_atom.predicate + "/" + std::to_string(s.head_atom.arity()) + ")";
  return "other(" + s.reason + ")";
}

namespace {
std::string join_expected(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += i + 1 == xs.size() ? " or " : ", ";
    out += xs[i];
  }
  return out;
}
}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected,
                       std::string found, std::string message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         (message.empty() ? "expected " + join_expected(expected) + ", found " + found
                                          : message)),
      line_(line), column_(column), expected_(std::move(expected)), found_(std::move(found)) {}

std::string to_string(const UserConstraint& c) {
  if (c.args.empty()) return c.predicate;
  std::string out = c.predicate + "(";
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (i) out += ",";
    out += to_string(c.args[i]);
  }
  return out + ")";
}

std::string to_string(const std::vector<UserConstraint>& cs) {
  std::string out;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ", ";
    out += to_string(cs[i]);
  }
  return out;
}

namespace {
std::string body_text(const BuiltinConjunction& b, const std::vector<UserConstraint>& u) {
  if (b.empty() && u.empty()) return "true";
  std::string out = b.empty() ? "" : to_string(b);
  if (!u.empty()) {
    if (!out.empty()) out += ", ";
    out += to_string(u);
  }
  return out;
}
}  // namespace

std::string to_string(const Rule& r) {
  std::string out;
  if (!r.name.empty()) out += r.name + " @ ";
  out += to_string(r.head) + " <=> ";
  if (!r.guard.empty()) out += to_string(r.guard) + " | ";
  return out + body_text(r.body_builtins, r.body_user) + ".";
}

std::string to_string(const Program& p) {
  std::string out;
  for (const auto& r : p.rules) out += to_string(r) + "\n";
  return out;
}

std::string to_string(const Goal& g) { return body_text(g.builtins, g.user); }

UserConstraint apply(const Substitution& s, const UserConstraint& c) { return {c.predicate, s.apply(c.args)}; }

std::vector<UserConstraint> apply(const Substitution& s, const std::vector<UserConstraint>& cs) {
  std::vector<UserConstraint> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(apply(s, c));
  return out;
}

UserConstraint rename(Renaming& r, const UserConstraint& c) {
  UserConstraint out{c.predicate, {}};
  for (const auto& t : c.args) out.args.push_back(r(t));
  return out;
}

Rule rename(Renaming& r, const Rule& rule) {
  Rule out;
  out.name = rule.name;
  out.label = rule.label;
  for (const auto& h : rule.head) out.head.push_back(rename(r, h));
  out.guard = rename(r, rule.guard);
  out.body_builtins = rename(r, rule.body_builtins);
  for (const auto& b : rule.body_user) out.body_user.push_back(rename(r, b));
  return out;
}

void collect_vars(const UserConstraint& c, std::set<VarId>& out) {
  for (const auto& t : c.args) collect_vars(t, out);
}

void collect_vars(const UserConstraint& c, std::vector<Term>& out) {
  for (const auto& t : c.args) collect_vars(t, out);
}

std::vector<Term> ordered_vars(const Rule& r) {
  std::vector<Term> out;
  for (const auto& h : r.head) collect_vars(h, out);
  collect_vars(r.guard, out);
  collect_vars(r.body_builtins, out);
  for (const auto& b : r.body_user) collect_vars(b, out);
  return out;
}

std::set<VarId> vars_of(const Rule& r) {
  std::set<VarId> out;
  for (const auto& v : ordered_vars(r)) out.insert(v.var_id());
  return out;
}

std::pair<Rule, Renaming> disjoint_variant(const Rule& r) {
  Renaming ren;
  Rule out = rename(ren, r);
  return {std::move(out), std::move(ren)};
}

}  // namespace chrm
