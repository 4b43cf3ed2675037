#pragma once

// Abstract syntax of simplification-rule programs and goals, and the
// concrete-syntax parser and printer.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chrm/builtin.hpp"
#include "chrm/term.hpp"

namespace chrm {

struct UserConstraint {
  std::string predicate;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  friend bool operator==(const UserConstraint& a, const UserConstraint& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
};

/// name @ head <=> guard | body_builtins, body_user.
struct Rule {
  std::string name;   // empty when the source gave none
  std::string label;  // name, or "rule<N>" by position in the program
  std::vector<UserConstraint> head;
  BuiltinConjunction guard;
  BuiltinConjunction body_builtins;
  std::vector<UserConstraint> body_user;
};

struct Program {
  std::vector<Rule> rules;

  const Rule* find(std::string_view label) const;
};

/// A goal or state written as a conjunction.
struct Goal {
  BuiltinConjunction builtins;
  std::vector<UserConstraint> user;
};

struct RecursionShape {
  enum class Kind { LinearDirect, Other };
  Kind kind = Kind::Other;
  std::string reason;          // Other only
  UserConstraint head_atom;    // LinearDirect only
  UserConstraint body_atom;    // LinearDirect only

  bool linear_direct() const { return kind == Kind::LinearDirect; }
};

RecursionShape classify(const Rule& rule);
/// "linear-direct(p/2)" or "other(<reason>)".
std::string to_string(const RecursionShape& s);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found,
             std::string message = {});

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
  std::string found_;
};

Program parse_program(std::string_view text);
Goal parse_goal(std::string_view text);
/// A conjunction that may only contain built-in atoms.
BuiltinConjunction parse_builtins(std::string_view text);

std::string to_string(const UserConstraint& c);
std::string to_string(const std::vector<UserConstraint>& cs);
std::string to_string(const Rule& r);
std::string to_string(const Program& p);
std::string to_string(const Goal& g);

UserConstraint apply(const Substitution& s, const UserConstraint& c);
std::vector<UserConstraint> apply(const Substitution& s, const std::vector<UserConstraint>& cs);
UserConstraint rename(Renaming& r, const UserConstraint& c);
Rule rename(Renaming& r, const Rule& rule);

void collect_vars(const UserConstraint& c, std::set<VarId>& out);
void collect_vars(const UserConstraint& c, std::vector<Term>& out);
std::set<VarId> vars_of(const Rule& r);
std::vector<Term> ordered_vars(const Rule& r);

/// Copy of the rule over fresh variables.
std::pair<Rule, Renaming> disjoint_variant(const Rule& r);

}  // namespace chrm
