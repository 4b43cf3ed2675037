#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace chrm {

using VarId = std::uint64_t;

/// Allocates a variable id that has never been handed out before in this
/// process. Thread-safe.
VarId fresh_var_id();

/// Highest id allocated so far (0 if none).
VarId last_var_id();

/// Finite first-order term: a variable or a functor applied to arguments.
/// Terms are immutable and cheap to copy; subterms are shared.
class Term {
 public:
  enum class Kind { Variable, Compound };

  /// Variable with a fresh id.
  static Term var(std::string name);
  static Term var(std::string name, VarId id);
  static Term compound(std::string functor, std::vector<Term> args = {});
  /// s^n(0)
  static Term numeral(unsigned n);
  /// s^n(t)
  static Term successor(Term t, unsigned n = 1);

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::Variable; }
  bool is_compound() const { return node_->kind == Kind::Compound; }
  VarId var_id() const { return node_->id; }
  /// Variable name or functor symbol.
  const std::string& name() const { return node_->name; }
  const std::vector<Term>& args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  bool is_ground() const { return node_->ground; }
  /// Number of nodes.
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  bool same_node(const Term& o) const { return node_ == o.node_; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  /// Total structural order (variables before compounds, then by id / functor).
  friend bool operator<(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    VarId id = 0;
    std::string name;
    std::vector<Term> args;
    bool ground = true;
    std::size_t size = 1;
    std::size_t hash = 0;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// A term of the form s^offset(base) where base is a variable or 0.
struct NumeralForm {
  std::optional<Term> base;  // nullopt: the constant 0
  long offset = 0;
};

std::optional<NumeralForm> as_numeral(const Term& t);
/// Value of a ground numeral s^n(0).
std::optional<long> numeral_value(const Term& t);

void collect_vars(const Term& t, std::set<VarId>& out);
void collect_vars(const Term& t, std::vector<Term>& out);  // in order of first occurrence, deduplicated
/// As above; `seen` holds the ids already in `out`.
void collect_vars(const Term& t, std::vector<Term>& out, std::set<VarId>& seen);
std::set<VarId> vars_of(const Term& t);
bool occurs(VarId v, const Term& t);

std::string to_string(const Term& t);

/// Idempotent finite map from variables to terms.
class Substitution {
 public:
  struct Entry {
    Term var;
    Term value;
  };

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  bool contains(VarId v) const { return map_.count(v) != 0; }
  std::optional<Term> lookup(VarId v) const;

  /// Adds v -> t, keeping the substitution idempotent. `t` is first brought
  /// under the current substitution. Returns false on an occurs-check
  /// violation or if v is already bound.
  bool bind(const Term& var, const Term& t);
  /// Adds v -> value without rewriting other bindings. Only valid when v
  /// occurs in no existing value, e.g. when every value is ground.
  void insert_unchecked(const Term& var, const Term& value) { map_.emplace(var.var_id(), Entry{var, value}); }

  Term apply(const Term& t) const;
  std::vector<Term> apply(const std::vector<Term>& ts) const;

  /// Restriction to a set of variables.
  Substitution restricted(const std::set<VarId>& keep) const;

  auto begin() const { return map_.begin(); }
  auto end() const { return map_.end(); }

  friend bool operator==(const Substitution& a, const Substitution& b);
  friend std::optional<Substitution> solve_equations(const std::vector<std::pair<Term, Term>>&,
                                                     const Substitution&, const std::function<bool(VarId)>&);

 private:
  std::map<VarId, Entry> map_;
};

std::string to_string(const Substitution& s);

using BindablePredicate = std::function<bool(VarId)>;

/// Solves a list of term equations, extending `base`. Only variables accepted
/// by `bindable` may be bound. nullopt on clash, occurs-check violation, or
/// an equation that would need to bind a non-bindable variable.
std::optional<Substitution> solve_equations(const std::vector<std::pair<Term, Term>>& eqs,
                                            const Substitution& base,
                                            const BindablePredicate& bindable);

/// Most general unifier; nullopt signals a clash.
std::optional<Substitution> unify(const Term& t1, const Term& t2);

/// One-sided unification: variables in `frozen` are treated as constants.
std::optional<Substitution> match(const Term& pattern, const Term& ground_side,
                                  const std::set<VarId>& frozen);

/// Bijective map from old variable ids to fresh variables. Unseen variables
/// are allocated on first use, so one Renaming applied to several values
/// renames them consistently.
class Renaming {
 public:
  Term operator()(const Term& t);
  const std::map<VarId, Term>& mapping() const { return map_; }
  std::optional<Term> image(VarId v) const;

 private:
  std::map<VarId, Term> map_;
};

std::pair<Term, Renaming> disjoint_variant(const Term& t);

}  // namespace chrm
