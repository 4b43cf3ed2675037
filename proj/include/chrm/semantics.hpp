#pragma once

// Abstract operational semantics: states, the simplify transition,
// fuel-bounded runs, state equivalence and goal containment.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chrm/syntax.hpp"
#include "chrm/theory.hpp"

namespace chrm {

/// Built-in store plus multiset of user constraints. Duplicate user
/// constraints are distinct occurrences.
struct State {
  BuiltinConjunction builtins;
  std::vector<UserConstraint> user;

  static State from_goal(const Goal& g) { return {g.builtins, g.user}; }
};

std::string to_string(const State& s);
std::set<VarId> vars_of(const State& s);

/// One way of firing a rule on a state.
struct Match {
  Rule variant;                         // disjoint variant of the rule
  std::vector<std::size_t> occurrences;  // state user index for each head atom
  BuiltinConjunction head_equations;    // H = H_S, pairwise over arguments
  Substitution substitution;            // bindings found for the variant's variables
};

struct Applicability {
  std::vector<Match> matches;
  /// Head matchings whose guard entailment came back Unknown; never applied.
  std::size_t unknown = 0;
};

Applicability applicable(const State& state, const Rule& rule, const TheoryBounds& bounds = {});

struct Transition {
  std::string rule;
  std::vector<std::size_t> occurrences;
  std::vector<UserConstraint> matched;
  Substitution substitution;
  State source;
  State target;
};

/// Which applicable (rule, occurrence) pair fires. Textual picks the first
/// rule in program order and its first head match; Random picks uniformly
/// among all matches using the seeded generator.
class SelectionPolicy {
 public:
  static SelectionPolicy textual() { return SelectionPolicy(false, 0); }
  static SelectionPolicy random(std::uint64_t seed) { return SelectionPolicy(true, seed); }

  bool is_random() const { return random_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t pick(std::size_t n);

 private:
  SelectionPolicy(bool random, std::uint64_t seed) : random_(random), seed_(seed), rng_(seed) {}
  bool random_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

struct StepResult {
  std::optional<Transition> transition;  // nullopt: no rule applicable
  std::size_t unknown = 0;               // applicability checks left Unknown
};

StepResult step(const State& state, const Program& program, SelectionPolicy& policy,
                const TheoryBounds& bounds = {});

struct RunOutcome {
  enum class Kind { Final, Failed, FuelExhausted };
  Kind kind = Kind::Final;
  State last;
  /// Failed: number of transitions taken when the failed state was reached
  /// (0 if the goal itself is unsatisfiable).
  std::size_t failed_step = 0;
  std::vector<Transition> trace;
  std::size_t unknown_applicability = 0;
  /// Final states whose satisfiability could not be decided.
  bool sat_unknown = false;
};

const char* to_string(RunOutcome::Kind k);

RunOutcome run(const State& goal, const Program& program, std::size_t fuel,
               SelectionPolicy policy = SelectionPolicy::textual(), const TheoryBounds& bounds = {});

enum class Tribool { True, False, Unknown };
const char* to_string(Tribool t);

Tribool state_equiv(const State& s1, const State& s2, const TheoryBounds& bounds = {});

/// Whether `small` is contained in `large`: some variant of small, plus
/// further constraints, is equivalent to large.
Tribool contains(const State& small, const State& large, const TheoryBounds& bounds = {});
/// contains(small, large) and not contains(large, small).
Tribool contains_strict(const State& small, const State& large, const TheoryBounds& bounds = {});

/// One line per transition: index, rule, matched atoms, resulting state.
std::string trace_lines(const RunOutcome& r);

}  // namespace chrm
