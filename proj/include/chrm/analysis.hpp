#pragma once

// Misbehavior conditions for linear direct-recursive simplification rules:
// the basic condition with its termination converse, the general condition
// parameterised by an added constraint Q, containment, and bounded Q search.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chrm/semantics.hpp"
#include "chrm/syntax.hpp"
#include "chrm/theory.hpp"

namespace chrm {

class NotLinearDirect : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IllFormedQ : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionNotMet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The two checks behind a verdict.
///   existential: exists (Q, C, B_bi)
///   implication: forall ((Q, C, B_bi) -> exists x. (B_ud = H', Q', C'))
struct ConditionReport {
  std::string rule;
  BuiltinConjunction q;
  BuiltinConjunction premise;
  BuiltinConjunction conclusion;
  std::vector<Term> exist;  // variables of the renamed rule and Q
  SatStatus existential = SatStatus::Unknown;
  Entailment implication;
  State goal;  // H, C, Q
};

enum class TerminationCase {
  GuardUnsat,          // exists C fails: the goal fails at once
  BodyUnsat,           // exists (C, B_bi) fails: the first step fails
  ImplicationRefuted,  // the recursive call cannot fire again for some valuation
  InterpreterFinal,    // run reached a final state
};

const char* to_string(TerminationCase c);

struct Verdict {
  enum class Kind { Misbehaves, Terminates, Unknown };
  Kind kind = Kind::Unknown;
  ConditionReport report;
  State witness_goal;
  std::optional<TerminationCase> termination;
  std::optional<Substitution> countermodel;
  std::string reason;
  std::vector<std::string> caveats;

  bool misbehaves() const { return kind == Kind::Misbehaves; }
  bool terminates() const { return kind == Kind::Terminates; }
  bool unknown() const { return kind == Kind::Unknown; }
};

const char* to_string(Verdict::Kind k);

/// Q = true. Terminates is the converse direction: it holds whenever either
/// check is refuted.
Verdict basic_condition(const Rule& rule, const TheoryBounds& bounds = {});

/// Sufficient only: a failed check yields Unknown, never Terminates.
Verdict general_condition(const Rule& rule, const BuiltinConjunction& q, const TheoryBounds& bounds = {});

/// Misbehaves when `goal` contains the base goal H, C, Q of a misbehaving
/// condition. Throws PreconditionNotMet if the condition for q is not
/// established.
Verdict containment_verdict(const State& goal, const Rule& rule, const BuiltinConjunction& q,
                            const TheoryBounds& bounds = {});

struct QCandidate {
  BuiltinConjunction q;
  Verdict verdict;
  /// Index of an earlier Misbehaves candidate whose goal contains this one's.
  std::optional<std::size_t> subsumed_by;
};

/// Candidate atoms over the rule's variables:
///   V1 = V2, V1 >= V2, V1 > V2, V1 = s^k(V2) for 1 <= k <= offset_bound, odd(V), even(V)
std::vector<BuiltinAtom> q_atom_pool(const Rule& rule, long offset_bound);

/// Q = true first, then conjunctions of up to size_bound pool atoms whose
/// existential part is satisfiable.
std::vector<QCandidate> enumerate_q(const Rule& rule, std::size_t size_bound, long offset_bound,
                                    const TheoryBounds& bounds = {});

struct GoalCheck {
  Verdict verdict;
  std::string rule;  // rule whose condition decided, if any
  std::optional<BuiltinConjunction> q;
};

struct CheckOptions {
  std::optional<BuiltinConjunction> q;
  std::size_t q_size = 1;
  long q_offset = 2;
  TheoryBounds bounds;
};

/// Tries to prove misbehavior of an arbitrary goal through containment in
/// the base goal of some linear direct rule. With opts.q set only that Q is
/// tried.
GoalCheck check_goal(const Program& program, const State& goal, const CheckOptions& opts = {});

struct CrossCheck {
  bool ran = false;
  RunOutcome outcome;
  bool consistent = true;
  std::string note;
};

/// Runs the verdict's witness goal (Misbehaves) or the rule's most general
/// goal H, C (Terminates) and checks the outcome does not contradict it.
CrossCheck cross_validate(const Program& program, const Rule& rule, const Verdict& v, std::size_t fuel = 100,
                          const TheoryBounds& bounds = {});

/// forall ((premise) -> exists x (conclusion)) in readable form.
std::string implication_text(const ConditionReport& r);

}  // namespace chrm
