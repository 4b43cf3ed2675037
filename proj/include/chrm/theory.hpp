#pragma once

// The built-in constraint theory: syntactic equality over finite terms plus
// order, parity and primality over successor numerals.

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "chrm/builtin.hpp"
#include "chrm/term.hpp"

namespace chrm {

struct TheoryBounds {
  /// Largest numeral tried for universal variables in countermodel search.
  long counter_depth = 12;
  /// Largest numeral tried when searching existential witnesses.
  long witness_depth = 15;
  /// Random samples used by soundness property checks.
  std::size_t samples = 200;
  /// Successor offsets tried for symbolic existential witnesses.
  long witness_offset = 2;
  /// Cap on candidate valuations per search.
  std::size_t enumeration_budget = 20000;
};

enum class SatStatus { Sat, Unsat, Unknown };
const char* to_string(SatStatus s);

/// lhs - rhs >= offset; rhs may be the numeral 0.
struct DifferenceBound {
  Term lhs;
  Term rhs;
  long offset = 0;
};

/// Normal form of a satisfiable conjunction.
struct SolvedForm {
  Substitution equations;
  std::vector<DifferenceBound> bounds;
  std::vector<std::pair<Term, int>> parity;  // variable, value mod 2
  BuiltinConjunction residuals;              // primality atoms and undecided disequations
};

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  SolvedForm solved;
  /// Ground valuation of every variable of the conjunction (Sat only).
  Substitution model;
  std::string reason;
};

SatResult satisfiable(const BuiltinConjunction& c, const TheoryBounds& bounds = {});

struct Entailment {
  enum class Kind { Valid, Invalid, Unknown };
  Kind kind = Kind::Unknown;
  std::string note;
  /// Invalid: ground valuation of the universal variables refuting the implication.
  Substitution countermodel;
  /// Valid: bindings found for the existential variables (may mention
  /// refinements of universal variables).
  Substitution witness;

  bool valid() const { return kind == Kind::Valid; }
  bool invalid() const { return kind == Kind::Invalid; }
  bool unknown() const { return kind == Kind::Unknown; }
};

const char* to_string(Entailment::Kind k);

/// Three-valued check of  forall (premise -> exists exist_vars. conclusion).
/// Variables of the conclusion outside `exist_vars` are universal.
Entailment entails(const BuiltinConjunction& premise, const std::set<VarId>& exist_vars,
                   const BuiltinConjunction& conclusion, const TheoryBounds& bounds = {});

/// forall (strong -> exists y. weak) where y are the variables of `weak`
/// that do not occur in `strong`.
Entailment implies_builtins(const BuiltinConjunction& strong, const BuiltinConjunction& weak,
                            const TheoryBounds& bounds = {});

/// Truth of a ground atom under the standard model of the naturals. Order,
/// parity and primality atoms over ground non-numerals are false.
bool ground_eval(const BuiltinAtom& atom);
bool ground_eval(const BuiltinConjunction& c);

}  // namespace chrm
