#pragma once

// JSON and plain-text renderings of verdicts and runs.

#include <string>

#include "json.hpp"

#include "chrm/analysis.hpp"
#include "chrm/semantics.hpp"

namespace chrm {

using nlohmann::json;

/// {rule, shape, q, existential, implication, verdict, witness_goal,
///  countermodel?, caveats[]} plus reason, termination and the implication
/// in readable form.
json verdict_json(const Rule& rule, const Verdict& v);

/// {outcome, steps, failed_step?, last_state, unknown_applicability, trace[]}
json run_json(const RunOutcome& r);

json cross_check_json(const CrossCheck& c);

/// Built-ins of a state in solved form, or "false" when unsatisfiable.
std::string solved_text(const BuiltinConjunction& c, const TheoryBounds& bounds = {});

/// Multi-line human report of a verdict, indented by `indent` spaces.
std::string verdict_text(const Verdict& v, int indent = 0);

}  // namespace chrm
