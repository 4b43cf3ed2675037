#include "chrm/report.hpp"

#include <sstream>

namespace chrm {

namespace {

json state_json(const State& s) {
  json user = json::array();
  for (const auto& c : s.user) user.push_back(to_string(c));
  return {{"user", user}, {"builtins", to_string(s.builtins)}};
}

json substitution_json(const Substitution& s) {
  json out = json::object();
  for (const auto& [id, e] : s) out[to_string(e.var)] = to_string(e.value);
  return out;
}

}  // namespace

std::string solved_text(const BuiltinConjunction& c, const TheoryBounds& bounds) {
  SatResult s = satisfiable(c, bounds);
  if (s.status == SatStatus::Unsat) return "false";
  BuiltinConjunction out;
  for (const auto& [id, e] : s.solved.equations) out.push_back(BuiltinAtom::eq(e.var, e.value));
  for (const auto& a : c)
    if (a.kind != BuiltinKind::Eq) out.push_back(chrm::apply(s.solved.equations, a));
  return to_string(out);
}

json verdict_json(const Rule& rule, const Verdict& v) {
  json j;
  j["rule"] = rule.label;
  j["shape"] = to_string(classify(rule));
  j["q"] = to_string(v.report.q);
  j["existential"] = to_string(v.report.existential);
  j["implication"] = to_string(v.report.implication.kind);
  j["implication_text"] = implication_text(v.report);
  j["verdict"] = to_string(v.kind);
  j["reason"] = v.reason;
  if (v.termination) j["termination"] = to_string(*v.termination);
  j["witness_goal"] = state_json(v.witness_goal);
  if (v.countermodel) j["countermodel"] = substitution_json(*v.countermodel);
  j["caveats"] = v.caveats;
  return j;
}

json run_json(const RunOutcome& r) {
  json j;
  j["outcome"] = to_string(r.kind);
  j["steps"] = r.trace.size();
  if (r.kind == RunOutcome::Kind::Failed) j["failed_step"] = r.failed_step;
  j["last_state"] = state_json(r.last);
  j["last_state"]["solved"] = solved_text(r.last.builtins);
  j["unknown_applicability"] = r.unknown_applicability;
  json trace = json::array();
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& t = r.trace[i];
    json m = json::array();
    for (const auto& c : t.matched) m.push_back(to_string(c));
    json u = json::array();
    for (const auto& c : t.target.user) u.push_back(to_string(c));
    trace.push_back({{"step", i + 1},
                     {"rule", t.rule},
                     {"matched", m},
                     {"user", u},
                     {"builtins", solved_text(t.target.builtins)}});
  }
  j["trace"] = trace;
  return j;
}

json cross_check_json(const CrossCheck& c) {
  json j{{"consistent", c.consistent}, {"note", c.note}};
  if (c.ran) {
    j["outcome"] = to_string(c.outcome.kind);
    j["steps"] = c.outcome.trace.size();
  }
  return j;
}

std::string verdict_text(const Verdict& v, int indent) {
  std::string pad(static_cast<std::size_t>(indent), ' ');
  std::ostringstream os;
  os << pad << "verdict: " << to_string(v.kind);
  if (v.termination) os << " (" << to_string(*v.termination) << ")";
  os << "\n";
  os << pad << "reason: " << v.reason << "\n";
  os << pad << "existential: " << to_string(v.report.existential) << "\n";
  os << pad << "implication: " << to_string(v.report.implication.kind) << "\n";
  os << pad << "  " << implication_text(v.report) << "\n";
  if (v.countermodel) os << pad << "countermodel: " << to_string(*v.countermodel) << "\n";
  os << pad << "witness goal: " << to_string(v.witness_goal) << "\n";
  for (const auto& c : v.caveats) os << pad << "caveat: " << c << "\n";
  return os.str();
}

}  // namespace chrm
