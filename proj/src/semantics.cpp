#include "chrm/semantics.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace chrm {

std::string to_string(const State& s) {
  std::string u = s.user.empty() ? "" : to_string(s.user);
  return "[" + (u.empty() ? std::string("-") : u) + " || " + to_string(s.builtins) + "]";
}

std::set<VarId> vars_of(const State& s) {
  std::set<VarId> out = vars_of(s.builtins);
  for (const auto& c : s.user) collect_vars(c, out);
  return out;
}

const char* to_string(RunOutcome::Kind k) {
  switch (k) {
    case RunOutcome::Kind::Final: return "final";
    case RunOutcome::Kind::Failed: return "failed";
    case RunOutcome::Kind::FuelExhausted: return "fuel-exhausted";
  }
  return "?";
}

const char* to_string(Tribool t) {
  switch (t) {
    case Tribool::True: return "true";
    case Tribool::False: return "false";
    case Tribool::Unknown: return "unknown";
  }
  return "?";
}

std::size_t SelectionPolicy::pick(std::size_t n) {
  if (!random_ || n <= 1) return 0;
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

namespace {

BuiltinConjunction pairwise_equations(const std::vector<UserConstraint>& a, const std::vector<UserConstraint>& b,
                                      const std::vector<std::size_t>& pick) {
  BuiltinConjunction eqs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a[i];
    const auto& y = b[pick[i]];
    for (std::size_t k = 0; k < x.args.size(); ++k) eqs.push_back(BuiltinAtom::eq(x.args[k], y.args[k]));
  }
  return eqs;
}

// Calls f for every injective assignment of `from` atoms to same-predicate
// `to` atoms. Stops early when f returns false.
void for_each_injection(const std::vector<UserConstraint>& from, const std::vector<UserConstraint>& to,
                        const std::function<bool(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> pick(from.size());
  std::vector<bool> used(to.size(), false);
  bool stop = false;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (stop) return;
    if (i == from.size()) {
      if (!f(pick)) stop = true;
      return;
    }
    for (std::size_t j = 0; j < to.size() && !stop; ++j) {
      if (used[j] || to[j].predicate != from[i].predicate || to[j].arity() != from[i].arity()) continue;
      used[j] = true;
      pick[i] = j;
      go(i + 1);
      used[j] = false;
    }
  };
  go(0);
}

bool same_predicate_multiset(const std::vector<UserConstraint>& a, const std::vector<UserConstraint>& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::pair<std::string, std::size_t>> x, y;
  for (const auto& c : a) x.emplace_back(c.predicate, c.arity());
  for (const auto& c : b) y.emplace_back(c.predicate, c.arity());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

// True if the ground valuation g makes every candidate conclusion
// unsatisfiable.
bool refutes_all(const Substitution& g, const std::vector<BuiltinConjunction>& conclusions,
                 const TheoryBounds& bounds) {
  for (const auto& c : conclusions) {
    SatResult r = satisfiable(apply(g, c), bounds);
    if (r.status != SatStatus::Unsat) return false;
  }
  return true;
}

// forall premise -> exists exist. (one of the conclusions)
Tribool entails_some(const BuiltinConjunction& premise, const std::set<VarId>& exist,
                     const std::vector<BuiltinConjunction>& conclusions, const TheoryBounds& bounds) {
  if (conclusions.empty()) {
    return satisfiable(premise, bounds).status == SatStatus::Unsat ? Tribool::True : Tribool::False;
  }
  std::vector<Substitution> countermodels;
  for (const auto& c : conclusions) {
    Entailment e = entails(premise, exist, c, bounds);
    if (e.valid()) return Tribool::True;
    if (e.invalid()) countermodels.push_back(e.countermodel);
  }
  for (const auto& g : countermodels) {
    if (refutes_all(g, conclusions, bounds)) return Tribool::False;
  }
  return Tribool::Unknown;
}

Tribool directed_equiv(const State& s1, const State& s2, const TheoryBounds& bounds) {
  std::set<VarId> exist = vars_of(s2);
  for (VarId v : vars_of(s1)) exist.erase(v);
  std::vector<BuiltinConjunction> conclusions;
  for_each_injection(s2.user, s1.user, [&](const std::vector<std::size_t>& pick) {
    BuiltinConjunction c = pairwise_equations(s2.user, s1.user, pick);
    c.insert(c.end(), s2.builtins.begin(), s2.builtins.end());
    conclusions.push_back(std::move(c));
    return true;
  });
  return entails_some(s1.builtins, exist, conclusions, bounds);
}

}  // namespace

Applicability applicable(const State& state, const Rule& rule, const TheoryBounds& bounds) {
  Applicability out;
  auto [variant, ren] = disjoint_variant(rule);
  std::set<VarId> exist = vars_of(variant);
  for_each_injection(variant.head, state.user, [&](const std::vector<std::size_t>& pick) {
    BuiltinConjunction eqs = pairwise_equations(variant.head, state.user, pick);
    BuiltinConjunction goal = eqs;
    goal.insert(goal.end(), variant.guard.begin(), variant.guard.end());
    Entailment e = entails(state.builtins, exist, goal, bounds);
    if (e.valid()) {
      out.matches.push_back({variant, pick, eqs, e.witness});
    } else if (e.unknown()) {
      ++out.unknown;
    }
    return true;
  });
  return out;
}

StepResult step(const State& state, const Program& program, SelectionPolicy& policy, const TheoryBounds& bounds) {
  StepResult out;
  std::vector<std::pair<const Rule*, Match>> candidates;
  for (const auto& rule : program.rules) {
    Applicability a = applicable(state, rule, bounds);
    out.unknown += a.unknown;
    for (auto& m : a.matches) candidates.emplace_back(&rule, std::move(m));
    if (!policy.is_random() && !candidates.empty()) break;
  }
  if (candidates.empty()) return out;
  auto& [rule, m] = candidates[policy.pick(candidates.size())];

  Transition t;
  t.rule = rule->label;
  t.occurrences = m.occurrences;
  t.substitution = m.substitution;
  t.source = state;
  for (std::size_t i : m.occurrences) t.matched.push_back(state.user[i]);
  t.target.builtins = state.builtins;
  auto append = [&t](const BuiltinConjunction& c) { t.target.builtins.insert(t.target.builtins.end(), c.begin(), c.end()); };
  append(m.head_equations);
  append(m.variant.guard);
  append(m.variant.body_builtins);
  for (std::size_t i = 0; i < state.user.size(); ++i) {
    if (std::find(m.occurrences.begin(), m.occurrences.end(), i) == m.occurrences.end())
      t.target.user.push_back(state.user[i]);
  }
  t.target.user.insert(t.target.user.end(), m.variant.body_user.begin(), m.variant.body_user.end());
  out.transition = std::move(t);
  return out;
}

RunOutcome run(const State& goal, const Program& program, std::size_t fuel, SelectionPolicy policy,
               const TheoryBounds& bounds) {
  RunOutcome out;
  out.last = goal;
  SatResult s = satisfiable(goal.builtins, bounds);
  if (s.status == SatStatus::Unsat) {
    out.kind = RunOutcome::Kind::Failed;
    return out;
  }
  out.sat_unknown = s.status == SatStatus::Unknown;
  for (std::size_t n = 0; n < fuel; ++n) {
    StepResult r = step(out.last, program, policy, bounds);
    out.unknown_applicability += r.unknown;
    if (!r.transition) {
      out.kind = RunOutcome::Kind::Final;
      return out;
    }
    out.last = r.transition->target;
    out.trace.push_back(std::move(*r.transition));
    SatResult t = satisfiable(out.last.builtins, bounds);
    out.sat_unknown = t.status == SatStatus::Unknown;
    if (t.status == SatStatus::Unsat) {
      out.kind = RunOutcome::Kind::Failed;
      out.failed_step = out.trace.size();
      return out;
    }
  }
  // Fuel is spent; the state may still be final.
  SelectionPolicy probe = SelectionPolicy::textual();
  StepResult r = step(out.last, program, probe, bounds);
  out.kind = r.transition ? RunOutcome::Kind::FuelExhausted : RunOutcome::Kind::Final;
  return out;
}

Tribool state_equiv(const State& s1, const State& s2, const TheoryBounds& bounds) {
  if (!same_predicate_multiset(s1.user, s2.user)) return Tribool::False;
  Tribool a = directed_equiv(s1, s2, bounds);
  if (a == Tribool::False) return a;
  Tribool b = directed_equiv(s2, s1, bounds);
  if (b == Tribool::False) return b;
  return a == Tribool::True && b == Tribool::True ? Tribool::True : Tribool::Unknown;
}

Tribool contains(const State& small, const State& large, const TheoryBounds& bounds) {
  Renaming ren;
  State v;
  for (const auto& c : small.user) v.user.push_back(rename(ren, c));
  v.builtins = rename(ren, small.builtins);
  std::set<VarId> exist = vars_of(v);
  std::vector<BuiltinConjunction> conclusions;
  for_each_injection(v.user, large.user, [&](const std::vector<std::size_t>& pick) {
    BuiltinConjunction c = pairwise_equations(v.user, large.user, pick);
    c.insert(c.end(), v.builtins.begin(), v.builtins.end());
    conclusions.push_back(std::move(c));
    return true;
  });
  if (conclusions.empty()) return Tribool::False;
  return entails_some(large.builtins, exist, conclusions, bounds);
}

Tribool contains_strict(const State& small, const State& large, const TheoryBounds& bounds) {
  Tribool a = contains(small, large, bounds);
  if (a != Tribool::True) return a;
  Tribool b = contains(large, small, bounds);
  if (b == Tribool::True) return Tribool::False;
  if (b == Tribool::False) return Tribool::True;
  return Tribool::Unknown;
}

std::string trace_lines(const RunOutcome& r) {
  std::ostringstream os;
  for (std::size_t i = 0; i < r.trace.size(); ++i) {
    const auto& t = r.trace[i];
    SatResult s = satisfiable(t.target.builtins);
    os << "step " << i + 1 << ": " << t.rule << " on " << to_string(t.matched) << " => "
       << (t.target.user.empty() ? std::string("-") : to_string(t.target.user)) << " || ";
    if (s.status == SatStatus::Unsat) {
      os << "false";
    } else {
      os << to_string(s.solved.equations);
      BuiltinConjunction rest;
      for (const auto& a : t.target.builtins)
        if (a.kind != BuiltinKind::Eq) rest.push_back(apply(s.solved.equations, a));
      if (!rest.empty()) os << ", " << to_string(rest);
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace chrm
