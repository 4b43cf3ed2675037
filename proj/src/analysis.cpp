#include "chrm/analysis.hpp"

#include <algorithm>
#include <map>

namespace chrm {

const char* to_string(TerminationCase c) {
  switch (c) {
    case TerminationCase::GuardUnsat: return "guard-unsat";
    case TerminationCase::BodyUnsat: return "body-unsat";
    case TerminationCase::ImplicationRefuted: return "implication-refuted";
    case TerminationCase::InterpreterFinal: return "interpreter-final";
  }
  return "?";
}

const char* to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Misbehaves: return "misbehaves";
    case Verdict::Kind::Terminates: return "terminates";
    case Verdict::Kind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

BuiltinConjunction conj(std::initializer_list<const BuiltinConjunction*> parts) {
  BuiltinConjunction out;
  for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

RecursionShape require_linear_direct(const Rule& rule) {
  RecursionShape s = classify(rule);
  if (!s.linear_direct()) {
    throw NotLinearDirect("rule " + rule.label + " is not linear direct recursive: " + s.reason);
  }
  return s;
}

// Q is usually parsed on its own; its variables denote the rule's variables
// of the same name.
BuiltinConjunction align_to_rule(const BuiltinConjunction& q, const Rule& rule) {
  std::map<std::string, Term> by_name;
  for (const auto& v : ordered_vars(rule)) by_name.emplace(v.name(), v);
  Substitution s;
  for (const auto& v : [&] {
         std::vector<Term> vs;
         collect_vars(q, vs);
         return vs;
       }()) {
    auto it = by_name.find(v.name());
    if (it != by_name.end() && it->second != v) s.bind(v, it->second);
  }
  return chrm::apply(s, q);
}

// Builds premise, conclusion and the existential variables for a given Q.
ConditionReport assemble(const Rule& rule, const BuiltinConjunction& q_in) {
  const BuiltinConjunction q = align_to_rule(q_in, rule);
  ConditionReport r;
  r.rule = rule.label;
  r.q = q;
  r.premise = conj({&q, &rule.guard, &rule.body_builtins});
  Renaming ren;
  Rule v = rename(ren, rule);
  BuiltinConjunction qv = rename(ren, q);
  const auto& call = rule.body_user.front();
  const auto& head = v.head.front();
  for (std::size_t i = 0; i < call.args.size(); ++i) r.conclusion.push_back(BuiltinAtom::eq(call.args[i], head.args[i]));
  r.conclusion.insert(r.conclusion.end(), qv.begin(), qv.end());
  r.conclusion.insert(r.conclusion.end(), v.guard.begin(), v.guard.end());
  for (const auto& [id, t] : ren.mapping()) r.exist.push_back(t);
  std::sort(r.exist.begin(), r.exist.end());
  r.goal.user = {rule.head.front()};
  r.goal.builtins = conj({&rule.guard, &q});
  return r;
}

void check_implication(ConditionReport& r, const TheoryBounds& bounds) {
  std::set<VarId> exist;
  for (const auto& t : r.exist) exist.insert(t.var_id());
  r.implication = entails(r.premise, exist, r.conclusion, bounds);
}

}  // namespace

Verdict basic_condition(const Rule& rule, const TheoryBounds& bounds) {
  require_linear_direct(rule);
  Verdict v;
  v.report = assemble(rule, {});
  v.witness_goal = v.report.goal;

  SatResult guard = satisfiable(rule.guard, bounds);
  SatResult both = guard.status == SatStatus::Unsat ? guard : satisfiable(v.report.premise, bounds);
  v.report.existential = both.status;
  check_implication(v.report, bounds);
  if (both.status == SatStatus::Unsat) {
    v.kind = Verdict::Kind::Terminates;
    v.termination = guard.status == SatStatus::Unsat ? TerminationCase::GuardUnsat : TerminationCase::BodyUnsat;
    v.reason = guard.status == SatStatus::Unsat ? "guard unsatisfiable: the goal fails immediately"
                                                : "guard and body built-ins unsatisfiable: the first step fails";
    return v;
  }
  const Entailment& e = v.report.implication;
  if (both.status == SatStatus::Unknown) {
    v.kind = Verdict::Kind::Unknown;
    v.reason = "existential part undecided: " + both.reason;
    v.caveats.push_back(v.reason);
    return v;
  }
  switch (e.kind) {
    case Entailment::Kind::Valid:
      v.kind = Verdict::Kind::Misbehaves;
      v.reason = "basic misbehavior condition holds";
      break;
    case Entailment::Kind::Invalid:
      v.kind = Verdict::Kind::Terminates;
      v.termination = TerminationCase::ImplicationRefuted;
      v.countermodel = e.countermodel;
      v.reason = "implication refuted";
      break;
    case Entailment::Kind::Unknown:
      v.kind = Verdict::Kind::Unknown;
      v.reason = "implication undecided: " + e.note;
      v.caveats.push_back(v.reason);
      break;
  }
  return v;
}

Verdict general_condition(const Rule& rule, const BuiltinConjunction& q, const TheoryBounds& bounds) {
  require_linear_direct(rule);
  for (const auto& a : q) {
    if (a.kind == BuiltinKind::False) continue;
    try {
      check_well_formed(a);
    } catch (const IllFormed& e) {
      throw IllFormedQ(e.what());
    }
  }
  Verdict v;
  v.report = assemble(rule, q);
  v.witness_goal = v.report.goal;
  SatResult ex = satisfiable(v.report.premise, bounds);
  v.report.existential = ex.status;
  check_implication(v.report, bounds);
  if (ex.status != SatStatus::Sat) {
    v.kind = Verdict::Kind::Unknown;
    v.reason = ex.status == SatStatus::Unsat ? "existential part fails: Q, C, B_bi unsatisfiable"
                                             : "existential part undecided: " + ex.reason;
    if (ex.status == SatStatus::Unknown) v.caveats.push_back(v.reason);
    return v;
  }
  const Entailment& e = v.report.implication;
  switch (e.kind) {
    case Entailment::Kind::Valid:
      v.kind = Verdict::Kind::Misbehaves;
      v.reason = "general misbehavior condition holds";
      break;
    case Entailment::Kind::Invalid:
      v.kind = Verdict::Kind::Unknown;
      v.countermodel = e.countermodel;
      v.reason = "implication refuted; the condition is only sufficient";
      break;
    case Entailment::Kind::Unknown:
      v.kind = Verdict::Kind::Unknown;
      v.reason = "implication undecided: " + e.note;
      v.caveats.push_back(v.reason);
      break;
  }
  return v;
}

Verdict containment_verdict(const State& goal, const Rule& rule, const BuiltinConjunction& q,
                            const TheoryBounds& bounds) {
  Verdict base = q.empty() ? basic_condition(rule, bounds) : general_condition(rule, q, bounds);
  if (!base.misbehaves()) {
    throw PreconditionNotMet("misbehavior condition for rule " + rule.label + " with Q = " + to_string(q) +
                             " is not established");
  }
  Verdict v = base;
  v.witness_goal = goal;
  v.termination.reset();
  v.countermodel.reset();
  switch (contains(base.report.goal, goal, bounds)) {
    case Tribool::True:
      v.reason = "goal contains " + to_string(base.report.goal);
      return v;
    case Tribool::False:
      v.kind = Verdict::Kind::Unknown;
      v.reason = "goal does not contain " + to_string(base.report.goal);
      return v;
    case Tribool::Unknown:
      v.kind = Verdict::Kind::Unknown;
      v.reason = "containment in " + to_string(base.report.goal) + " undecided";
      v.caveats.push_back(v.reason);
      return v;
  }
  return v;
}

std::vector<BuiltinAtom> q_atom_pool(const Rule& rule, long offset_bound) {
  std::vector<Term> vs = ordered_vars(rule);
  std::vector<BuiltinAtom> pool;
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) pool.push_back(BuiltinAtom::eq(vs[i], vs[j]));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (i != j) pool.push_back(BuiltinAtom::ge(vs[i], vs[j]));
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j)
      if (i != j) pool.push_back(BuiltinAtom::gt(vs[i], vs[j]));
  for (long k = 1; k <= offset_bound; ++k)
    for (std::size_t i = 0; i < vs.size(); ++i)
      for (std::size_t j = 0; j < vs.size(); ++j)
        if (i != j) pool.push_back(BuiltinAtom::eq(vs[i], Term::successor(vs[j], static_cast<unsigned>(k))));
  for (const auto& v : vs) pool.push_back(BuiltinAtom::odd(v));
  for (const auto& v : vs) pool.push_back(BuiltinAtom::even(v));
  return pool;
}

std::vector<QCandidate> enumerate_q(const Rule& rule, std::size_t size_bound, long offset_bound,
                                    const TheoryBounds& bounds) {
  require_linear_direct(rule);
  std::vector<QCandidate> out;
  out.push_back({{}, basic_condition(rule, bounds), std::nullopt});
  std::vector<std::size_t> found;
  if (out.front().verdict.misbehaves()) found.push_back(0);

  const BuiltinConjunction context = conj({&rule.guard, &rule.body_builtins});
  const std::vector<BuiltinAtom> pool = q_atom_pool(rule, offset_bound);
  std::vector<std::size_t> idx;
  auto visit = [&](const BuiltinConjunction& q) {
    BuiltinConjunction premise = conj({&q, &context});
    if (satisfiable(premise, bounds).status != SatStatus::Sat) return;
    QCandidate c{q, general_condition(rule, q, bounds), std::nullopt};
    if (c.verdict.misbehaves()) {
      for (std::size_t f : found) {
        BuiltinConjunction earlier = conj({&out[f].q, &context});
        if (implies_builtins(premise, earlier, bounds).valid()) {
          c.subsumed_by = f;
          break;
        }
      }
      found.push_back(out.size());
    }
    out.push_back(std::move(c));
  };
  // Combinations in lexicographic order, smaller sizes first.
  for (std::size_t size = 1; size <= size_bound && size <= pool.size(); ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      BuiltinConjunction q;
      for (std::size_t i : idx) q.push_back(pool[i]);
      visit(q);
      std::size_t i = size;
      while (i > 0 && idx[i - 1] == pool.size() - size + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

GoalCheck check_goal(const Program& program, const State& goal, const CheckOptions& opts) {
  GoalCheck out;
  std::vector<std::string> caveats;
  auto try_contain = [&](const Rule& rule, const BuiltinConjunction& q) -> bool {
    Verdict v = containment_verdict(goal, rule, q, opts.bounds);
    caveats.insert(caveats.end(), v.caveats.begin(), v.caveats.end());
    if (!v.misbehaves()) return false;
    out.verdict = std::move(v);
    out.rule = rule.label;
    out.q = q;
    return true;
  };
  for (const auto& rule : program.rules) {
    RecursionShape shape = classify(rule);
    if (!shape.linear_direct()) continue;
    bool mentioned = std::any_of(goal.user.begin(), goal.user.end(), [&](const UserConstraint& c) {
      return c.predicate == shape.head_atom.predicate && c.arity() == shape.head_atom.arity();
    });
    if (!mentioned) continue;

    if (opts.q) {
      Verdict v = opts.q->empty() ? basic_condition(rule, opts.bounds) : general_condition(rule, *opts.q, opts.bounds);
      caveats.insert(caveats.end(), v.caveats.begin(), v.caveats.end());
      if (v.misbehaves() && try_contain(rule, *opts.q)) return out;
      continue;
    }
    Verdict basic = basic_condition(rule, opts.bounds);
    caveats.insert(caveats.end(), basic.caveats.begin(), basic.caveats.end());
    if (basic.misbehaves() && try_contain(rule, {})) return out;
    if (basic.terminates() && state_equiv(goal, basic.report.goal, opts.bounds) == Tribool::True) {
      out.verdict = basic;
      out.verdict.witness_goal = goal;
      out.rule = rule.label;
      out.q = BuiltinConjunction{};
      return out;
    }
    for (const auto& c : enumerate_q(rule, opts.q_size, opts.q_offset, opts.bounds)) {
      if (c.q.empty() || !c.verdict.misbehaves() || c.subsumed_by) continue;
      if (try_contain(rule, c.q)) return out;
    }
  }
  out.verdict.kind = Verdict::Kind::Unknown;
  out.verdict.witness_goal = goal;
  out.verdict.reason = "no misbehaving base goal found";
  out.verdict.caveats = std::move(caveats);
  return out;
}

CrossCheck cross_validate(const Program& program, const Rule& rule, const Verdict& v, std::size_t fuel,
                          const TheoryBounds& bounds) {
  CrossCheck c;
  if (v.unknown()) {
    c.note = "no verdict to check";
    return c;
  }
  State start = v.misbehaves() ? v.witness_goal : State{rule.guard, rule.head};
  c.outcome = run(start, program, fuel, SelectionPolicy::textual(), bounds);
  c.ran = true;
  if (v.misbehaves()) {
    c.consistent = c.outcome.kind != RunOutcome::Kind::Final;
    c.note = c.outcome.kind == RunOutcome::Kind::FuelExhausted ? "consistent with non-termination"
             : c.outcome.kind == RunOutcome::Kind::Failed      ? "failed"
                                                                 : "VIOLATION: reached a final state";
  } else {
    c.consistent = c.outcome.kind != RunOutcome::Kind::FuelExhausted;
    c.note = c.consistent ? std::string(to_string(c.outcome.kind)) : "VIOLATION: fuel exhausted";
  }
  return c;
}

std::string implication_text(const ConditionReport& r) {
  std::string xs;
  for (std::size_t i = 0; i < r.exist.size(); ++i) {
    if (i) xs += ",";
    xs += to_string(r.exist[i]);
  }
  return "forall ((" + to_string(r.premise) + ") -> exists " + xs + " (" + to_string(r.conclusion) + "))";
}

}  // namespace chrm
