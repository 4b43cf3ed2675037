#include <gtest/gtest.h>

#include "chrm/analysis.hpp"
#include "helpers.hpp"

using namespace chrm;
using testing_helpers::load_program;
using testing_helpers::recursive_rule;

namespace {

State goal(const std::string& text) { return State::from_goal(parse_goal(text)); }

Verdict basic(const std::string& program) { return basic_condition(recursive_rule(load_program(program))); }

}  // namespace

TEST(BasicCondition, NumberGuardTerminates) {
  Program p = load_program("number1");
  Verdict v = basic_condition(p.rules[0]);
  ASSERT_TRUE(v.terminates());
  EXPECT_EQ(v.termination, TerminationCase::ImplicationRefuted);
  ASSERT_TRUE(v.countermodel);
  Term y = p.rules[0].body_user[0].args[0];
  EXPECT_EQ(v.countermodel->apply(y), Term::numeral(0));
}

TEST(BasicCondition, ExampleCorpus) {
  for (const char* n : {"number1", "double", "c_prime", "c_notprime", "append"}) {
    Verdict v = basic(n);
    EXPECT_TRUE(v.terminates()) << n << ": " << v.reason;
    EXPECT_EQ(v.termination, TerminationCase::ImplicationRefuted) << n;
  }
  for (const char* n : {"number2", "number3", "p_gt", "p_ge", "c_odd"}) {
    Verdict v = basic(n);
    EXPECT_TRUE(v.misbehaves()) << n << ": " << v.reason;
    EXPECT_EQ(v.report.existential, SatStatus::Sat);
    EXPECT_TRUE(v.report.implication.valid());
  }
}

TEST(BasicCondition, GuardAndBodyFailure) {
  Program p = parse_program(
      "g @ q(X) <=> X = 0, X = s(Y) | q(Y).\n"
      "b @ r(X) <=> X = 0 | X = s(Y), r(Y).\n");
  Verdict g = basic_condition(p.rules[0]);
  ASSERT_TRUE(g.terminates());
  EXPECT_EQ(g.termination, TerminationCase::GuardUnsat);
  Verdict b = basic_condition(p.rules[1]);
  ASSERT_TRUE(b.terminates());
  EXPECT_EQ(b.termination, TerminationCase::BodyUnsat);
}

TEST(BasicCondition, RejectsOtherShapes) {
  Program p = load_program("double");
  EXPECT_THROW(basic_condition(p.rules[0]), NotLinearDirect);
}

TEST(BasicCondition, ReportShape) {
  Program p = load_program("double");
  const Rule& r = p.rules[1];
  Verdict v = basic_condition(r);
  BuiltinConjunction premise = r.guard;
  premise.insert(premise.end(), r.body_builtins.begin(), r.body_builtins.end());
  EXPECT_EQ(v.report.premise, premise);
  // B_ud = H' pairwise, then C'.
  ASSERT_EQ(v.report.conclusion.size(), 2u + r.guard.size());
  EXPECT_EQ(v.report.conclusion[0].args[0], r.body_user[0].args[0]);
  std::set<VarId> rule_vars = vars_of(r);
  for (const auto& x : v.report.exist) EXPECT_EQ(rule_vars.count(x.var_id()), 0u);
  EXPECT_EQ(v.report.exist.size(), rule_vars.size());
  EXPECT_EQ(to_string(v.report.goal), "[double(X,Y) || X = s(X1)]");
}

TEST(BasicCondition, ImplicationText) {
  Program p = load_program("p_ge");
  std::string t = implication_text(basic_condition(p.rules[0]).report);
  EXPECT_EQ(t.rfind("forall ((X >= Y) -> exists ", 0), 0u) << t;
}

TEST(GeneralCondition, ExampleCorpus) {
  struct Row {
    const char* program;
    const char* q;
    Verdict::Kind expected;
  };
  for (const Row& row : {Row{"double", "X >= Y", Verdict::Kind::Misbehaves},
                         Row{"double", "X = Y", Verdict::Kind::Unknown},
                         Row{"append", "L1' = L3", Verdict::Kind::Misbehaves},
                         Row{"c_notprime", "odd(X)", Verdict::Kind::Unknown},
                         Row{"c_notprime", "even(X), X = s(s(s(Y)))", Verdict::Kind::Misbehaves}}) {
    Program p = load_program(row.program);
    Verdict v = general_condition(recursive_rule(p), parse_builtins(row.q));
    EXPECT_EQ(v.kind, row.expected) << row.program << " with " << row.q << ": " << v.reason;
    if (row.expected == Verdict::Kind::Unknown) {
      EXPECT_TRUE(v.report.implication.invalid()) << row.q;
      EXPECT_FALSE(v.terminates());
    }
  }
}

TEST(GeneralCondition, QSharesRuleVariables) {
  Program p = load_program("double");
  const Rule& r = recursive_rule(p);
  Verdict v = general_condition(r, parse_builtins("X >= Y"));
  std::set<VarId> rule_vars = vars_of(r);
  for (VarId id : vars_of(v.report.q)) EXPECT_EQ(rule_vars.count(id), 1u);
  EXPECT_EQ(to_string(v.report.goal), "[double(X,Y) || X = s(X1), X >= Y]");
}

TEST(GeneralCondition, UnsatisfiableExistentialPart) {
  Program p = load_program("double");
  Verdict v = general_condition(recursive_rule(p), parse_builtins("X = 0"));
  EXPECT_TRUE(v.unknown());
  EXPECT_EQ(v.report.existential, SatStatus::Unsat);
}

TEST(GeneralCondition, IllFormedQ) {
  Program p = load_program("append");
  const Rule& r = recursive_rule(p);
  BuiltinConjunction q{BuiltinAtom::odd(Term::compound("cons", {Term::var("A"), Term::var("B")}))};
  EXPECT_THROW(general_condition(r, q), IllFormedQ);
}

// With Q = true the general condition reduces to the basic one.
TEST(GeneralCondition, TrueReducesToBasic) {
  for (const char* n : {"number1", "number2", "number3", "double", "p_gt", "p_ge", "c_odd", "c_prime", "c_notprime",
                        "append"}) {
    Program p = load_program(n);
    const Rule& r = recursive_rule(p);
    Verdict b = basic_condition(r);
    Verdict g = general_condition(r, {});
    EXPECT_EQ(b.misbehaves(), g.misbehaves()) << n;
    EXPECT_EQ(b.report.implication.kind, g.report.implication.kind) << n;
    EXPECT_EQ(to_string(b.report.premise), to_string(g.report.premise)) << n;
    EXPECT_EQ(b.report.conclusion.size(), g.report.conclusion.size()) << n;
  }
}

TEST(Containment, ExampleCorpus) {
  Program pge = load_program("p_ge");
  for (const char* g : {"p(X,Y), X = Y", "p(X,Y), p(Y,X)", "p(X,Y), X < Y"}) {
    Verdict v = containment_verdict(goal(g), pge.rules[0], {});
    EXPECT_TRUE(v.misbehaves()) << g << ": " << v.reason;
  }
  Program dbl = load_program("double");
  Verdict v = containment_verdict(goal("double(X,Y), X = s(X1), X = Y"), recursive_rule(dbl), parse_builtins("X >= Y"));
  EXPECT_TRUE(v.misbehaves()) << v.reason;
}

TEST(Containment, NotContained) {
  Program pge = load_program("p_ge");
  Verdict v = containment_verdict(goal("q(X)"), pge.rules[0], {});
  EXPECT_TRUE(v.unknown());
}

TEST(Containment, PreconditionRequired) {
  Program dbl = load_program("double");
  EXPECT_THROW(containment_verdict(goal("double(X,Y), X = s(X1), X = Y"), recursive_rule(dbl), parse_builtins("X = Y")),
               PreconditionNotMet);
  EXPECT_THROW(containment_verdict(goal("double(X,Y)"), recursive_rule(dbl), {}), PreconditionNotMet);
}

// Containment survives adding satisfiable built-ins to the goal.
TEST(Containment, Monotone) {
  Program pge = load_program("p_ge");
  Program dbl = load_program("double");
  const char* extras[] = {"X = 0", "Y = s(Z)", "X > Y", "odd(X)", "X \\= Y", "X = s(s(Y))", "even(Y), Y >= Z"};
  for (const char* extra : extras) {
    State g = goal(std::string("p(X,Y), X = Y, ") + extra);
    if (satisfiable(g.builtins).status != SatStatus::Sat) continue;
    EXPECT_TRUE(containment_verdict(g, pge.rules[0], {}).misbehaves()) << extra;
    State d = goal(std::string("double(X,Y), X = s(X1), X = Y, ") + extra);
    if (satisfiable(d.builtins).status != SatStatus::Sat) continue;
    EXPECT_TRUE(containment_verdict(d, recursive_rule(dbl), parse_builtins("X >= Y")).misbehaves()) << extra;
  }
}

TEST(EnumerateQ, DoubleFindsGe) {
  Program p = load_program("double");
  auto cands = enumerate_q(recursive_rule(p), 1, 0);
  ASSERT_FALSE(cands.empty());
  EXPECT_TRUE(cands[0].q.empty());
  EXPECT_TRUE(cands[0].verdict.terminates());
  bool found = false;
  for (const auto& c : cands)
    if (to_string(c.q) == "X >= Y" && c.verdict.misbehaves() && !c.subsumed_by) found = true;
  EXPECT_TRUE(found);
}

TEST(EnumerateQ, AppendFindsListEquation) {
  Program p = load_program("append");
  auto cands = enumerate_q(recursive_rule(p), 1, 0);
  bool found = false;
  for (const auto& c : cands) {
    std::string q = to_string(c.q);
    if ((q == "L1' = L3" || q == "L3 = L1'") && c.verdict.misbehaves()) found = true;
  }
  EXPECT_TRUE(found);
}

TEST(EnumerateQ, NumberStillEnumerated) {
  Program p = load_program("number1");
  auto cands = enumerate_q(p.rules[0], 1, 2);
  ASSERT_GT(cands.size(), 1u);
  EXPECT_TRUE(cands[0].q.empty());
  EXPECT_TRUE(cands[0].verdict.terminates());
}

TEST(EnumerateQ, CandidatesAreSatisfiableAndSubsumptionSound) {
  Program p = load_program("double");
  const Rule& r = recursive_rule(p);
  auto cands = enumerate_q(r, 1, 2);
  BuiltinConjunction ctx = r.guard;
  ctx.insert(ctx.end(), r.body_builtins.begin(), r.body_builtins.end());
  for (std::size_t i = 1; i < cands.size(); ++i) {
    const auto& c = cands[i];
    BuiltinConjunction premise = c.q;
    premise.insert(premise.end(), ctx.begin(), ctx.end());
    EXPECT_EQ(satisfiable(premise).status, SatStatus::Sat) << to_string(c.q);
    if (!c.subsumed_by) continue;
    ASSERT_LT(*c.subsumed_by, i);
    const auto& earlier = cands[*c.subsumed_by];
    EXPECT_TRUE(earlier.verdict.misbehaves());
    BuiltinConjunction weaker = earlier.q;
    weaker.insert(weaker.end(), ctx.begin(), ctx.end());
    EXPECT_TRUE(implies_builtins(premise, weaker).valid()) << to_string(c.q) << " vs " << to_string(earlier.q);
  }
}

TEST(EnumerateQ, PoolShape) {
  Program p = load_program("double");
  auto pool = q_atom_pool(recursive_rule(p), 1);
  // 4 variables: 6 equations, 12 >=, 12 >, 12 offset equations, 4 odd, 4 even.
  EXPECT_EQ(pool.size(), 50u);
  for (const auto& a : pool) {
    EXPECT_NE(a.kind, BuiltinKind::Prime);
    EXPECT_NE(a.kind, BuiltinKind::NotPrime);
  }
}

TEST(CheckGoal, NotRecursiveTwoFailingGoal) {
  GoalCheck c = check_goal(load_program("p_ge"), goal("p(X,Y), X < Y"));
  EXPECT_TRUE(c.verdict.misbehaves());
  ASSERT_TRUE(c.q);
  EXPECT_TRUE(c.q->empty());
}

TEST(CheckGoal, WithGivenQ) {
  CheckOptions opts;
  opts.q = parse_builtins("X >= Y");
  GoalCheck c = check_goal(load_program("double"), goal("double(X,Y), X = s(X1), X = Y"), opts);
  EXPECT_TRUE(c.verdict.misbehaves()) << c.verdict.reason;
  EXPECT_EQ(c.rule, "rec");
}

TEST(CheckGoal, GivenQFailsWithoutSearch) {
  CheckOptions opts;
  opts.q = parse_builtins("X = Y");
  GoalCheck c = check_goal(load_program("double"), goal("double(X,Y), X = s(X1), X = Y"), opts);
  EXPECT_TRUE(c.verdict.unknown());
  EXPECT_EQ(c.verdict.reason, "no misbehaving base goal found");
}

TEST(CheckGoal, NumberHasNoProof) {
  GoalCheck c = check_goal(load_program("number1"), goal("number(X), X = s(Y)"));
  EXPECT_FALSE(c.verdict.misbehaves());
}

TEST(CheckGoal, MostGeneralGoalTerminates) {
  GoalCheck c = check_goal(load_program("double"), goal("double(A,B), A = s(C)"));
  EXPECT_TRUE(c.verdict.terminates());
}

namespace {

struct Case {
  const char* program;
  const char* q;
};

std::vector<std::pair<Program, Verdict>> corpus_verdicts() {
  std::vector<std::pair<Program, Verdict>> out;
  for (const char* n : {"number1", "number2", "number3", "double", "p_gt", "p_ge", "c_odd", "c_prime", "c_notprime",
                        "append"}) {
    Program p = load_program(n);
    out.emplace_back(p, basic_condition(recursive_rule(p)));
  }
  for (const Case& c : {Case{"double", "X >= Y"}, Case{"append", "L1' = L3"},
                        Case{"c_notprime", "even(X), X = s(s(s(Y)))"}}) {
    Program p = load_program(c.program);
    out.emplace_back(p, general_condition(recursive_rule(p), parse_builtins(c.q)));
  }
  return out;
}

}  // namespace

TEST(CrossValidation, NoViolations) {
  for (const auto& [p, v] : corpus_verdicts()) {
    CrossCheck c = cross_validate(p, recursive_rule(p), v, 100);
    EXPECT_TRUE(c.consistent) << to_string(recursive_rule(p)) << ": " << c.note;
    if (v.misbehaves()) EXPECT_NE(c.outcome.kind, RunOutcome::Kind::Final);
    if (v.terminates()) EXPECT_LE(c.outcome.trace.size(), 5u);
  }
}

// Along a misbehaving goal's computation each state is failed or admits the
// recursive rule again.
TEST(CrossValidation, ProofStructureReplay) {
  for (const auto& [p, v] : corpus_verdicts()) {
    if (!v.misbehaves()) continue;
    const Rule& r = recursive_rule(p);
    RunOutcome out = run(v.witness_goal, p, 15);
    std::vector<State> states{v.witness_goal};
    for (const auto& t : out.trace) states.push_back(t.target);
    for (const auto& s : states) {
      if (satisfiable(s.builtins).status == SatStatus::Unsat) continue;
      EXPECT_FALSE(applicable(s, r).matches.empty()) << to_string(r) << " at " << to_string(s);
    }
  }
}
