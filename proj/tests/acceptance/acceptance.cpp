// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion-number]

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "chrm/analysis.hpp"
#include "chrm/fixtures.hpp"
#include "gen.hpp"
#include "helpers.hpp"
#include "lemmas.hpp"
#include "oracle.hpp"

using namespace chrm;
using testing_helpers::load_program;
using testing_helpers::recursive_rule;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void fail(const std::string& why) {
    if (!pass) detail << "; ";
    else detail.str("");
    pass = false;
    detail << why;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

State goal(const std::string& text) { return State::from_goal(parse_goal(text)); }

struct Proven {
  Program program;
  std::string rule;
  Verdict verdict;
};

// Verdicts of the first three criteria, kept for cross-validation.
std::vector<Proven>& proven() {
  static std::vector<Proven> v;
  return v;
}

void basic_corpus(Outcome& o) {
  struct Row {
    const char* program;
    Verdict::Kind expected;
  };
  const Row rows[] = {{"number1", Verdict::Kind::Terminates},  {"double", Verdict::Kind::Terminates},
                      {"c_prime", Verdict::Kind::Terminates},  {"c_notprime", Verdict::Kind::Terminates},
                      {"number2", Verdict::Kind::Misbehaves},  {"number3", Verdict::Kind::Misbehaves},
                      {"p_gt", Verdict::Kind::Misbehaves},     {"p_ge", Verdict::Kind::Misbehaves},
                      {"c_odd", Verdict::Kind::Misbehaves}};
  auto t0 = Clock::now();
  int match = 0, unknown = 0;
  for (const Row& r : rows) {
    Program p = load_program(r.program);
    Verdict v = basic_condition(recursive_rule(p));
    if (v.kind == r.expected) ++match;
    else o.fail(std::string(r.program) + " gave " + to_string(v.kind));
    if (v.unknown()) ++unknown;
    proven().push_back({p, recursive_rule(p).label, v});
  }
  double s = seconds_since(t0);
  if (s >= 5) o.fail("took " + std::to_string(s) + " s");
  if (o.pass) o.detail << match << "/9 verdicts, " << unknown << " unknown, " << s << " s";
}

void general_corpus(Outcome& o) {
  struct Row {
    const char* program;
    const char* q;
    Verdict::Kind expected;
  };
  const Row rows[] = {{"double", "X >= Y", Verdict::Kind::Misbehaves},
                      {"append", "L1' = L3", Verdict::Kind::Misbehaves},
                      {"c_notprime", "even(X), X = s(s(s(Y)))", Verdict::Kind::Misbehaves},
                      {"double", "X = Y", Verdict::Kind::Unknown},
                      {"c_notprime", "odd(X)", Verdict::Kind::Unknown}};
  auto t0 = Clock::now();
  int match = 0;
  for (const Row& r : rows) {
    Program p = load_program(r.program);
    Verdict v = general_condition(recursive_rule(p), parse_builtins(r.q));
    if (v.kind == r.expected) ++match;
    else o.fail(std::string(r.program) + " with " + r.q + " gave " + to_string(v.kind));
    if (!v.unknown()) proven().push_back({p, recursive_rule(p).label, v});
  }
  double s = seconds_since(t0);
  if (s >= 5) o.fail("took " + std::to_string(s) + " s");
  if (o.pass) o.detail << match << "/5 verdicts, " << s << " s";
}

void containment_corpus(Outcome& o) {
  struct Row {
    const char* program;
    const char* goal;
    const char* q;
  };
  const Row rows[] = {{"p_ge", "p(X,Y), X = Y", ""},
                      {"p_ge", "p(X,Y), p(Y,X)", ""},
                      {"p_ge", "p(X,Y), X < Y", ""},
                      {"double", "double(X,Y), X = s(X1), X = Y", "X >= Y"}};
  int match = 0;
  for (const Row& r : rows) {
    Program p = load_program(r.program);
    try {
      Verdict v = containment_verdict(goal(r.goal), recursive_rule(p), parse_builtins(r.q));
      if (v.misbehaves()) ++match;
      else o.fail(std::string(r.goal) + " gave " + to_string(v.kind) + ": " + v.reason);
      proven().push_back({p, recursive_rule(p).label, v});
    } catch (const PreconditionNotMet& e) {
      o.fail(e.what());
    }
  }
  if (o.pass) o.detail << match << "/4 goals";
}

void cross_validation(Outcome& o) {
  if (proven().empty()) {
    basic_corpus(o);
    general_corpus(o);
    containment_corpus(o);
    o.pass = true;
    o.detail.str("");
  }
  int checked = 0, violations = 0;
  for (const auto& pv : proven()) {
    const Rule& rule = *pv.program.find(pv.rule);
    if (pv.verdict.misbehaves()) {
      RunOutcome r = run(pv.verdict.witness_goal, pv.program, 100);
      ++checked;
      if (r.kind == RunOutcome::Kind::Final) {
        ++violations;
        o.fail("final state for " + to_string(pv.verdict.witness_goal));
      }
    } else if (pv.verdict.terminates()) {
      RunOutcome r = run(State{rule.guard, rule.head}, pv.program, 5);
      ++checked;
      if (r.kind == RunOutcome::Kind::FuelExhausted) {
        ++violations;
        o.fail("no halt within 5 steps for " + to_string(rule));
      }
    }
  }
  if (o.pass) o.detail << checked << " verdicts run, " << violations << " violations";
}

void interpreter_ground(Outcome& o) {
  Program dbl = load_program("double");
  RunOutcome d = run(goal("double(s(s(0)),Y)"), dbl, 100);
  bool four = false;
  if (d.kind == RunOutcome::Kind::Final) {
    SatResult s = satisfiable(d.last.builtins);
    for (const auto& [id, e] : s.solved.equations)
      if (e.var.name() == "Y" && e.value == Term::numeral(4)) four = true;
  }
  if (!four) o.fail("double(s(s(0)),Y) did not end with Y = s(s(s(s(0))))");

  RunOutcome p = run(goal("p(X,Y)"), load_program("p_gt"), 100);
  if (p.kind != RunOutcome::Kind::Failed || p.failed_step != 2)
    o.fail("p/> gave " + std::string(to_string(p.kind)) + " at step " + std::to_string(p.failed_step));

  Program c = load_program("c_prime");
  std::ostringstream steps;
  for (unsigned x : {2u, 3u, 5u, 7u, 11u}) {
    State g{{BuiltinAtom::prime(Term::numeral(x))}, {UserConstraint{"c", {Term::numeral(x)}}}};
    RunOutcome r = run(g, c, 100);
    steps << (x == 2 ? "" : ",") << x << ":" << r.trace.size();
    if (r.kind != RunOutcome::Kind::Final || r.trace.size() > 2)
      o.fail("c/prime X=" + std::to_string(x) + " took " + std::to_string(r.trace.size()) + " recursive steps (" +
             to_string(r.kind) + ")");
  }
  if (o.pass) o.detail << "double Y=4, p/> fails at step 2, c/prime steps " << steps.str();
  else o.detail << " [c/prime steps " << steps.str() << "]";
}

void lemma_suites(Outcome& o) {
  auto t0 = Clock::now();
  lemmas::Stats l1, l2, l3;
  for (const char* n : {"double", "append", "number1", "number2", "number3", "p_gt", "p_ge", "c_odd", "c_prime",
                        "c_notprime", "base_only"})
    lemmas::most_general_state(load_program(n), l1);
  auto corpus = load_corpus(CHRM_FIXTURE_DIR);
  for (const auto& c : corpus) {
    Program p = parse_program(c.program_text);
    lemmas::accumulation(run(State::from_goal(parse_goal(c.goal)), p, c.fuel), l2);
  }
  std::size_t trials = lemmas::monotonicity(lemmas::corpus_states(corpus, 3), 500, 2024, l3);
  double s = seconds_since(t0);
  for (auto* st : {&l1, &l2, &l3})
    for (const auto& f : st->failures) o.fail(f);
  if (trials < 500) o.fail("only " + std::to_string(trials) + " monotonicity trials");
  if (s >= 30) o.fail("took " + std::to_string(s) + " s");
  if (o.pass)
    o.detail << "most-general " << l1.checks << ", accumulation " << l2.checks << ", monotonicity " << l3.checks
             << " of " << trials << " trials satisfiable, 0 failures, " << s << " s";
}

void oracle_agreement(Outcome& o) {
  std::mt19937 rng(7);
  int n = 0, unknown = 0, agree = 0, disagree = 0;
  while (n < 1000) {
    gen::Instance in = gen::random_instance(rng);
    if (!oracle::satisfiable(in.premise, 8)) continue;
    ++n;
    Entailment e = entails(in.premise, in.exist, in.conclusion);
    if (e.unknown()) {
      ++unknown;
      continue;
    }
    oracle::Verdict ov = oracle::implication(in.premise, in.exist, in.conclusion, 8, 20);
    if (ov.valid == e.valid()) {
      ++agree;
    } else {
      ++disagree;
      if (disagree <= 3)
        o.fail("disagreement on " + to_string(in.premise) + " -> " + to_string(in.conclusion) + ": symbolic " +
               to_string(e.kind));
    }
  }
  double rate = static_cast<double>(unknown) / n;
  if (disagree > 3) o.fail(std::to_string(disagree) + " disagreements in total");
  if (rate >= 0.2) o.fail("unknown rate " + std::to_string(rate));
  if (o.pass) o.detail << n << " instances, " << agree << " agree, 0 disagree, unknown rate " << rate;
}

void q_enumeration(Outcome& o) {
  struct Row {
    const char* program;
    std::vector<std::string> accepted;
  };
  const Row rows[] = {{"double", {"X >= Y"}}, {"append", {"L1' = L3", "L3 = L1'"}}};
  for (const Row& r : rows) {
    Program p = load_program(r.program);
    auto t0 = Clock::now();
    auto cands = enumerate_q(recursive_rule(p), 1, 2);
    double s = seconds_since(t0);
    bool found = false;
    for (const auto& c : cands)
      for (const auto& a : r.accepted)
        if (c.verdict.misbehaves() && to_string(c.q) == a) found = true;
    if (!found) o.fail(std::string(r.program) + ": witness not among Misbehaves candidates");
    if (s >= 60) o.fail(std::string(r.program) + " took " + std::to_string(s) + " s");
    if (found) o.detail << (r.program == std::string("double") ? "" : ", ") << r.program << " " << r.accepted[0]
                        << " found among " << cands.size() << " in " << s << " s";
  }
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> check;
  };
  const std::vector<Criterion> criteria = {
      {"basic condition corpus", basic_corpus},
      {"general condition corpus", general_corpus},
      {"containment corpus", containment_corpus},
      {"cross-validation soundness", cross_validation},
      {"interpreter ground checks", interpreter_ground},
      {"lemma property suites", lemma_suites},
      {"entailment oracle agreement", oracle_agreement},
      {"Q enumeration recovers witnesses", q_enumeration},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    auto t0 = Clock::now();
    try {
      criteria[i].check(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << i + 1 << " [" << criteria[i].name << "]: " << (o.pass ? "PASS" : "FAIL") << " ("
              << o.detail.str() << ") " << seconds_since(t0) << " s" << std::endl;
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
