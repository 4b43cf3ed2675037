#include <gtest/gtest.h>

#include <map>

#include "chrm/fixtures.hpp"

using namespace chrm;

namespace {

const std::vector<FixtureCase>& corpus() {
  static const std::vector<FixtureCase> c = load_corpus(CHRM_FIXTURE_DIR);
  return c;
}

const FixtureCase* find_case(const std::string& name) {
  for (const auto& c : corpus())
    if (c.name == name) return &c;
  return nullptr;
}

std::size_t count_prefix(const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& c : corpus())
    if (c.name.rfind(prefix, 0) == 0) ++n;
  return n;
}

}  // namespace

TEST(Corpus, Coverage) {
  EXPECT_GE(corpus().size(), 18u);
  EXPECT_GE(count_prefix("intro_double"), 3u);
  EXPECT_GE(count_prefix("number_"), 3u);
  EXPECT_GE(count_prefix("double1"), 1u);
  EXPECT_GE(count_prefix("notrecursive1"), 1u);
  EXPECT_GE(count_prefix("prime_"), 2u);
  EXPECT_GE(count_prefix("prime1_"), 3u);
  EXPECT_GE(count_prefix("append_"), 2u);
  EXPECT_GE(count_prefix("notrecursive2_"), 5u);
  EXPECT_GE(count_prefix("double_q_"), 2u);
}

TEST(Corpus, EveryCaseCitedAndTagged) {
  for (const auto& c : corpus()) {
    EXPECT_FALSE(c.citation.empty()) << c.name;
    EXPECT_TRUE(c.provenance == "example" || c.provenance == "derived") << c.name;
    EXPECT_FALSE(c.program_text.empty()) << c.name;
  }
}

TEST(Corpus, NamedCases) {
  const FixtureCase* n = find_case("number_guard_swapped");
  ASSERT_NE(n, nullptr);
  EXPECT_EQ(n->goal, "number(X), Y = s(X)");
  EXPECT_EQ(n->expect_verdict, Verdict::Kind::Misbehaves);
  EXPECT_EQ(n->expect_run, RunOutcome::Kind::FuelExhausted);

  const FixtureCase* o = find_case("prime_odd");
  ASSERT_NE(o, nullptr);
  EXPECT_EQ(o->goal, "c(X), odd(X)");
  EXPECT_EQ(o->expect_verdict, Verdict::Kind::Misbehaves);

  const FixtureCase* f = find_case("intro_double_zero_fail");
  ASSERT_NE(f, nullptr);
  EXPECT_EQ(f->expect_run, RunOutcome::Kind::Failed);
}

TEST(Corpus, EndToEnd) {
  for (const auto& c : corpus()) {
    CaseResult r = evaluate(c);
    EXPECT_TRUE(r.verdict_ok) << c.name << ": got " << to_string(r.verdict.kind) << " (" << r.verdict.reason << ")";
    EXPECT_TRUE(r.run_ok) << c.name << ": got " << to_string(r.outcome.kind) << " after " << r.outcome.trace.size();
  }
}

TEST(CaseFormat, ParsesKeys) {
  FixtureCase c = parse_case(
      "# comment\n"
      "citation: test\n"
      "program: p_gt.chr\n"
      "rule: rule1\n"
      "goal: p(X,Y)\n"
      "expect_verdict: misbehaves\n"
      "expect_run: failed\n"
      "expect_failed_step: 2\n"
      "fuel: 7\n"
      "provenance: derived\n",
      CHRM_FIXTURE_DIR, "t");
  EXPECT_EQ(c.rule, "rule1");
  EXPECT_EQ(c.fuel, 7u);
  EXPECT_EQ(c.expect_failed_step, 2u);
  EXPECT_TRUE(evaluate(c).ok());
}

TEST(CaseFormat, Malformed) {
  const std::string base = "citation: x\nprogram: p_gt.chr\ngoal: p(X,Y)\nexpect_run: final\nprovenance: example\n";
  EXPECT_THROW(parse_case(base, CHRM_FIXTURE_DIR, "t"), FixtureError);  // no expect_verdict
  EXPECT_THROW(parse_case(base + "expect_verdict: maybe\n", CHRM_FIXTURE_DIR, "t"), FixtureError);
  EXPECT_THROW(parse_case(base + "expect_verdict: unknown\ncolour: red\n", CHRM_FIXTURE_DIR, "t"), FixtureError);
  EXPECT_THROW(parse_case(base + "expect_verdict: unknown\nno colon here\n", CHRM_FIXTURE_DIR, "t"), FixtureError);
  EXPECT_THROW(parse_case(base + "expect_verdict: unknown\ngoal: p(X,X)\n", CHRM_FIXTURE_DIR, "t"), FixtureError);
  EXPECT_THROW(parse_case("citation: x\nprogram: missing.chr\ngoal: p\nexpect_verdict: unknown\nexpect_run: final\n"
                          "provenance: example\n",
                          CHRM_FIXTURE_DIR, "t"),
               FixtureError);
}
