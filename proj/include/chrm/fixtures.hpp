#pragma once

// Fixture corpus: example programs with goals and expected outcomes, stored
// as `.case` files next to the `.chr` programs they refer to.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chrm/analysis.hpp"
#include "chrm/semantics.hpp"

namespace chrm {

class FixtureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FixtureCase {
  std::string name;       // file stem
  std::string citation;   // example the case reproduces
  std::string program_file;
  std::string program_text;
  std::optional<std::string> rule;  // set: judge the rule's condition, not the goal
  std::string goal;
  std::optional<std::string> q;
  Verdict::Kind expect_verdict = Verdict::Kind::Unknown;
  RunOutcome::Kind expect_run = RunOutcome::Kind::Final;
  std::optional<std::size_t> expect_failed_step;
  std::size_t fuel = 100;
  std::string provenance;  // "example" or "derived"
};

/// Parses one case file. `dir` resolves the program path.
FixtureCase parse_case(const std::string& text, const std::filesystem::path& dir, const std::string& name);

/// All `.case` files in `dir`, sorted by name.
std::vector<FixtureCase> load_corpus(const std::filesystem::path& dir);

struct CaseResult {
  Program program;
  Verdict verdict;
  RunOutcome outcome;
  bool verdict_ok = false;
  bool run_ok = false;

  bool ok() const { return verdict_ok && run_ok; }
};

/// Analyzes and runs a case. With `rule` set the verdict is the rule's
/// basic or general condition; otherwise it is check_goal on the goal.
CaseResult evaluate(const FixtureCase& c, const TheoryBounds& bounds = {});

Verdict::Kind parse_verdict_kind(const std::string& s);
RunOutcome::Kind parse_run_kind(const std::string& s);

}  // namespace chrm
