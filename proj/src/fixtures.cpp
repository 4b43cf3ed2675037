#include "chrm/fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace chrm {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw FixtureError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Rule& find_rule(const Program& p, const std::string& label) {
  for (const auto& r : p.rules)
    if (r.label == label) return r;
  throw FixtureError("no rule named " + label);
}

}  // namespace

Verdict::Kind parse_verdict_kind(const std::string& s) {
  if (s == "misbehaves") return Verdict::Kind::Misbehaves;
  if (s == "terminates") return Verdict::Kind::Terminates;
  if (s == "unknown") return Verdict::Kind::Unknown;
  throw FixtureError("bad verdict kind: " + s);
}

RunOutcome::Kind parse_run_kind(const std::string& s) {
  if (s == "final") return RunOutcome::Kind::Final;
  if (s == "failed") return RunOutcome::Kind::Failed;
  if (s == "fuel-exhausted") return RunOutcome::Kind::FuelExhausted;
  throw FixtureError("bad run outcome: " + s);
}

FixtureCase parse_case(const std::string& text, const std::filesystem::path& dir, const std::string& name) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto colon = t.find(':');
    if (colon == std::string::npos) throw FixtureError(name + ":" + std::to_string(n) + ": expected 'key: value'");
    std::string key = trim(t.substr(0, colon));
    if (kv.count(key)) throw FixtureError(name + ":" + std::to_string(n) + ": duplicate key " + key);
    kv[key] = trim(t.substr(colon + 1));
  }
  auto take = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw FixtureError(name + ": missing key " + key);
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto take_opt = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  FixtureCase c;
  c.name = name;
  c.citation = take("citation");
  c.program_file = take("program");
  c.program_text = read_file(dir / c.program_file);
  c.rule = take_opt("rule");
  c.goal = take("goal");
  c.q = take_opt("q");
  c.expect_verdict = parse_verdict_kind(take("expect_verdict"));
  c.expect_run = parse_run_kind(take("expect_run"));
  if (auto s = take_opt("expect_failed_step")) c.expect_failed_step = std::stoul(*s);
  if (auto s = take_opt("fuel")) c.fuel = std::stoul(*s);
  c.provenance = take("provenance");
  if (c.provenance != "example" && c.provenance != "derived")
    throw FixtureError(name + ": provenance must be 'example' or 'derived'");
  if (!kv.empty()) throw FixtureError(name + ": unknown key " + kv.begin()->first);
  return c;
}

std::vector<FixtureCase> load_corpus(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.path().extension() == ".case") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<FixtureCase> out;
  for (const auto& f : files) out.push_back(parse_case(read_file(f), dir, f.stem().string()));
  return out;
}

CaseResult evaluate(const FixtureCase& c, const TheoryBounds& bounds) {
  CaseResult r;
  r.program = parse_program(c.program_text);
  State goal = State::from_goal(parse_goal(c.goal));
  std::optional<BuiltinConjunction> q;
  if (c.q) q = parse_builtins(*c.q);
  if (c.rule) {
    const Rule& rule = find_rule(r.program, *c.rule);
    r.verdict = q && !q->empty() ? general_condition(rule, *q, bounds) : basic_condition(rule, bounds);
  } else {
    CheckOptions opts;
    opts.q = q;
    opts.bounds = bounds;
    r.verdict = check_goal(r.program, goal, opts).verdict;
  }
  r.outcome = run(goal, r.program, c.fuel, SelectionPolicy::textual(), bounds);
  r.verdict_ok = r.verdict.kind == c.expect_verdict;
  r.run_ok = r.outcome.kind == c.expect_run &&
             (!c.expect_failed_step || r.outcome.failed_step == *c.expect_failed_step);
  return r;
}

}  // namespace chrm
