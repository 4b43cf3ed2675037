// chr-misbehave: misbehavior analysis and reference execution of CHR programs.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "chrm/analysis.hpp"
#include "chrm/report.hpp"

using namespace chrm;

namespace {

constexpr int kParseError = 2;
constexpr int kStrictUnknown = 3;

struct Flags {
  std::string file;
  std::string goal;
  std::string q;
  bool has_q = false;
  std::size_t q_size = 1;
  long q_offset = 2;
  std::size_t fuel = 100;
  long depth_counter = TheoryBounds{}.counter_depth;
  long depth_witness = TheoryBounds{}.witness_depth;
  std::size_t samples = TheoryBounds{}.samples;
  bool json_out = false;
  bool trace = false;
  bool strict = false;

  TheoryBounds bounds() const {
    TheoryBounds b;
    b.counter_depth = depth_counter;
    b.witness_depth = depth_witness;
    b.samples = samples;
    return b;
  }
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot read file");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program load_program(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_program(text);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const IllFormed& e) {
    throw InputError(path + ": " + e.what());
  }
}

template <class F>
auto parse_arg(const std::string& what, F f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw InputError(what + ": " + e.what());
  } catch (const IllFormed& e) {
    throw InputError(what + ": " + e.what());
  }
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

bool has_caveats(const Verdict& v) { return !v.caveats.empty(); }

int cmd_analyze(const Flags& f) {
  auto t0 = std::chrono::steady_clock::now();
  Program program = load_program(f.file);
  TheoryBounds bounds = f.bounds();
  bool undecided = false;
  json rules = json::array();
  std::ostringstream text;
  std::size_t linear = 0;

  for (const auto& rule : program.rules) {
    RecursionShape shape = classify(rule);
    json jr{{"rule", rule.label}, {"text", to_string(rule)}, {"shape", to_string(shape)}};
    text << "rule " << rule.label << ": " << to_string(rule) << "\n";
    text << "  shape: " << to_string(shape) << "\n";
    if (!shape.linear_direct()) {
      jr["analyses"] = json::array();
      rules.push_back(jr);
      continue;
    }
    ++linear;
    json analyses = json::array();
    auto add = [&](const BuiltinConjunction& q, const Verdict& v, std::optional<std::size_t> subsumed) {
      CrossCheck cc = cross_validate(program, rule, v, f.fuel, bounds);
      json ja = verdict_json(rule, v);
      if (subsumed) ja["subsumed_by"] = *subsumed;
      ja["cross_check"] = cross_check_json(cc);
      analyses.push_back(ja);
      undecided = undecided || has_caveats(v);
      text << "  Q = " << (q.empty() ? std::string("true") : to_string(q));
      if (subsumed) text << " (subsumed by candidate " << *subsumed << ")";
      text << "\n" << verdict_text(v, 4);
      if (cc.ran) text << "    interpreter: " << to_string(cc.outcome.kind) << ", " << cc.note << "\n";
    };

    if (f.q_size == 0) {
      add({}, basic_condition(rule, bounds), std::nullopt);
      jr["candidates_tried"] = 1;
    } else {
      auto cands = enumerate_q(rule, f.q_size, f.q_offset, bounds);
      std::size_t unknown = 0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto& c = cands[i];
        if (i == 0 || c.verdict.misbehaves()) {
          add(c.q, c.verdict, c.subsumed_by);
        } else {
          ++unknown;
          undecided = undecided || has_caveats(c.verdict);
        }
      }
      jr["candidates_tried"] = cands.size();
      text << "  " << cands.size() << " candidate Q tried, " << unknown << " without a proof\n";
    }
    jr["analyses"] = analyses;
    rules.push_back(jr);
  }
  if (linear == 0) text << "no LinearDirect rules\n";

  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (f.json_out) {
    json j{{"program", f.file}, {"rules", rules}, {"elapsed_ms", ms}};
    if (linear == 0) j["note"] = "no LinearDirect rules";
    print(j);
  } else {
    std::cout << "program " << f.file << "\n" << text.str();
    std::cout << "elapsed " << static_cast<long>(ms) << " ms\n";
  }
  return f.strict && undecided ? kStrictUnknown : 0;
}

int cmd_check(const Flags& f) {
  Program program = load_program(f.file);
  TheoryBounds bounds = f.bounds();
  State goal = State::from_goal(parse_arg("goal", [&] { return parse_goal(f.goal); }));
  CheckOptions opts;
  opts.q_size = f.q_size;
  opts.q_offset = f.q_offset;
  opts.bounds = bounds;
  if (f.has_q) opts.q = parse_arg("--q", [&] { return parse_builtins(f.q); });

  GoalCheck gc;
  try {
    gc = check_goal(program, goal, opts);
  } catch (const IllFormedQ& e) {
    throw InputError(std::string("--q: ") + e.what());
  }
  RunOutcome out = run(goal, program, f.fuel, SelectionPolicy::textual(), bounds);
  bool undecided = has_caveats(gc.verdict) || out.unknown_applicability > 0 || out.sat_unknown;

  if (f.json_out) {
    json j;
    j["goal"] = to_string(goal);
    if (!gc.rule.empty()) {
      j["verdict"] = verdict_json(*program.find(gc.rule), gc.verdict);
    } else {
      j["verdict"] = {{"verdict", to_string(gc.verdict.kind)}, {"reason", gc.verdict.reason},
                      {"caveats", gc.verdict.caveats}};
    }
    j["run"] = run_json(out);
    if (!f.trace) j["run"].erase("trace");
    print(j);
  } else {
    std::cout << "goal " << to_string(goal) << "\n";
    if (!gc.rule.empty()) {
      std::cout << "proof via rule " << gc.rule << " with Q = "
                << (gc.q && !gc.q->empty() ? to_string(*gc.q) : std::string("true")) << "\n";
    }
    std::cout << verdict_text(gc.verdict, 2);
    std::cout << "interpreter: " << to_string(out.kind) << " after " << out.trace.size() << " steps";
    if (out.kind == RunOutcome::Kind::FuelExhausted) std::cout << " (consistent with non-termination)";
    std::cout << "\n  last state: " << to_string(out.last) << "\n";
    if (f.trace) std::cout << trace_lines(out);
  }
  return f.strict && undecided ? kStrictUnknown : 0;
}

int cmd_run(const Flags& f) {
  Program program = load_program(f.file);
  State goal = State::from_goal(parse_arg("goal", [&] { return parse_goal(f.goal); }));
  RunOutcome out = run(goal, program, f.fuel, SelectionPolicy::textual(), f.bounds());
  if (f.json_out) {
    json j = run_json(out);
    j["goal"] = to_string(goal);
    if (!f.trace) j.erase("trace");
    print(j);
  } else {
    std::cout << to_string(out.kind);
    if (out.kind == RunOutcome::Kind::Failed) std::cout << " at step " << out.failed_step;
    else std::cout << " after " << out.trace.size() << " steps";
    std::cout << "\n";
    if (f.trace) std::cout << trace_lines(out);
    std::cout << "last state: " << to_string(out.last) << "\n";
    std::cout << "solved: " << solved_text(out.last.builtins) << "\n";
    if (out.unknown_applicability > 0)
      std::cout << "caveat: " << out.unknown_applicability << " applicability checks undecided\n";
  }
  bool undecided = out.unknown_applicability > 0 || out.sat_unknown;
  return f.strict && undecided ? kStrictUnknown : 0;
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("file", f.file, "CHR program")->required();
  app->add_option("--fuel", f.fuel, "Step budget for execution")->capture_default_str();
  app->add_option("--depth-counter", f.depth_counter, "Largest numeral in countermodel search")->capture_default_str();
  app->add_option("--depth-witness", f.depth_witness, "Largest numeral in witness search")->capture_default_str();
  app->add_option("--samples", f.samples, "Random samples for soundness checks")->capture_default_str();
  app->add_flag("--json", f.json_out, "Print JSON");
  app->add_flag("--strict", f.strict, "Exit with 3 if any theory check was undecided");
}

void add_q_search(CLI::App* app, Flags& f) {
  app->add_option("--q-size", f.q_size, "Largest Q conjunction enumerated")->capture_default_str();
  app->add_option("--q-offset", f.q_offset, "Largest successor offset in Q atoms")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Misbehavior analysis for linear direct-recursive CHR rules"};
  app.require_subcommand(1);
  Flags f;

  auto* analyze = app.add_subcommand("analyze", "Check every linear direct-recursive rule of a program");
  add_common(analyze, f);
  add_q_search(analyze, f);

  auto* check = app.add_subcommand("check", "Try to prove that a goal misbehaves, and run it");
  add_common(check, f);
  add_q_search(check, f);
  check->add_option("goal", f.goal, "Goal, e.g. \"p(X,Y), X = Y\"")->required();
  check->add_option("--q", f.q, "Use only this Q (built-in conjunction)");
  check->add_flag("--trace", f.trace, "Print the execution trace");

  auto* run_cmd = app.add_subcommand("run", "Execute a goal");
  add_common(run_cmd, f);
  run_cmd->add_option("goal", f.goal, "Goal")->required();
  run_cmd->add_flag("--trace", f.trace, "Print the execution trace");

  CLI11_PARSE(app, argc, argv);
  f.has_q = check->count("--q") > 0;

  try {
    if (analyze->parsed()) return cmd_analyze(f);
    if (check->parsed()) return cmd_check(f);
    return cmd_run(f);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
