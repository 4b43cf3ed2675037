#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "chrm/syntax.hpp"
#include "chrm/theory.hpp"

namespace testing_helpers {

/// Premise and conclusion parsed in one variable scope.
struct Impl {
  chrm::BuiltinConjunction premise;
  chrm::BuiltinConjunction conclusion;
  std::map<std::string, chrm::Term> vars;

  std::set<chrm::VarId> ids(std::initializer_list<const char*> names) const {
    std::set<chrm::VarId> out;
    for (const char* n : names) out.insert(vars.at(n).var_id());
    return out;
  }
  const chrm::Term& var(const std::string& n) const { return vars.at(n); }
};

inline Impl parse_impl(const std::string& premise, const std::string& conclusion) {
  std::size_t n = chrm::parse_builtins(premise).size();
  chrm::BuiltinConjunction all = chrm::parse_builtins(premise + ", " + conclusion);
  Impl out;
  out.premise.assign(all.begin(), all.begin() + static_cast<long>(n));
  out.conclusion.assign(all.begin() + static_cast<long>(n), all.end());
  std::vector<chrm::Term> vs;
  chrm::collect_vars(all, vs);
  for (const auto& v : vs) out.vars.emplace(v.name(), v);
  return out;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(CHRM_FIXTURE_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline chrm::Program load_program(const std::string& name) { return chrm::parse_program(read_fixture(name + ".chr")); }

inline const chrm::Rule& recursive_rule(const chrm::Program& p) {
  for (const auto& r : p.rules)
    if (chrm::classify(r).linear_direct()) return r;
  throw std::logic_error("no linear direct rule");
}

}  // namespace testing_helpers
