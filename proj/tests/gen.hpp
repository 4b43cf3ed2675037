#pragma once

// Random implication instances over the equational, order and parity
// fragment of naturals in successor notation.

#include <random>
#include <set>
#include <vector>

#include "chrm/builtin.hpp"
#include "chrm/term.hpp"

namespace gen {

struct Instance {
  std::vector<chrm::Term> universals;
  std::vector<chrm::Term> existentials;
  chrm::BuiltinConjunction premise;
  chrm::BuiltinConjunction conclusion;
  std::set<chrm::VarId> exist;
};

inline chrm::Term numeric_term(std::mt19937& rng, const std::vector<chrm::Term>& vars) {
  std::uniform_int_distribution<int> coin(0, 5);
  std::uniform_int_distribution<unsigned> off(0, 2);
  if (coin(rng) == 0) return chrm::Term::numeral(std::uniform_int_distribution<unsigned>(0, 3)(rng));
  const auto& v = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
  return chrm::Term::successor(v, off(rng));
}

inline chrm::BuiltinAtom numeric_atom(std::mt19937& rng, const std::vector<chrm::Term>& vars) {
  using chrm::BuiltinAtom;
  switch (std::uniform_int_distribution<int>(0, 6)(rng)) {
    case 0: return BuiltinAtom::eq(numeric_term(rng, vars), numeric_term(rng, vars));
    case 1: return BuiltinAtom::ge(numeric_term(rng, vars), numeric_term(rng, vars));
    case 2: return BuiltinAtom::gt(numeric_term(rng, vars), numeric_term(rng, vars));
    case 3: return BuiltinAtom::lt(numeric_term(rng, vars), numeric_term(rng, vars));
    case 4: return BuiltinAtom::neq(numeric_term(rng, vars), numeric_term(rng, vars));
    case 5: return BuiltinAtom::odd(numeric_term(rng, vars));
    default: return BuiltinAtom::even(numeric_term(rng, vars));
  }
}

/// Universals X, Y, Z each typed by V >= 0; existentials U, V.
inline Instance random_instance(std::mt19937& rng) {
  Instance in;
  in.universals = {chrm::Term::var("X"), chrm::Term::var("Y"), chrm::Term::var("Z")};
  in.existentials = {chrm::Term::var("U"), chrm::Term::var("V")};
  for (const auto& u : in.universals) in.premise.push_back(chrm::BuiltinAtom::ge(u, chrm::Term::numeral(0)));
  std::uniform_int_distribution<int> size(1, 3);
  for (int i = size(rng); i > 0; --i) in.premise.push_back(numeric_atom(rng, in.universals));
  std::vector<chrm::Term> all = in.universals;
  all.insert(all.end(), in.existentials.begin(), in.existentials.end());
  for (int i = size(rng); i > 0; --i) in.conclusion.push_back(numeric_atom(rng, all));
  for (const auto& e : in.existentials) in.exist.insert(e.var_id());
  return in;
}

}  // namespace gen
