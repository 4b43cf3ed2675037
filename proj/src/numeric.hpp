#pragma once

// Decision procedure for conjunctions of difference constraints over the
// naturals extended with disequations, parity classes and primality atoms.
// Variable index 0 is the constant zero.

#include <cstddef>
#include <string>
#include <vector>

namespace chrm::detail {

enum class NumStatus { Sat, Unsat, Unknown };

struct DiffConstraint {
  int x;
  int y;
  long c;  // x - y >= c
};

struct Disequation {
  int x;
  int y;
  long c;  // x - y != c
};

struct PrimeConstraint {
  int var;
  long offset;
  bool positive;  // prime(var + offset) vs notprime(var + offset)
};

struct NumSystem {
  int nvars = 1;
  std::vector<DiffConstraint> ge;
  std::vector<Disequation> neq;
  std::vector<std::pair<int, int>> parity;  // var, value mod 2
  std::vector<PrimeConstraint> primes;

  int add_var() { return nvars++; }
};

struct NumResult {
  NumStatus status = NumStatus::Unknown;
  std::vector<long> model;  // one value per variable, model[0] == 0
  std::string reason;
};

/// `enum_bound` caps the values tried for variables under primality atoms;
/// `budget` caps the number of candidate valuations.
NumResult solve(const NumSystem& sys, long enum_bound, std::size_t budget);

/// Differences x - y = c forced by the `ge` constraints alone. Empty if they
/// are inconsistent.
std::vector<DiffConstraint> forced_differences(const NumSystem& sys);

}  // namespace chrm::detail
