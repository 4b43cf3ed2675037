#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "chrm/term.hpp"

namespace chrm {

enum class BuiltinKind { Eq, Ge, Gt, Lt, Neq, Odd, Even, Prime, NotPrime, True, False };

/// Built-in constraint handled by the constraint theory.
struct BuiltinAtom {
  BuiltinKind kind = BuiltinKind::True;
  std::vector<Term> args;

  static BuiltinAtom eq(Term a, Term b) { return {BuiltinKind::Eq, {std::move(a), std::move(b)}}; }
  static BuiltinAtom ge(Term a, Term b) { return {BuiltinKind::Ge, {std::move(a), std::move(b)}}; }
  static BuiltinAtom gt(Term a, Term b) { return {BuiltinKind::Gt, {std::move(a), std::move(b)}}; }
  static BuiltinAtom lt(Term a, Term b) { return {BuiltinKind::Lt, {std::move(a), std::move(b)}}; }
  static BuiltinAtom neq(Term a, Term b) { return {BuiltinKind::Neq, {std::move(a), std::move(b)}}; }
  static BuiltinAtom odd(Term a) { return {BuiltinKind::Odd, {std::move(a)}}; }
  static BuiltinAtom even(Term a) { return {BuiltinKind::Even, {std::move(a)}}; }
  static BuiltinAtom prime(Term a) { return {BuiltinKind::Prime, {std::move(a)}}; }
  static BuiltinAtom notprime(Term a) { return {BuiltinKind::NotPrime, {std::move(a)}}; }
  static BuiltinAtom truth() { return {BuiltinKind::True, {}}; }
  static BuiltinAtom falsity() { return {BuiltinKind::False, {}}; }

  friend bool operator==(const BuiltinAtom& a, const BuiltinAtom& b) {
    return a.kind == b.kind && a.args == b.args;
  }
};

using BuiltinConjunction = std::vector<BuiltinAtom>;

/// Order, parity and primality atoms; their arguments must be numerals.
bool is_numeric_kind(BuiltinKind k);
int builtin_arity(BuiltinKind k);
const char* builtin_symbol(BuiltinKind k);

/// Raised for an order/parity/primality atom over a non-numeral functor.
class IllFormed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotGround : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check_well_formed(const BuiltinAtom& a);
void check_well_formed(const BuiltinConjunction& c);

BuiltinAtom apply(const Substitution& s, const BuiltinAtom& a);
BuiltinConjunction apply(const Substitution& s, const BuiltinConjunction& c);
BuiltinAtom rename(Renaming& r, const BuiltinAtom& a);
BuiltinConjunction rename(Renaming& r, const BuiltinConjunction& c);

void collect_vars(const BuiltinAtom& a, std::set<VarId>& out);
void collect_vars(const BuiltinConjunction& c, std::set<VarId>& out);
void collect_vars(const BuiltinConjunction& c, std::vector<Term>& out);
std::set<VarId> vars_of(const BuiltinConjunction& c);
void collect_functors(const BuiltinConjunction& c, std::set<std::pair<std::string, std::size_t>>& out);

/// Logical negation of a single atom. Eq/Neq negate to each other.
BuiltinAtom negate(const BuiltinAtom& a);

std::string to_string(const BuiltinAtom& a);
/// Comma-separated; "true" for the empty conjunction.
std::string to_string(const BuiltinConjunction& c);

bool is_prime_number(long n);

}  // namespace chrm
