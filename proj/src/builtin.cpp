#include "chrm/builtin.hpp"

namespace chrm {

bool is_numeric_kind(BuiltinKind k) {
  switch (k) {
    case BuiltinKind::Ge:
    case BuiltinKind::Gt:
    case BuiltinKind::Lt:
    case BuiltinKind::Odd:
    case BuiltinKind::Even:
    case BuiltinKind::Prime:
    case BuiltinKind::NotPrime:
      return true;
    default:
      return false;
  }
}

int builtin_arity(BuiltinKind k) {
  switch (k) {
    case BuiltinKind::Eq:
    case BuiltinKind::Ge:
    case BuiltinKind::Gt:
    case BuiltinKind::Lt:
    case BuiltinKind::Neq:
      return 2;
    case BuiltinKind::True:
    case BuiltinKind::False:
      return 0;
    default:
      return 1;
  }
}

const char* builtin_symbol(BuiltinKind k) {
  switch (k) {
    case BuiltinKind::Eq: return "=";
    case BuiltinKind::Ge: return ">=";
    case BuiltinKind::Gt: return ">";
    case BuiltinKind::Lt: return "<";
    case BuiltinKind::Neq: return "\\=";
    case BuiltinKind::Odd: return "odd";
    case BuiltinKind::Even: return "even";
    case BuiltinKind::Prime: return "prime";
    case BuiltinKind::NotPrime: return "notprime";
    case BuiltinKind::True: return "true";
    case BuiltinKind::False: return "false";
  }
  return "?";
}

void check_well_formed(const BuiltinAtom& a) {
  if (static_cast<int>(a.args.size()) != builtin_arity(a.kind)) {
    throw IllFormed(std::string("wrong number of arguments for ") + builtin_symbol(a.kind));
  }
  if (!is_numeric_kind(a.kind)) return;
  for (const auto& t : a.args) {
    if (!as_numeral(t)) {
      throw IllFormed(std::string("non-numeral argument ") + to_string(t) + " under " +
                      builtin_symbol(a.kind));
    }
  }
}

void check_well_formed(const BuiltinConjunction& c) {
  for (const auto& a : c) check_well_formed(a);
}

BuiltinAtom apply(const Substitution& s, const BuiltinAtom& a) {
  return {a.kind, s.apply(a.args)};
}

BuiltinConjunction apply(const Substitution& s, const BuiltinConjunction& c) {
  BuiltinConjunction out;
  out.reserve(c.size());
  for (const auto& a : c) out.push_back(apply(s, a));
  return out;
}

BuiltinAtom rename(Renaming& r, const BuiltinAtom& a) {
  BuiltinAtom out{a.kind, {}};
  for (const auto& t : a.args) out.args.push_back(r(t));
  return out;
}

BuiltinConjunction rename(Renaming& r, const BuiltinConjunction& c) {
  BuiltinConjunction out;
  for (const auto& a : c) out.push_back(rename(r, a));
  return out;
}

void collect_vars(const BuiltinAtom& a, std::set<VarId>& out) {
  for (const auto& t : a.args) collect_vars(t, out);
}

void collect_vars(const BuiltinConjunction& c, std::set<VarId>& out) {
  for (const auto& a : c) collect_vars(a, out);
}

void collect_vars(const BuiltinConjunction& c, std::vector<Term>& out) {
  std::set<VarId> seen;
  for (const auto& v : out) seen.insert(v.var_id());
  for (const auto& a : c) {
    for (const auto& t : a.args) collect_vars(t, out, seen);
  }
}

std::set<VarId> vars_of(const BuiltinConjunction& c) {
  std::set<VarId> out;
  collect_vars(c, out);
  return out;
}

namespace {
void collect_functors(const Term& t, std::set<std::pair<std::string, std::size_t>>& out) {
  if (t.is_var()) return;
  out.emplace(t.name(), t.arity());
  for (const auto& a : t.args()) collect_functors(a, out);
}
}  // namespace

void collect_functors(const BuiltinConjunction& c, std::set<std::pair<std::string, std::size_t>>& out) {
  for (const auto& a : c) {
    for (const auto& t : a.args) collect_functors(t, out);
  }
}

BuiltinAtom negate(const BuiltinAtom& a) {
  switch (a.kind) {
    case BuiltinKind::Eq: return BuiltinAtom::neq(a.args[0], a.args[1]);
    case BuiltinKind::Neq: return BuiltinAtom::eq(a.args[0], a.args[1]);
    case BuiltinKind::Ge: return BuiltinAtom::lt(a.args[0], a.args[1]);
    case BuiltinKind::Gt: return BuiltinAtom::ge(a.args[1], a.args[0]);
    case BuiltinKind::Lt: return BuiltinAtom::ge(a.args[0], a.args[1]);
    case BuiltinKind::Odd: return BuiltinAtom::even(a.args[0]);
    case BuiltinKind::Even: return BuiltinAtom::odd(a.args[0]);
    case BuiltinKind::Prime: return BuiltinAtom::notprime(a.args[0]);
    case BuiltinKind::NotPrime: return BuiltinAtom::prime(a.args[0]);
    case BuiltinKind::True: return BuiltinAtom::falsity();
    case BuiltinKind::False: return BuiltinAtom::truth();
  }
  return a;
}

std::string to_string(const BuiltinAtom& a) {
  switch (builtin_arity(a.kind)) {
    case 0: return builtin_symbol(a.kind);
    case 1: return std::string(builtin_symbol(a.kind)) + "(" + to_string(a.args[0]) + ")";
    default:
      return to_string(a.args[0]) + " " + builtin_symbol(a.kind) + " " + to_string(a.args[1]);
  }
}

std::string to_string(const BuiltinConjunction& c) {
  if (c.empty()) return "true";
  std::string out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += to_string(c[i]);
  }
  return out;
}

bool is_prime_number(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace chrm
