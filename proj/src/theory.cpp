#include "chrm/theory.hpp"

#include <algorithm>
#include <map>

#include "numeric.hpp"

namespace chrm {

const char* to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "sat";
    case SatStatus::Unsat: return "unsat";
    case SatStatus::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Entailment::Kind k) {
  switch (k) {
    case Entailment::Kind::Valid: return "valid";
    case Entailment::Kind::Invalid: return "invalid";
    case Entailment::Kind::Unknown: return "unknown";
  }
  return "?";
}

bool ground_eval(const BuiltinAtom& atom) {
  for (const auto& t : atom.args) {
    if (!t.is_ground()) throw NotGround("non-ground argument " + to_string(t) + " in " + to_string(atom));
  }
  switch (atom.kind) {
    case BuiltinKind::True: return true;
    case BuiltinKind::False: return false;
    case BuiltinKind::Eq: return atom.args[0] == atom.args[1];
    case BuiltinKind::Neq: return atom.args[0] != atom.args[1];
    default: break;
  }
  std::vector<long> v;
  for (const auto& t : atom.args) {
    auto n = numeral_value(t);
    if (!n) return false;
    v.push_back(*n);
  }
  switch (atom.kind) {
    case BuiltinKind::Ge: return v[0] >= v[1];
    case BuiltinKind::Gt: return v[0] > v[1];
    case BuiltinKind::Lt: return v[0] < v[1];
    case BuiltinKind::Odd: return v[0] % 2 == 1;
    case BuiltinKind::Even: return v[0] % 2 == 0;
    case BuiltinKind::Prime: return is_prime_number(v[0]);
    case BuiltinKind::NotPrime: return !is_prime_number(v[0]);
    default: return false;
  }
}

bool ground_eval(const BuiltinConjunction& c) {
  return std::all_of(c.begin(), c.end(), [](const BuiltinAtom& a) { return ground_eval(a); });
}

namespace {

const BindablePredicate kAllBindable = [](VarId) { return true; };

bool is_numeral_form(const Term& t) { return as_numeral(t).has_value(); }

bool contains_atom(const BuiltinConjunction& c, const BuiltinAtom& a) {
  return std::find(c.begin(), c.end(), a) != c.end();
}

// Equations solved into a substitution, every other atom rewritten under it.
struct Normalized {
  bool unsat = false;
  std::string reason;
  Substitution sigma;
  BuiltinConjunction numeric;       // arguments are numeral forms; includes numeric Neq
  BuiltinConjunction herbrand_neq;  // disequations between general terms
};

enum class Reduce { Keep, Drop, False };

// Rewrites a non-equation atom that is already under the substitution.
Reduce classify_reduced(BuiltinAtom& a, BuiltinConjunction*& target, Normalized& n) {
  switch (a.kind) {
    case BuiltinKind::True: return Reduce::Drop;
    case BuiltinKind::False: return Reduce::False;
    case BuiltinKind::Eq: return Reduce::Keep;
    case BuiltinKind::Neq: {
      auto u = unify(a.args[0], a.args[1]);
      if (!u) return Reduce::Drop;
      if (a.args[0] == a.args[1]) return Reduce::False;
      if (is_numeral_form(a.args[0]) && is_numeral_form(a.args[1])) {
        target = &n.numeric;
        return Reduce::Keep;
      }
      if (u->size() == 1) {
        const auto& e = u->begin()->second;
        if (is_numeral_form(e.value)) {
          a = BuiltinAtom::neq(e.var, e.value);
          target = &n.numeric;
          return Reduce::Keep;
        }
      }
      target = &n.herbrand_neq;
      return Reduce::Keep;
    }
    default: {
      bool ground = true;
      for (const auto& t : a.args) {
        if (!is_numeral_form(t)) return Reduce::False;
        ground = ground && t.is_ground();
      }
      if (ground) return ground_eval(a) ? Reduce::Drop : Reduce::False;
      target = &n.numeric;
      return Reduce::Keep;
    }
  }
}

void push_unique(BuiltinConjunction& c, BuiltinAtom a) {
  if (!contains_atom(c, a)) c.push_back(std::move(a));
}

Normalized normalize(const BuiltinConjunction& c) {
  Normalized n;
  std::vector<std::pair<Term, Term>> eqs;
  for (const auto& a : c) {
    if (a.kind == BuiltinKind::Eq) eqs.emplace_back(a.args[0], a.args[1]);
  }
  auto s = solve_equations(eqs, Substitution{}, kAllBindable);
  if (!s) {
    n.unsat = true;
    n.reason = "equations clash";
    return n;
  }
  n.sigma = std::move(*s);
  for (const auto& atom : c) {
    if (atom.kind == BuiltinKind::Eq) continue;
    BuiltinAtom a = chrm::apply(n.sigma, atom);
    BuiltinConjunction* target = nullptr;
    switch (classify_reduced(a, target, n)) {
      case Reduce::Drop: break;
      case Reduce::False:
        n.unsat = true;
        n.reason = "atom " + to_string(a) + " is false";
        return n;
      case Reduce::Keep: push_unique(*target, std::move(a)); break;
    }
  }
  return n;
}

// Re-applies a substitution to already normalized numeric atoms.
std::optional<BuiltinConjunction> reduce_numeric(const Substitution& s, const BuiltinConjunction& c) {
  Normalized scratch;
  BuiltinConjunction out;
  for (const auto& atom : c) {
    BuiltinAtom a = chrm::apply(s, atom);
    BuiltinConjunction* target = nullptr;
    switch (classify_reduced(a, target, scratch)) {
      case Reduce::Drop: break;
      case Reduce::False: return std::nullopt;
      case Reduce::Keep:
        if (target == &scratch.numeric) push_unique(out, std::move(a));
        break;
    }
  }
  return out;
}

// Variables forced to be naturals: those under order, parity or primality atoms.
std::set<VarId> natural_vars(const BuiltinConjunction& numeric) {
  std::set<VarId> out;
  for (const auto& a : numeric) {
    if (a.kind != BuiltinKind::Neq) collect_vars(a, out);
  }
  return out;
}

struct BuiltSystem {
  detail::NumSystem sys;
  std::vector<Term> vars;  // index i -> variable, vars[0] unused
  std::map<VarId, int> index;
  bool unsat = false;
};

BuiltSystem build_system(const BuiltinConjunction& numeric) {
  BuiltSystem b;
  b.vars.push_back(Term::numeral(0));
  auto lin = [&b](const Term& t) -> std::pair<int, long> {
    auto f = as_numeral(t);
    if (!f->base) return {0, f->offset};
    auto [it, inserted] = b.index.emplace(f->base->var_id(), 0);
    if (inserted) {
      it->second = b.sys.add_var();
      b.vars.push_back(*f->base);
    }
    return {it->second, f->offset};
  };
  auto add_ge = [&b](int x, long ox, int y, long oy, long extra) {
    // x + ox >= y + oy + extra
    long c = oy - ox + extra;
    if (x == y) {
      if (0 < c) b.unsat = true;
      return;
    }
    b.sys.ge.push_back({x, y, c});
  };
  for (const auto& a : numeric) {
    switch (a.kind) {
      case BuiltinKind::Ge:
      case BuiltinKind::Gt: {
        auto [x, ox] = lin(a.args[0]);
        auto [y, oy] = lin(a.args[1]);
        add_ge(x, ox, y, oy, a.kind == BuiltinKind::Gt ? 1 : 0);
        break;
      }
      case BuiltinKind::Lt: {
        auto [x, ox] = lin(a.args[0]);
        auto [y, oy] = lin(a.args[1]);
        add_ge(y, oy, x, ox, 1);
        break;
      }
      case BuiltinKind::Neq: {
        auto [x, ox] = lin(a.args[0]);
        auto [y, oy] = lin(a.args[1]);
        if (x == y) {
          if (ox == oy) b.unsat = true;
          break;
        }
        b.sys.neq.push_back({x, y, oy - ox});
        break;
      }
      case BuiltinKind::Odd:
      case BuiltinKind::Even: {
        auto [x, o] = lin(a.args[0]);
        int want = a.kind == BuiltinKind::Odd ? 1 : 0;
        int p = static_cast<int>(((want - o) % 2 + 2) % 2);
        if (x == 0) {
          if (p != 0) b.unsat = true;
          break;
        }
        b.sys.parity.emplace_back(x, p);
        break;
      }
      case BuiltinKind::Prime:
      case BuiltinKind::NotPrime: {
        auto [x, o] = lin(a.args[0]);
        if (x == 0) {
          if (is_prime_number(o) != (a.kind == BuiltinKind::Prime)) b.unsat = true;
          break;
        }
        b.sys.primes.push_back({x, o, a.kind == BuiltinKind::Prime});
        break;
      }
      default: break;
    }
  }
  return b;
}

Term fresh_constant(std::size_t i) { return Term::compound("$k" + std::to_string(i)); }

SatResult sat_core(const BuiltinConjunction& c, long enum_bound, std::size_t budget, bool want_model = true) {
  check_well_formed(c);
  SatResult r;
  Normalized n = normalize(c);
  if (n.unsat) {
    r.status = SatStatus::Unsat;
    r.reason = n.reason;
    return r;
  }
  BuiltSystem b = build_system(n.numeric);
  for (const auto& g : b.sys.ge) r.solved.bounds.push_back({b.vars[g.x], b.vars[g.y], g.c});
  for (auto [v, p] : b.sys.parity) r.solved.parity.emplace_back(b.vars[v], p);
  for (const auto& a : n.numeric) {
    if (a.kind == BuiltinKind::Prime || a.kind == BuiltinKind::NotPrime || a.kind == BuiltinKind::Neq)
      r.solved.residuals.push_back(a);
  }
  for (const auto& a : n.herbrand_neq) r.solved.residuals.push_back(a);
  if (b.unsat) {
    r.status = SatStatus::Unsat;
    r.reason = "numeric contradiction";
    return r;
  }
  detail::NumResult nr = detail::solve(b.sys, enum_bound, budget);
  if (nr.status == detail::NumStatus::Unsat) {
    r.status = SatStatus::Unsat;
    r.reason = nr.reason;
    return r;
  }
  if (nr.status == detail::NumStatus::Unknown) {
    r.status = SatStatus::Unknown;
    r.reason = nr.reason;
    return r;
  }
  // Ground model: numeric variables from the solver, every other free
  // variable a distinct fresh constant.
  Substitution ground;
  for (std::size_t i = 1; i < b.vars.size(); ++i)
    ground.insert_unchecked(b.vars[i], Term::numeral(static_cast<unsigned>(nr.model[i])));
  std::vector<Term> free;
  std::set<VarId> seen;
  for (const auto& a : n.herbrand_neq) {
    for (const auto& t : a.args) collect_vars(t, free, seen);
  }
  std::vector<Term> all_vars;
  if (want_model) {
    collect_vars(c, all_vars);
    for (const auto& v : all_vars) collect_vars(n.sigma.apply(v), free, seen);
  }
  std::size_t fresh = 0;
  for (const auto& f : free) {
    if (!ground.contains(f.var_id())) ground.insert_unchecked(f, fresh_constant(fresh++));
  }
  for (const auto& a : n.herbrand_neq) {
    if (!ground_eval(chrm::apply(ground, a))) {
      r.status = SatStatus::Unknown;
      r.reason = "disequation over compound terms";
      return r;
    }
  }
  for (const auto& v : all_vars) r.model.insert_unchecked(v, ground.apply(n.sigma.apply(v)));
  r.solved.equations = std::move(n.sigma);
  r.status = SatStatus::Sat;
  return r;
}

enum class Tri { True, False, Unknown };

struct Hint {
  BuiltinConjunction conj;
  Substitution refine;
};

// Symbolic half of the entailment check: frozen-variable matching of the
// conclusion's equations against the solved premise, refinement of natural
// variables that the premise bounds away from zero, and difference-bound /
// parity reasoning for the remaining atoms.
class Prover {
 public:
  Prover(const Normalized& premise, std::set<VarId> exist, const TheoryBounds& bounds)
      : bounds_(bounds), exist_(std::move(exist)), sub_(premise.sigma), np_(premise.numeric),
        premise_neq_(premise.herbrand_neq) {
    natural_ = natural_vars(np_);
    apply_forced_equalities();
  }

  bool prove(const BuiltinConjunction& conclusion) {
    sub_ = sub_.restricted(vars_of(conclusion));
    bool ok = true;
    std::vector<std::pair<Term, Term>> eqs;
    for (const auto& a : conclusion) {
      if (a.kind == BuiltinKind::Eq) eqs.emplace_back(a.args[0], a.args[1]);
    }
    for (const auto& [l, r] : eqs) {
      if (!solve_equation(l, r)) ok = false;
    }
    std::vector<BuiltinAtom> pending;
    for (const auto& atom : conclusion) {
      if (atom.kind == BuiltinKind::Eq) continue;
      BuiltinAtom a = chrm::apply(sub_, atom);
      switch (a.kind) {
        case BuiltinKind::True: continue;
        case BuiltinKind::False: ok = false; continue;
        default: break;
      }
      if (contains_atom(np_, a) || contains_atom(premise_neq_, a)) continue;
      if (a.kind == BuiltinKind::Neq) {
        if (!unify(a.args[0], a.args[1])) continue;
        if (a.args[0] == a.args[1] || !is_numeral_form(a.args[0]) || !is_numeral_form(a.args[1])) {
          ok = false;
          continue;
        }
      } else if (!std::all_of(a.args.begin(), a.args.end(), is_numeral_form)) {
        ok = false;
        continue;
      }
      if (a.kind != BuiltinKind::Neq) {
        std::set<VarId> vs;
        collect_vars(a, vs);
        for (VarId v : vs) {
          if (!exist_.count(v)) typed_.insert(v);
        }
      }
      if (has_free_existential(a)) {
        pending.push_back(std::move(a));
        continue;
      }
      switch (holds(a, true)) {
        case Tri::True: break;
        case Tri::False: ok = false; break;
        case Tri::Unknown: ok = false; unknown_ = true; break;
      }
    }
    if (!pending.empty() && !find_witness(pending)) ok = false;
    if (ok) witness_ = sub_.restricted(exist_);
    return ok;
  }

  const std::vector<Hint>& hints() const { return hints_; }
  const std::set<VarId>& typed() const { return typed_; }
  bool saw_unknown() const { return unknown_; }
  const Substitution& witness() const { return witness_; }

 private:
  bool is_free_existential(const Term& t) const {
    return t.is_var() && exist_.count(t.var_id()) && !sub_.contains(t.var_id());
  }

  bool has_free_existential(const BuiltinAtom& a) const {
    std::set<VarId> vs;
    collect_vars(a, vs);
    return std::any_of(vs.begin(), vs.end(), [this](VarId v) { return exist_.count(v) != 0; });
  }

  void bind_universal(const Term& var, const Term& value) {
    sub_.bind(var, value);
    refine_.bind(var, value);
    auto reduced = reduce_numeric(sub_, np_);
    // The premise is satisfiable and refinements are consequences of it.
    if (reduced) np_ = std::move(*reduced);
    natural_ = natural_vars(np_);
  }

  void apply_forced_equalities() {
    for (int guard = 0; guard < 64; ++guard) {
      BuiltSystem b = build_system(np_);
      if (b.unsat) return;
      auto forced = detail::forced_differences(b.sys);
      if (forced.empty()) return;
      const auto& f = forced.front();  // vars[x] - vars[y] = c
      if (f.x == 0) {
        bind_universal(b.vars[f.y], Term::numeral(static_cast<unsigned>(-f.c)));
      } else if (f.y == 0) {
        bind_universal(b.vars[f.x], Term::numeral(static_cast<unsigned>(f.c)));
      } else if (f.c >= 0) {
        bind_universal(b.vars[f.x], Term::successor(b.vars[f.y], static_cast<unsigned>(f.c)));
      } else {
        bind_universal(b.vars[f.y], Term::successor(b.vars[f.x], static_cast<unsigned>(-f.c)));
      }
    }
  }

  Tri holds(const BuiltinAtom& atom, bool record_hint) {
    BuiltinAtom a = chrm::apply(sub_, atom);
    if (a.kind == BuiltinKind::True) return Tri::True;
    if (a.kind == BuiltinKind::False) return Tri::False;
    if (contains_atom(np_, a)) return Tri::True;
    if (a.kind != BuiltinKind::Neq && a.kind != BuiltinKind::Eq) {
      std::set<VarId> vs;
      collect_vars(a, vs);
      for (VarId v : vs) {
        if (!natural_.count(v) && !typed_.count(v)) return Tri::False;
      }
    }
    BuiltinConjunction refute = np_;
    refute.push_back(negate(a));
    SatResult r = sat_core(refute, bounds_.counter_depth, bounds_.enumeration_budget, false);
    switch (r.status) {
      case SatStatus::Unsat: return Tri::True;
      case SatStatus::Sat:
        if (record_hint) hints_.push_back({std::move(refute), refine_});
        return Tri::False;
      case SatStatus::Unknown: return Tri::Unknown;
    }
    return Tri::Unknown;
  }

  bool solve_equation(const Term& l, const Term& r) {
    std::vector<std::pair<Term, Term>> work{{l, r}};
    bool ok = true;
    for (int steps = 0; !work.empty() && steps < 100000; ++steps) {
      auto [x, y] = work.back();
      work.pop_back();
      Term a = sub_.apply(x);
      Term b = sub_.apply(y);
      if (a == b) continue;
      if (!is_free_existential(a) && is_free_existential(b)) std::swap(a, b);
      if (is_free_existential(a)) {
        if (occurs(a.var_id(), b) || !sub_.bind(a, b)) ok = false;
        continue;
      }
      if (a.is_compound() && b.is_compound()) {
        if (a.name() != b.name() || a.arity() != b.arity()) {
          ok = false;
          continue;
        }
        for (std::size_t i = 0; i < a.arity(); ++i) work.emplace_back(a.args()[i], b.args()[i]);
        continue;
      }
      // A universal variable meets a different term.
      if (!a.is_var()) std::swap(a, b);
      const Term& u = a;
      const Term& t = b;
      if (occurs(u.var_id(), t)) {
        ok = false;
        continue;
      }
      if (t.is_compound() && t.name() == "s" && t.arity() == 1 && natural_.count(u.var_id())) {
        switch (holds(BuiltinAtom::ge(u, Term::numeral(1)), false)) {
          case Tri::True: {
            bind_universal(u, Term::successor(Term::var(u.name() + "'")));
            work.emplace_back(x, y);
            continue;
          }
          case Tri::Unknown: unknown_ = true; break;
          case Tri::False: {
            BuiltinConjunction zero = np_;
            zero.push_back(BuiltinAtom::eq(u, Term::numeral(0)));
            hints_.push_back({std::move(zero), refine_});
            break;
          }
        }
        ok = false;
        continue;
      }
      if (is_numeral_form(u) && is_numeral_form(t) && !has_free_existential(BuiltinAtom::eq(u, t))) {
        Tri h = holds(BuiltinAtom::eq(u, t), true);
        if (h == Tri::True) continue;
        if (h == Tri::Unknown) unknown_ = true;
      }
      ok = false;
    }
    return ok;
  }

  bool find_witness(const std::vector<BuiltinAtom>& pending) {
    std::vector<Term> free;
    for (const auto& a : pending) {
      std::vector<Term> vs;
      for (const auto& t : a.args) collect_vars(t, vs);
      for (const auto& v : vs) {
        if (exist_.count(v.var_id()) &&
            std::none_of(free.begin(), free.end(), [&](const Term& f) { return f == v; }))
          free.push_back(v);
      }
    }
    std::vector<Term> universals;
    for (const auto& a : pending) {
      std::vector<Term> vs;
      for (const auto& t : a.args) collect_vars(t, vs);
      for (const auto& v : vs) {
        if (!exist_.count(v.var_id()) && (natural_.count(v.var_id()) || typed_.count(v.var_id())) &&
            std::none_of(universals.begin(), universals.end(), [&](const Term& f) { return f == v; }))
          universals.push_back(v);
      }
    }
    for (const auto& a : np_) {
      std::vector<Term> vs;
      for (const auto& t : a.args) collect_vars(t, vs);
      for (const auto& v : vs) {
        if (natural_.count(v.var_id()) &&
            std::none_of(universals.begin(), universals.end(), [&](const Term& f) { return f == v; }))
          universals.push_back(v);
      }
    }
    std::vector<Term> candidates;
    for (long k = 0; k <= bounds_.witness_offset; ++k) candidates.push_back(Term::numeral(k));
    for (const auto& u : universals)
      for (long k = 0; k <= bounds_.witness_offset; ++k)
        candidates.push_back(Term::successor(u, static_cast<unsigned>(k)));

    std::vector<std::size_t> idx(free.size(), 0);
    std::size_t tried = 0;
    while (tried++ < bounds_.enumeration_budget) {
      Substitution theta;
      for (std::size_t i = 0; i < free.size(); ++i) theta.bind(free[i], candidates[idx[i]]);
      bool all = true;
      for (const auto& a : pending) {
        Tri h = holds(chrm::apply(theta, a), false);
        if (h == Tri::Unknown) unknown_ = true;
        if (h != Tri::True) {
          all = false;
          break;
        }
      }
      if (all) {
        for (const auto& [id, e] : theta) sub_.bind(e.var, e.value);
        return true;
      }
      std::size_t i = 0;
      while (i < idx.size() && ++idx[i] == candidates.size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
    return false;
  }

  const TheoryBounds& bounds_;
  std::set<VarId> exist_;
  Substitution sub_;
  Substitution refine_;
  BuiltinConjunction np_;
  BuiltinConjunction premise_neq_;
  std::set<VarId> natural_;
  std::set<VarId> typed_;  // universals under numeric atoms of the conclusion
  std::vector<Hint> hints_;
  bool unknown_ = false;
  Substitution witness_;
};

// Bounded search for a ground valuation of the universal variables that
// satisfies the premise while leaving the conclusion unsatisfiable.
class CountermodelSearch {
 public:
  CountermodelSearch(const BuiltinConjunction& premise, const Normalized& n, const std::set<VarId>& exist,
                     const BuiltinConjunction& conclusion, const std::set<VarId>& typed,
                     const TheoryBounds& bounds)
      : premise_(premise), n_(n), exist_(exist), conclusion_(chrm::apply(n.sigma, conclusion)),
        original_conclusion_(conclusion), bounds_(bounds) {
    std::set<VarId> rel;
    collect_vars(conclusion_, rel);
    for (VarId e : exist_) rel.erase(e);
    BuiltinConjunction pool = n_.numeric;
    pool.insert(pool.end(), n_.herbrand_neq.begin(), n_.herbrand_neq.end());
    bool grew = true;
    std::vector<bool> taken(pool.size(), false);
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (taken[i]) continue;
        std::set<VarId> vs;
        collect_vars(pool[i], vs);
        if (std::any_of(vs.begin(), vs.end(), [&](VarId v) { return rel.count(v) != 0; })) {
          taken[i] = true;
          related_.push_back(pool[i]);
          rel.insert(vs.begin(), vs.end());
          grew = true;
        }
      }
    }
    std::set<VarId> natural = natural_vars(related_);
    natural.insert(typed.begin(), typed.end());
    std::vector<Term> ordered;
    collect_vars(conclusion_, ordered);
    collect_vars(related_, ordered);
    for (const auto& v : ordered) {
      if (exist_.count(v.var_id())) continue;
      vars_.push_back(v);
      natural_.push_back(natural.count(v.var_id()) != 0);
    }
  }

  std::optional<Substitution> run(const std::vector<Hint>& hints) {
    for (const auto& h : hints) {
      SatResult r = sat_core(h.conj, bounds_.counter_depth, bounds_.enumeration_budget);
      if (r.status != SatStatus::Sat) continue;
      Substitution g;
      for (const auto& v : vars_) {
        Term t = r.model.apply(h.refine.apply(v));
        g.bind(v, t.is_ground() ? t : Term::numeral(0));
      }
      if (auto cm = attempt(g)) return cm;
    }
    if (vars_.empty()) return attempt(Substitution{});
    if (!bounded_premise_feasible()) return std::nullopt;

    const long depth = bounds_.counter_depth;
    std::vector<std::vector<Term>> domains;
    for (bool nat : natural_) {
      std::vector<Term> d;
      d.push_back(Term::numeral(0));
      if (!nat) d.push_back(fresh_constant(0));
      for (long k = 1; k <= depth; ++k) d.push_back(Term::numeral(k));
      domains.push_back(std::move(d));
    }
    std::size_t max_dom = 0;
    for (const auto& d : domains) max_dom = std::max(max_dom, d.size());
    std::size_t tried = 0;
    for (std::size_t m = 0; m < max_dom; ++m) {
      std::vector<std::size_t> idx(vars_.size(), 0);
      while (true) {
        bool hits_max = false, in_range = true;
        for (std::size_t i = 0; i < idx.size(); ++i) {
          hits_max = hits_max || idx[i] == m;
          in_range = in_range && idx[i] < domains[i].size();
        }
        if (hits_max && in_range) {
          if (++tried > bounds_.enumeration_budget) return std::nullopt;
          Substitution g;
          for (std::size_t i = 0; i < idx.size(); ++i) g.bind(vars_[i], domains[i][idx[i]]);
          if (auto cm = attempt(g)) return cm;
        }
        std::size_t i = 0;
        while (i < idx.size() && ++idx[i] > m) idx[i++] = 0;
        if (i == idx.size()) break;
      }
    }
    return std::nullopt;
  }

 private:
  bool bounded_premise_feasible() const {
    BuiltinConjunction c = related_;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if (natural_[i]) c.push_back(BuiltinAtom::ge(Term::numeral(bounds_.counter_depth), vars_[i]));
    }
    return sat_core(c, bounds_.counter_depth, bounds_.enumeration_budget, false).status != SatStatus::Unsat;
  }

  std::optional<Substitution> attempt(const Substitution& g) const {
    for (const auto& a : related_) {
      BuiltinAtom ga = chrm::apply(g, a);
      bool ground = std::all_of(ga.args.begin(), ga.args.end(), [](const Term& t) { return t.is_ground(); });
      if (!ground || !ground_eval(ga)) return std::nullopt;
    }
    SatResult c = sat_core(chrm::apply(g, conclusion_), bounds_.witness_depth, bounds_.enumeration_budget, false);
    if (c.status != SatStatus::Unsat) return std::nullopt;
    return complete(g);
  }

  // Extends g to every universal variable of the original problem.
  std::optional<Substitution> complete(const Substitution& g) const {
    SatResult full = sat_core(chrm::apply(g, premise_), bounds_.counter_depth, bounds_.enumeration_budget);
    if (full.status != SatStatus::Sat) return std::nullopt;
    std::vector<Term> universals;
    collect_vars(premise_, universals);
    collect_vars(original_conclusion_, universals);
    Substitution cm;
    for (const auto& u : universals) {
      if (exist_.count(u.var_id())) continue;
      Term v = full.model.apply(g.apply(n_.sigma.apply(u)));
      if (!v.is_ground()) v = full.model.apply(g.apply(u));
      if (!v.is_ground()) return std::nullopt;
      cm.bind(u, v);
    }
    if (!ground_eval(chrm::apply(cm, premise_))) return std::nullopt;
    return cm;
  }

  const BuiltinConjunction& premise_;
  const Normalized& n_;
  const std::set<VarId>& exist_;
  BuiltinConjunction conclusion_;
  const BuiltinConjunction& original_conclusion_;
  const TheoryBounds& bounds_;
  BuiltinConjunction related_;
  std::vector<Term> vars_;
  std::vector<bool> natural_;
};

}  // namespace

SatResult satisfiable(const BuiltinConjunction& c, const TheoryBounds& bounds) {
  return sat_core(c, bounds.counter_depth, bounds.enumeration_budget);
}

Entailment entails(const BuiltinConjunction& premise, const std::set<VarId>& exist_vars,
                   const BuiltinConjunction& conclusion, const TheoryBounds& bounds) {
  check_well_formed(premise);
  check_well_formed(conclusion);
  std::set<VarId> exist = exist_vars;
  for (VarId v : vars_of(premise)) exist.erase(v);

  Entailment e;
  Normalized n = normalize(premise);
  if (n.unsat) {
    e.kind = Entailment::Kind::Valid;
    e.note = "premise unsatisfiable";
    return e;
  }
  Prover prover(n, exist, bounds);
  if (prover.prove(conclusion)) {
    e.kind = Entailment::Kind::Valid;
    e.note = "symbolic";
    e.witness = prover.witness();
    return e;
  }
  CountermodelSearch search(premise, n, exist, conclusion, prover.typed(), bounds);
  if (auto cm = search.run(prover.hints())) {
    e.kind = Entailment::Kind::Invalid;
    e.note = "countermodel";
    e.countermodel = std::move(*cm);
    return e;
  }
  SatResult ps = sat_core(premise, bounds.counter_depth, bounds.enumeration_budget, false);
  if (ps.status == SatStatus::Unsat) {
    e.kind = Entailment::Kind::Valid;
    e.note = "premise unsatisfiable";
    return e;
  }
  e.kind = Entailment::Kind::Unknown;
  e.note = prover.saw_unknown() || ps.status == SatStatus::Unknown
               ? "theory could not decide a primality or disequation residual"
               : "no proof and no countermodel within bounds";
  return e;
}

Entailment implies_builtins(const BuiltinConjunction& strong, const BuiltinConjunction& weak,
                            const TheoryBounds& bounds) {
  std::set<VarId> exist = vars_of(weak);
  for (VarId v : vars_of(strong)) exist.erase(v);
  return entails(strong, exist, weak, bounds);
}

}  // namespace chrm
