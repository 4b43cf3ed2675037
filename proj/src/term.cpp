#include "chrm/term.hpp"

#include <atomic>
#include <sstream>
#include <unordered_map>

namespace chrm {

namespace {

std::atomic<VarId> g_next_var{1};

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::string strip_rename_suffix(const std::string& name) {
  auto pos = name.rfind('_');
  if (pos == std::string::npos || pos == 0 || pos + 1 == name.size()) return name;
  for (std::size_t i = pos + 1; i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return name;
  }
  return name.substr(0, pos);
}

}  // namespace

VarId fresh_var_id() { return g_next_var.fetch_add(1, std::memory_order_relaxed); }

VarId last_var_id() { return g_next_var.load(std::memory_order_relaxed) - 1; }

Term Term::var(std::string name) { return var(std::move(name), fresh_var_id()); }

Term Term::var(std::string name, VarId id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->id = id;
  n->name = std::move(name);
  n->ground = false;
  n->hash = mix(0x51ed27, id);
  return Term(std::move(n));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Compound;
  n->hash = mix(std::hash<std::string>{}(functor), args.size());
  n->name = std::move(functor);
  for (const auto& a : args) {
    n->ground = n->ground && a.is_ground();
    n->size += a.size();
    n->hash = mix(n->hash, a.hash());
  }
  n->args = std::move(args);
  return Term(std::move(n));
}

Term Term::numeral(unsigned n) { return successor(compound("0"), n); }

Term Term::successor(Term t, unsigned n) {
  for (unsigned i = 0; i < n; ++i) t = compound("s", {std::move(t)});
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind()) return false;
  if (a.is_var()) return a.var_id() == b.var_id();
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.args()[i] == b.args()[i])) return false;
  }
  return true;
}

bool operator<(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return false;
  if (a.kind() != b.kind()) return a.is_var();
  if (a.is_var()) return a.var_id() < b.var_id();
  if (a.name() != b.name()) return a.name() < b.name();
  if (a.arity() != b.arity()) return a.arity() < b.arity();
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (a.args()[i] < b.args()[i]) return true;
    if (b.args()[i] < a.args()[i]) return false;
  }
  return false;
}

std::optional<NumeralForm> as_numeral(const Term& t) {
  NumeralForm f;
  const Term* cur = &t;
  while (cur->is_compound() && cur->name() == "s" && cur->arity() == 1) {
    ++f.offset;
    cur = &cur->args()[0];
  }
  if (cur->is_var()) {
    f.base = *cur;
    return f;
  }
  if (cur->name() == "0" && cur->arity() == 0) return f;
  return std::nullopt;
}

std::optional<long> numeral_value(const Term& t) {
  auto f = as_numeral(t);
  if (!f || f->base) return std::nullopt;
  return f->offset;
}

void collect_vars(const Term& t, std::set<VarId>& out) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    out.insert(t.var_id());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

void collect_vars(const Term& t, std::vector<Term>& out, std::set<VarId>& seen) {
  if (t.is_ground()) return;
  if (t.is_var()) {
    if (seen.insert(t.var_id()).second) out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out, seen);
}

void collect_vars(const Term& t, std::vector<Term>& out) {
  std::set<VarId> seen;
  for (const auto& v : out) seen.insert(v.var_id());
  collect_vars(t, out, seen);
}

std::set<VarId> vars_of(const Term& t) {
  std::set<VarId> out;
  collect_vars(t, out);
  return out;
}

bool occurs(VarId v, const Term& t) {
  if (t.is_ground()) return false;
  if (t.is_var()) return t.var_id() == v;
  for (const auto& a : t.args()) {
    if (occurs(v, a)) return true;
  }
  return false;
}

std::string to_string(const Term& t) {
  if (t.is_var()) return t.name();
  if (auto n = numeral_value(t)) return std::to_string(*n);
  if (t.arity() == 0) return t.name();
  std::string out = t.name() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ",";
    out += to_string(t.args()[i]);
  }
  return out + ")";
}

// ---------------------------------------------------------------------------
// Substitution

std::optional<Term> Substitution::lookup(VarId v) const {
  auto it = map_.find(v);
  if (it == map_.end()) return std::nullopt;
  return it->second.value;
}

namespace {

Term replace_var(const Term& t, VarId v, const Term& by) {
  if (t.is_ground()) return t;
  if (t.is_var()) return t.var_id() == v ? by : t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(replace_var(a, v, by));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::compound(t.name(), std::move(args)) : t;
}

}  // namespace

bool Substitution::bind(const Term& var, const Term& t) {
  if (!var.is_var() || contains(var.var_id())) return false;
  Term value = apply(t);
  if (value.is_var() && value.var_id() == var.var_id()) return true;
  if (occurs(var.var_id(), value)) return false;
  for (auto& [id, e] : map_) e.value = replace_var(e.value, var.var_id(), value);
  map_.emplace(var.var_id(), Entry{var, value});
  return true;
}

Term Substitution::apply(const Term& t) const {
  if (t.is_ground() || map_.empty()) return t;
  if (t.is_var()) {
    auto it = map_.find(t.var_id());
    return it == map_.end() ? t : it->second.value;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::compound(t.name(), std::move(args)) : t;
}

std::vector<Term> Substitution::apply(const std::vector<Term>& ts) const {
  std::vector<Term> out;
  out.reserve(ts.size());
  for (const auto& t : ts) out.push_back(apply(t));
  return out;
}

Substitution Substitution::restricted(const std::set<VarId>& keep) const {
  Substitution out;
  for (const auto& [id, e] : map_) {
    if (keep.count(id)) out.map_.emplace(id, e);
  }
  return out;
}

bool operator==(const Substitution& a, const Substitution& b) {
  if (a.map_.size() != b.map_.size()) return false;
  for (const auto& [id, e] : a.map_) {
    auto it = b.map_.find(id);
    if (it == b.map_.end() || it->second.value != e.value) return false;
  }
  return true;
}

std::string to_string(const Substitution& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [id, e] : s) {
    if (!first) os << ", ";
    first = false;
    os << to_string(e.var) << " -> " << to_string(e.value);
  }
  os << "}";
  return os.str();
}

// ---------------------------------------------------------------------------
// Equation solving. Works on a triangular binding store and resolves it into
// an idempotent substitution at the end.

namespace {

class TriangularStore {
 public:
  explicit TriangularStore(const Substitution& base) {
    for (const auto& [id, e] : base) bindings_.emplace(id, e);
  }

  Term deref(Term t) const {
    while (t.is_var()) {
      auto it = bindings_.find(t.var_id());
      if (it == bindings_.end()) break;
      t = it->second.value;
    }
    return t;
  }

  bool occurs_deref(VarId v, const Term& t) const {
    if (t.is_ground()) return false;
    Term d = deref(t);
    if (d.is_var()) return d.var_id() == v;
    for (const auto& a : d.args()) {
      if (occurs_deref(v, a)) return true;
    }
    return false;
  }

  void bind(const Term& var, const Term& value) {
    bindings_.emplace(var.var_id(), Substitution::Entry{var, value});
  }

  Term resolve(const Term& t, std::unordered_map<VarId, Term>& memo) const {
    if (t.is_ground()) return t;
    if (t.is_var()) {
      auto m = memo.find(t.var_id());
      if (m != memo.end()) return m->second;
      auto it = bindings_.find(t.var_id());
      if (it == bindings_.end()) return t;
      Term r = resolve(it->second.value, memo);
      memo.emplace(t.var_id(), r);
      return r;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
      args.push_back(resolve(a, memo));
      changed = changed || !args.back().same_node(a);
    }
    return changed ? Term::compound(t.name(), std::move(args)) : t;
  }

  const std::map<VarId, Substitution::Entry>& bindings() const { return bindings_; }

 private:
  std::map<VarId, Substitution::Entry> bindings_;
};

}  // namespace

std::optional<Substitution> solve_equations(const std::vector<std::pair<Term, Term>>& eqs,
                                            const Substitution& base,
                                            const BindablePredicate& bindable) {
  TriangularStore store(base);
  std::vector<std::pair<Term, Term>> work(eqs.rbegin(), eqs.rend());
  while (!work.empty()) {
    auto [l, r] = std::move(work.back());
    work.pop_back();
    Term a = store.deref(l);
    Term b = store.deref(r);
    if (a.same_node(b)) continue;
    if (a.is_var() && b.is_var() && a.var_id() == b.var_id()) continue;
    if (a.is_var() && !bindable(a.var_id()) && b.is_var() && bindable(b.var_id())) std::swap(a, b);
    if (a.is_var() && bindable(a.var_id())) {
      if (store.occurs_deref(a.var_id(), b)) return std::nullopt;
      store.bind(a, b);
      continue;
    }
    if (b.is_var() && bindable(b.var_id())) {
      if (store.occurs_deref(b.var_id(), a)) return std::nullopt;
      store.bind(b, a);
      continue;
    }
    if (a.is_var() || b.is_var()) return std::nullopt;
    if (a.name() != b.name() || a.arity() != b.arity()) return std::nullopt;
    for (std::size_t i = a.arity(); i-- > 0;) work.emplace_back(a.args()[i], b.args()[i]);
  }
  std::unordered_map<VarId, Term> memo;
  Substitution out;
  for (const auto& [id, e] : store.bindings()) {
    Term v = store.resolve(e.value, memo);
    out.map_.emplace(id, Substitution::Entry{e.var, std::move(v)});
  }
  return out;
}

std::optional<Substitution> unify(const Term& t1, const Term& t2) {
  return solve_equations({{t1, t2}}, Substitution{}, [](VarId) { return true; });
}

std::optional<Substitution> match(const Term& pattern, const Term& ground_side,
                                  const std::set<VarId>& frozen) {
  return solve_equations({{pattern, ground_side}}, Substitution{},
                         [&frozen](VarId v) { return frozen.count(v) == 0; });
}

// ---------------------------------------------------------------------------
// Renaming

Term Renaming::operator()(const Term& t) {
  if (t.is_ground()) return t;
  if (t.is_var()) {
    auto it = map_.find(t.var_id());
    if (it != map_.end()) return it->second;
    VarId id = fresh_var_id();
    Term fresh = Term::var(strip_rename_suffix(t.name()) + "_" + std::to_string(id), id);
    map_.emplace(t.var_id(), fresh);
    return fresh;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back((*this)(a));
  return Term::compound(t.name(), std::move(args));
}

std::optional<Term> Renaming::image(VarId v) const {
  auto it = map_.find(v);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::pair<Term, Renaming> disjoint_variant(const Term& t) {
  Renaming r;
  Term out = r(t);
  return {out, std::move(r)};
}

}  // namespace chrm
