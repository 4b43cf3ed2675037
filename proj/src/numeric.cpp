#include "numeric.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

#include "chrm/builtin.hpp"

namespace chrm::detail {

namespace {

constexpr long kInf = LONG_MAX / 4;

long sat_add(long a, long b) {
  if (a >= kInf || b >= kInf) return kInf;
  return a + b;
}

long ceil_div(long a, long b) {
  // b > 0
  long q = a / b;
  if (a % b != 0 && a > 0) ++q;
  return q;
}

// ub(i, j) is an upper bound on value(i) - value(j).
class Bounds {
 public:
  explicit Bounds(int n) : n_(n), m_(static_cast<std::size_t>(n) * n, kInf) {
    for (int i = 0; i < n; ++i) at(i, i) = 0;
  }
  long& at(int i, int j) { return m_[static_cast<std::size_t>(i) * n_ + j]; }
  long at(int i, int j) const { return m_[static_cast<std::size_t>(i) * n_ + j]; }
  int size() const { return n_; }

  void close() {
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i) {
        long ik = at(i, k);
        if (ik >= kInf) continue;
        for (int j = 0; j < n_; ++j) {
          long v = sat_add(ik, at(k, j));
          if (v < at(i, j)) at(i, j) = v;
        }
      }
  }

  bool consistent() const {
    for (int i = 0; i < n_; ++i)
      if (at(i, i) < 0) return false;
    return true;
  }

  // Adds value(i) - value(j) <= w to a closed matrix, keeping it closed.
  bool tighten(int i, int j, long w) {
    if (w >= at(i, j)) return consistent();
    if (sat_add(w, at(j, i)) < 0) {
      at(i, i) = -1;
      return false;
    }
    for (int a = 0; a < n_; ++a) {
      long ai = at(a, i);
      if (ai >= kInf) continue;
      for (int b = 0; b < n_; ++b) {
        long v = sat_add(sat_add(ai, w), at(j, b));
        if (v < at(a, b)) at(a, b) = v;
      }
    }
    return consistent();
  }

  // x - y >= c
  bool require_ge(int x, int y, long c) { return tighten(y, x, -c); }

  long lower(int v) const { return -at(0, v); }
  long upper(int v) const { return at(v, 0); }

 private:
  int n_;
  std::vector<long> m_;
};

struct ScaledPrime {
  int var;
  long scale;
  long shift;  // value = scale * var' + shift
  bool positive;
};

struct Branch {
  std::vector<long> scale;
  std::vector<long> par;
};

class Solver {
 public:
  Solver(const NumSystem& sys, long bound, std::size_t budget)
      : sys_(sys), bound_(bound), budget_(budget) {}

  NumResult run() {
    const int n = sys_.nvars;
    std::vector<int> par(n, -1);
    par[0] = 0;
    for (auto [v, p] : sys_.parity) {
      if (par[v] == -1) {
        par[v] = p;
      } else if (par[v] != p) {
        return {NumStatus::Unsat, {}, "parity conflict"};
      }
    }
    for (std::size_t i = 0; i < sys_.primes.size(); ++i)
      for (std::size_t j = i + 1; j < sys_.primes.size(); ++j) {
        const auto& a = sys_.primes[i];
        const auto& b = sys_.primes[j];
        if (a.var == b.var && a.offset == b.offset && a.positive != b.positive)
          return {NumStatus::Unsat, {}, "prime and notprime of the same number"};
      }

    // Parity interacts only within components linked by constraints between
    // two proper variables; links to the constant zero are scale-neutral.
    std::vector<int> comp(n);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int v) {
      while (comp[v] != v) v = comp[v] = comp[comp[v]];
      return v;
    };
    auto unite = [&](int a, int b) {
      if (a == 0 || b == 0) return;
      comp[find(a)] = find(b);
    };
    for (const auto& g : sys_.ge) unite(g.x, g.y);
    for (const auto& d : sys_.neq) unite(d.x, d.y);
    std::vector<bool> comp_parity(n, false);
    for (int v = 1; v < n; ++v)
      if (par[v] != -1) comp_parity[find(v)] = true;

    std::vector<int> split;
    for (int v = 1; v < n; ++v)
      if (par[v] == -1 && comp_parity[find(v)]) split.push_back(v);
    if (split.size() > 20) return {NumStatus::Unknown, {}, "too many parity splits"};

    bool any_unknown = false;
    std::string unknown_reason;
    const std::size_t combos = std::size_t{1} << split.size();
    for (std::size_t mask = 0; mask < combos; ++mask) {
      Branch br{std::vector<long>(n, 1), std::vector<long>(n, 0)};
      for (int v = 1; v < n; ++v) {
        if (comp_parity[find(v)]) {
          br.scale[v] = 2;
          br.par[v] = par[v] == -1 ? 0 : par[v];
        }
      }
      for (std::size_t k = 0; k < split.size(); ++k) br.par[split[k]] = (mask >> k) & 1;
      NumResult r = solve_branch(br);
      if (r.status == NumStatus::Sat) return r;
      if (r.status == NumStatus::Unknown) {
        any_unknown = true;
        unknown_reason = r.reason;
      }
    }
    if (any_unknown) return {NumStatus::Unknown, {}, unknown_reason};
    return {NumStatus::Unsat, {}, "no model"};
  }

 private:
  // Scaled variable v' with value(v) = scale[v] * v' + par[v]. Zero keeps
  // scale 1; a constraint against zero uses the partner's scale.
  NumResult solve_branch(const Branch& br) {
    const int n = sys_.nvars;
    Bounds b(n);
    auto scaled_ge = [&](int x, int y, long c) {
      long a = x != 0 ? br.scale[x] : (y != 0 ? br.scale[y] : 1);
      return ceil_div(c - br.par[x] + br.par[y], a);
    };
    for (int v = 1; v < n; ++v) b.at(0, v) = 0;  // v' >= 0
    for (const auto& g : sys_.ge) {
      long c = scaled_ge(g.x, g.y, g.c);
      if (-c < b.at(g.y, g.x)) b.at(g.y, g.x) = -c;
    }
    b.close();
    if (!b.consistent()) return {NumStatus::Unsat, {}, "negative cycle"};

    primes_.clear();
    for (const auto& p : sys_.primes) {
      long a = br.scale[p.var];
      long shift = br.par[p.var] + p.offset;
      if (p.positive) {
        // prime(t) implies t >= 2; an even prime is 2.
        if (!b.require_ge(p.var, 0, ceil_div(2 - shift, a)))
          return {NumStatus::Unsat, {}, "prime below 2"};
        if (a == 2 && shift % 2 == 0) {
          long k = (2 - shift) / 2;
          if (!b.require_ge(p.var, 0, k) || !b.require_ge(0, p.var, -k))
            return {NumStatus::Unsat, {}, "even prime other than 2"};
          continue;
        }
      }
      primes_.push_back({p.var, a, shift, p.positive});
    }

    neqs_.clear();
    for (const auto& d : sys_.neq) {
      long a = d.x != 0 ? br.scale[d.x] : (d.y != 0 ? br.scale[d.y] : 1);
      long rhs = d.c - br.par[d.x] + br.par[d.y];
      if (rhs % a != 0) continue;
      neqs_.push_back({d.x, d.y, rhs / a});
    }
    br_ = &br;
    return split_disequations(b, 0);
  }

  NumResult split_disequations(const Bounds& b, std::size_t idx) {
    if (idx == neqs_.size()) return enumerate_primes(b);
    const auto& d = neqs_[idx];
    // d.x - d.y != d.c
    if (d.c > b.at(d.x, d.y) || d.c < -b.at(d.y, d.x)) return split_disequations(b, idx + 1);
    NumResult result{NumStatus::Unsat, {}, "disequation"};
    {
      Bounds hi = b;
      if (hi.require_ge(d.x, d.y, d.c + 1)) {
        NumResult r = split_disequations(hi, idx + 1);
        if (r.status == NumStatus::Sat) return r;
        if (r.status == NumStatus::Unknown) result = r;
      }
    }
    {
      Bounds lo = b;
      if (lo.require_ge(d.y, d.x, 1 - d.c)) {
        NumResult r = split_disequations(lo, idx + 1);
        if (r.status == NumStatus::Sat) return r;
        if (r.status == NumStatus::Unknown) result = r;
      }
    }
    return result;
  }

  NumResult model_of(const Bounds& b) const {
    NumResult r{NumStatus::Sat, std::vector<long>(sys_.nvars, 0), ""};
    for (int v = 1; v < sys_.nvars; ++v) r.model[v] = br_->scale[v] * b.lower(v) + br_->par[v];
    return r;
  }

  NumResult enumerate_primes(const Bounds& b) {
    if (primes_.empty()) return model_of(b);
    std::vector<int> vars;
    for (const auto& p : primes_)
      if (std::find(vars.begin(), vars.end(), p.var) == vars.end()) vars.push_back(p.var);
    complete_ = true;
    tried_ = 0;
    NumResult r = assign(b, vars, 0);
    if (r.status == NumStatus::Sat) return r;
    if (complete_) return {NumStatus::Unsat, {}, "primality exhausted"};
    return {NumStatus::Unknown, {}, "primality atoms beyond enumeration bound"};
  }

  NumResult assign(const Bounds& b, const std::vector<int>& vars, std::size_t i) {
    if (i == vars.size()) return model_of(b);
    const int v = vars[i];
    const long a = br_->scale[v];
    const long p = br_->par[v];
    long lo = b.lower(v);
    long hi = b.upper(v);
    long cap = (bound_ - p) / a;  // largest v' with value <= bound
    if (hi > cap) {
      complete_ = false;
      hi = cap;
    }
    for (long val = lo; val <= hi; ++val) {
      if (++tried_ > budget_) {
        complete_ = false;
        break;
      }
      bool ok = true;
      for (const auto& pr : primes_) {
        if (pr.var != v) continue;
        long value = pr.scale * val + pr.shift;
        if (is_prime_number(value) != pr.positive) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      Bounds fixed = b;
      if (!fixed.require_ge(v, 0, val) || !fixed.require_ge(0, v, -val)) continue;
      NumResult r = assign(fixed, vars, i + 1);
      if (r.status == NumStatus::Sat) return r;
      if (tried_ > budget_) break;
    }
    return {NumStatus::Unsat, {}, ""};
  }

  const NumSystem& sys_;
  long bound_;
  std::size_t budget_;
  const Branch* br_ = nullptr;
  std::vector<ScaledPrime> primes_;
  std::vector<Disequation> neqs_;
  bool complete_ = true;
  std::size_t tried_ = 0;
};

}  // namespace

NumResult solve(const NumSystem& sys, long enum_bound, std::size_t budget) {
  return Solver(sys, enum_bound, budget).run();
}

std::vector<DiffConstraint> forced_differences(const NumSystem& sys) {
  Bounds b(sys.nvars);
  for (int v = 1; v < sys.nvars; ++v) b.at(0, v) = 0;
  for (const auto& g : sys.ge) {
    if (-g.c < b.at(g.y, g.x)) b.at(g.y, g.x) = -g.c;
  }
  b.close();
  std::vector<DiffConstraint> out;
  if (!b.consistent()) return out;
  for (int i = 0; i < sys.nvars; ++i)
    for (int j = i + 1; j < sys.nvars; ++j) {
      long ij = b.at(i, j);
      if (ij < kInf && b.at(j, i) < kInf && ij + b.at(j, i) == 0) out.push_back({i, j, ij});
    }
  return out;
}

}  // namespace chrm::detail
