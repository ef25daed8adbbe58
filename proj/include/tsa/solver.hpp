#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace tsa {

using VarId = int;
using EqId = int;

// Equations accumulate: evaluating eq sets x_out := widen(x_out ⊔ fn(assignment)).
// Several equations may write the same variable.
template <class V>
struct System {
  struct Equation {
    VarId out;
    std::vector<VarId> inputs;
    std::function<V(const std::vector<V>&)> fn;
    std::string name;
  };

  std::vector<V> init;
  std::vector<std::string> names;
  std::vector<bool> widen_at;
  std::vector<Equation> eqs;

  VarId add_var(std::string name, V seed = V{}, bool widen = false) {
    init.push_back(std::move(seed));
    names.push_back(std::move(name));
    widen_at.push_back(widen);
    return VarId(init.size() - 1);
  }

  EqId add_eq(VarId out, std::vector<VarId> inputs, std::function<V(const std::vector<V>&)> fn,
              std::string name = {}) {
    eqs.push_back(Equation{out, std::move(inputs), std::move(fn), std::move(name)});
    return EqId(eqs.size() - 1);
  }
};

template <class V>
struct LatticeOps {
  std::function<V(const V&, const V&)> join;
  std::function<bool(const V&, const V&)> equal;
  std::function<V(const V&)> widen;  // applied at variables marked widen_at; may be empty
};

enum class Order { Fifo, Lifo, Reverse };

struct SolverConfig {
  size_t max_evals = 1000000;
  Order order = Order::Fifo;
  std::ostream* trace = nullptr;
};

template <class V>
struct Solution {
  std::vector<V> values;
  bool ok = true;
  size_t evals = 0;
  std::string error;
  std::vector<std::string> hot_vars;  // most frequently updated variables on failure
};

template <class V>
Solution<V> solve(const System<V>& sys, const LatticeOps<V>& ops, const SolverConfig& cfg = {}) {
  Solution<V> sol;
  sol.values = sys.init;
  size_t n_eqs = sys.eqs.size();
  std::vector<std::vector<EqId>> readers(sys.init.size());
  for (size_t e = 0; e < n_eqs; ++e)
    for (VarId v : sys.eqs[e].inputs) readers[size_t(v)].push_back(EqId(e));
  for (auto& r : readers) {
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  }

  std::deque<EqId> work;
  std::vector<char> queued(n_eqs, 1);
  for (size_t e = 0; e < n_eqs; ++e) work.push_back(EqId(cfg.order == Order::Reverse ? n_eqs - 1 - e : e));
  std::vector<size_t> updates(sys.init.size(), 0);

  while (!work.empty()) {
    if (sol.evals >= cfg.max_evals) {
      sol.ok = false;
      sol.error = "iteration cap of " + std::to_string(cfg.max_evals) + " equation evaluations exceeded";
      std::vector<size_t> order(updates.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return updates[a] > updates[b]; });
      for (size_t i = 0; i < order.size() && i < 5; ++i)
        sol.hot_vars.push_back(sys.names[order[i]] + " (" + std::to_string(updates[order[i]]) + " updates)");
      return sol;
    }
    EqId e;
    if (cfg.order == Order::Lifo) {
      e = work.back();
      work.pop_back();
    } else {
      e = work.front();
      work.pop_front();
    }
    queued[size_t(e)] = 0;
    const auto& eq = sys.eqs[size_t(e)];
    ++sol.evals;
    V contrib = eq.fn(sol.values);
    V& cur = sol.values[size_t(eq.out)];
    V next = ops.join(cur, contrib);
    if (sys.widen_at[size_t(eq.out)] && ops.widen) next = ops.widen(next);
    bool changed = !ops.equal(next, cur);
    if (cfg.trace)
      *cfg.trace << sol.evals << ' ' << (eq.name.empty() ? "eq" + std::to_string(e) : eq.name) << " -> "
                 << sys.names[size_t(eq.out)] << (changed ? " changed" : " unchanged") << '\n';
    if (!changed) continue;
    cur = std::move(next);
    ++updates[size_t(eq.out)];
    for (EqId r : readers[size_t(eq.out)]) {
      if (queued[size_t(r)]) continue;
      queued[size_t(r)] = 1;
      work.push_back(r);
    }
  }
  return sol;
}

// Every equation, re-evaluated on the assignment, adds nothing.
template <class V>
bool is_fixpoint(const System<V>& sys, const LatticeOps<V>& ops, const std::vector<V>& values,
                 std::string* failing = nullptr) {
  for (size_t e = 0; e < sys.eqs.size(); ++e) {
    const auto& eq = sys.eqs[e];
    const V& cur = values[size_t(eq.out)];
    if (!ops.equal(ops.join(cur, eq.fn(values)), cur)) {
      if (failing) *failing = eq.name.empty() ? "eq" + std::to_string(e) : eq.name;
      return false;
    }
  }
  return true;
}

}  // namespace tsa
