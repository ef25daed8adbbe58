#include <random>

#include "doctest.h"
#include "tsa/lattices.hpp"
#include "tsa/solver.hpp"

using namespace tsa;
using S = BoundedSet<int>;

namespace {

LatticeOps<S> ops() {
  return {[](const S& a, const S& b) { return join(a, b); }, [](const S& a, const S& b) { return a == b; }, {}};
}

S shift(const S& s, int k) {
  if (s.is_top()) return S::top();
  std::vector<int> xs;
  for (int x : s.elems()) xs.push_back((x + k) % 9);
  return S::from(xs, 4);
}

// Random system of monotone equations: joins and shifts of inputs, plus constants.
System<S> random_system(std::mt19937_64& rng) {
  System<S> sys;
  int n = 3 + int(rng() % 6);
  for (int i = 0; i < n; ++i) sys.add_var("v" + std::to_string(i));
  int eqs = n + int(rng() % (2 * n));
  for (int e = 0; e < eqs; ++e) {
    VarId out = VarId(rng() % n);
    int kind = int(rng() % 3);
    if (kind == 0) {
      int c = int(rng() % 9);
      sys.add_eq(out, {}, [c](const std::vector<S>&) { return S::of({c}, 4); });
    } else if (kind == 1) {
      VarId in = VarId(rng() % n);
      int k = int(rng() % 3);
      sys.add_eq(out, {in}, [in, k](const std::vector<S>& x) { return shift(x[size_t(in)], k); });
    } else {
      VarId p = VarId(rng() % n), q = VarId(rng() % n);
      sys.add_eq(out, {p, q}, [p, q](const std::vector<S>& x) { return meet(x[size_t(p)], x[size_t(q)]); });
    }
  }
  return sys;
}

}  // namespace

TEST_CASE("single equation") {
  System<S> sys;
  VarId x = sys.add_var("x");
  sys.add_eq(x, {x}, [](const std::vector<S>&) { return S::of({1}, 4); });
  auto sol = solve(sys, ops());
  CHECK(sol.ok);
  CHECK(sol.values[size_t(x)] == S::of({1}, 4));
}

TEST_CASE("cyclic pair") {
  System<S> sys;
  VarId x = sys.add_var("x"), y = sys.add_var("y");
  sys.add_eq(x, {y}, [y](const std::vector<S>& v) { return v[size_t(y)]; });
  sys.add_eq(y, {x}, [x](const std::vector<S>& v) { return v[size_t(x)]; });
  sys.add_eq(y, {}, [](const std::vector<S>&) { return S::of({2}, 4); });
  auto sol = solve(sys, ops());
  CHECK(sol.values[size_t(x)] == S::of({2}, 4));
  CHECK(sol.values[size_t(y)] == S::of({2}, 4));
  CHECK(is_fixpoint(sys, ops(), sol.values));
}

TEST_CASE("widening and the evaluation cap") {
  System<int> sys;
  VarId x = sys.add_var("x", 0, true);
  sys.add_eq(x, {x}, [x](const std::vector<int>& v) { return v[size_t(x)] + 1; });
  LatticeOps<int> o{[](int a, int b) { return std::max(a, b); }, [](int a, int b) { return a == b; }, {}};
  SolverConfig cfg;
  cfg.max_evals = 50;
  auto capped = solve(sys, o, cfg);
  CHECK_FALSE(capped.ok);
  CHECK_FALSE(capped.hot_vars.empty());
  o.widen = [](int v) { return std::min(v, 10); };
  auto sol = solve(sys, o, cfg);
  CHECK(sol.ok);
  CHECK(sol.values[size_t(x)] == 10);
}

TEST_CASE("order independence and stability") {
  std::mt19937_64 rng(51);
  for (int i = 0; i < 300; ++i) {
    System<S> sys = random_system(rng);
    SolverConfig fifo, lifo, rev;
    lifo.order = Order::Lifo;
    rev.order = Order::Reverse;
    auto a = solve(sys, ops(), fifo), b = solve(sys, ops(), lifo), c = solve(sys, ops(), rev);
    REQUIRE(a.ok);
    CHECK(a.values == b.values);
    CHECK(a.values == c.values);
    CHECK(is_fixpoint(sys, ops(), a.values));
    System<S> again = sys;
    again.init = a.values;
    auto d = solve(again, ops());
    CHECK(d.values == a.values);
    for (size_t v = 0; v < a.values.size(); ++v) CHECK(leq(sys.init[v], a.values[v]));
  }
}
