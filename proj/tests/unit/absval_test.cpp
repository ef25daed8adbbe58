#include <random>

#include "doctest.h"
#include "support/random_values.hpp"
#include "tsa/absval.hpp"

using namespace tsa;
using namespace tsa::testing;

namespace {

constexpr CallSite a = 1, b = 2, g = 3;

RawVal ints(std::initializer_list<int64_t> xs) {
  RawVal r;
  r.ints = BoundedSet<int64_t>::of(xs, 4);
  return r;
}

RawVal strs(std::initializer_list<std::string> xs) {
  RawVal r;
  r.strs = BoundedSet<std::string>::of(xs, 4);
  return r;
}

Ctx sub(std::vector<CallSite> p) { return Ctx::subtree(p); }

CtxVal cells(std::vector<std::pair<Ctx, RawVal>> xs) {
  std::vector<CtxEntry> es;
  for (auto& [c, r] : xs) es.push_back(CtxEntry{c, r});
  return CtxVal::from_cells(es);
}

void check_canonical(const CtxVal& v) {
  const auto& es = v.entries();
  for (size_t i = 0; i < es.size(); ++i) {
    CHECK_FALSE(es[i].raw.is_bottom());
    CHECK_FALSE(es[i].ctx.is_empty());
    for (size_t j = i + 1; j < es.size(); ++j) {
      CHECK(es[i].ctx.disjoint(es[j].ctx));
      CHECK_FALSE(es[i].raw == es[j].raw);
    }
  }
}

}  // namespace

TEST_CASE("raw arithmetic") {
  CHECK(raw_add(ints({3}), ints({1})) == ints({4}));
  CHECK(raw_add(strs({"a"}), strs({"b"})) == strs({"ab"}));
  CHECK(raw_div(ints({7}), ints({0, 2})) == ints({3}));
  CHECK(raw_div(ints({-7}), ints({2})) == ints({-4}));
  CHECK(raw_sub(ints({5}), ints({1, 2})) == ints({3, 4}));
  CHECK(raw_mul(ints({2, 3}), ints({4})) == ints({8, 12}));
  CHECK(raw_add(ints({1}), RawVal{}).is_bottom());
  RawVal top;
  top.ints = BoundedSet<int64_t>::top();
  CHECK(raw_add(top, ints({1})).ints.is_top());
  CHECK(raw_mul(ints({1, 2, 3}), ints({10, 20})).ints.is_top());
}

TEST_CASE("truthiness") {
  CHECK(may_truthy(ints({0, 1})));
  CHECK(may_falsy(ints({0, 1})));
  CHECK_FALSE(may_falsy(ints({5})));
  CHECK(may_falsy(strs({""})));
  CHECK_FALSE(may_truthy(raw_null()));
  CHECK(may_truthy(raw_bool(true)));
  CHECK_FALSE(may_truthy(RawVal{}));
}

TEST_CASE("lookup and join examples") {
  CtxVal x = cells({{sub({a}), ints({3})}, {sub({b}), ints({5})}});
  CHECK(x.lookup({a, g}) == ints({3}));
  CHECK(x.lookup({g}).is_bottom());
  CHECK(CtxVal::constant(ints({1})).lookup({b, b, a}) == ints({1}));
  CHECK(cv_join(CtxVal::at(sub({a}), ints({3})), CtxVal::at(sub({b}), ints({5}))) == x);
  CHECK(cv_join(x, CtxVal{}) == x);
  CHECK(cv_join(CtxVal::at(sub({a}), ints({1})), CtxVal::at(sub({a}), ints({2}))) == CtxVal::at(sub({a}), ints({1, 2})));
  CHECK(CtxVal::at(sub({a}), RawVal{}).is_bottom());
  CHECK(cells({{sub({a}), ints({1})}, {sub({b}), ints({1})}}).size() == 1);
}

TEST_CASE("lifted operations examples") {
  CtxVal x = cells({{sub({a}), ints({3})}, {sub({b}), ints({5})}});
  CHECK(lift_add(x, CtxVal::constant(ints({1}))) == cells({{sub({a}), ints({4})}, {sub({b}), ints({6})}}));
  CHECK(lift_add(CtxVal{}, x).is_bottom());
  CHECK(lift_mul(CtxVal::at(sub({a}), ints({2})), cells({{sub({a}), ints({3})}, {sub({b}), ints({7})}})) ==
        CtxVal::at(sub({a}), ints({6})));
}

TEST_CASE("enter and exit examples") {
  CHECK(enter_ctx(a, CtxVal::constant(ints({3}))) == CtxVal::at(sub({a}), ints({3})));
  CHECK(exit_ctx(a, cells({{sub({a}), ints({4})}, {sub({b}), ints({6})}})) == CtxVal::constant(ints({4})));
}

TEST_CASE("bind examples") {
  CtxVal v = CtxVal::at(sub({a}), ints({7}));
  CHECK(bind_v(v, [](const RawVal& r) { return CtxVal::constant(r); }) == v);
  auto f = [](const RawVal& r) { return r.is_bottom() ? CtxVal::constant(ints({0})) : CtxVal::constant(r); };
  CHECK(bind_v(CtxVal{}, f) == CtxVal::constant(ints({0})));
  CtxVal fns = cells({{sub({a}), ints({1})}, {sub({b}), ints({2})}});
  CtxVal rets = bind_v(fns, [](const RawVal& r) {
    if (r == ints({1})) return cells({{sub({a}), strs({"one"})}, {sub({b}), strs({"x"})}});
    return CtxVal::constant(strs({"two"}));
  });
  CHECK(rets == cells({{sub({a}), strs({"one"})}, {~sub({a}), strs({"two"})}}));
}

TEST_CASE("pointwise laws on random values") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    CtxVal x = random_ctxval(rng, 3), y = random_ctxval(rng, 3), z = random_ctxval(rng, 3);
    CtxVal sum = lift_add(x, y), j = cv_join(x, y), en = enter_ctx(b, x), ex = exit_ctx(b, x);
    for (const CtxVal* v : {&sum, &j, &en, &ex}) check_canonical(*v);
    CHECK(cv_join(x, y) == cv_join(y, x));
    CHECK(cv_join(cv_join(x, y), z) == cv_join(x, cv_join(y, z)));
    CHECK(cv_join(x, x) == x);
    CHECK(cv_leq(x, j));
    CHECK(exit_ctx(b, enter_ctx(b, x)) == x);
    for (int k = 0; k < 100; ++k) {
      Stack s = random_stack(rng, 3, 6);
      CHECK(sum.lookup(s) == raw_add(x.lookup(s), y.lookup(s)));
      CHECK(j.lookup(s) == raw_join(x.lookup(s), y.lookup(s)));
      CHECK(ex.lookup(s) == x.lookup([&] { Stack t{b}; t.insert(t.end(), s.begin(), s.end()); return t; }()));
      if (!s.empty() && s[0] == b) CHECK(en.lookup(s) == x.lookup(Stack(s.begin() + 1, s.end())));
      else CHECK(en.lookup(s).is_bottom());
    }
  }
}

TEST_CASE("truncate and limit over-approximate") {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 300; ++i) {
    CtxVal x = random_ctxval(rng, 3);
    CHECK(cv_leq(x, cv_truncate(x, 1)));
    CtxVal l = cv_limit(x, 2);
    CHECK(l.size() <= 2);
    CHECK(cv_leq(x, l));
    check_canonical(l);
  }
}
