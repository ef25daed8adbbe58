#include <random>

#include "doctest.h"
#include "tsa/lattices.hpp"

using namespace tsa;
using S = BoundedSet<int>;

namespace {

S random_set(std::mt19937_64& rng) {
  if (rng() % 8 == 0) return S::top();
  std::vector<int> xs;
  size_t n = rng() % 5;
  for (size_t i = 0; i < n; ++i) xs.push_back(int(rng() % 7));
  return S::from(xs, 4);
}

}  // namespace

TEST_CASE("bounded set join examples") {
  CHECK(join(S::of({1, 2}, 4), S::of({2, 3}, 4)) == S::of({1, 2, 3}, 4));
  CHECK(join(S::of({1, 2, 3}, 4), S::of({4, 5}, 4)).is_top());
  CHECK(join(S{}, S::of({7}, 4)) == S::of({7}, 4));
  CHECK(join(S::top(), S::of({7}, 4)).is_top());
  CHECK(S::of({1, 2, 3, 4, 5}, 4).is_top());
  CHECK(S::of({3, 1, 3}, 4).elems() == std::vector<int>{1, 3});
}

TEST_CASE("n-ary join goes to top past the bound") {
  std::vector<S> singles;
  for (int i = 1; i <= 5; ++i) singles.push_back(S::of({i}, 4));
  CHECK(bset_join_all(singles, 4).is_top());
  singles.pop_back();
  CHECK(bset_join_all(singles, 4) == S::of({1, 2, 3, 4}, 4));
}

TEST_CASE("order and meet") {
  CHECK(leq(S{}, S::of({1}, 4)));
  CHECK(leq(S::of({1}, 4), S::of({1, 2}, 4)));
  CHECK_FALSE(leq(S::of({3}, 4), S::of({1, 2}, 4)));
  CHECK(leq(S::of({1, 2}, 4), S::top()));
  CHECK_FALSE(leq(S::top(), S::of({1, 2}, 4)));
  CHECK(meet(S::of({1, 2}, 4), S::of({2, 3}, 4)) == S::of({2}, 4));
  CHECK(meet(S::top(), S::of({2}, 4)) == S::of({2}, 4));
  CHECK(S::top().contains(99));
  CHECK_FALSE(S{}.contains(0));
}

TEST_CASE("join laws on random sets") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    S a = random_set(rng), b = random_set(rng), c = random_set(rng);
    CHECK(join(a, b) == join(b, a));
    CHECK(join(join(a, b), c) == join(a, join(b, c)));
    CHECK(join(a, a) == a);
    CHECK(leq(a, join(a, b)));
    CHECK(leq(b, join(a, b)));
    CHECK(leq(a, b) == (join(a, b) == b));
    CHECK(leq(meet(a, b), a));
    for (int x = 0; x < 7; ++x) CHECK(meet(a, b).contains(x) == (a.contains(x) && b.contains(x)));
  }
}

TEST_CASE("ascending chains have length at most N + 2") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    S cur;
    int strict = 0;
    for (int j = 0; j < 50; ++j) {
      S next = join(cur, S::of({int(rng() % 100)}, 4));
      if (!(next == cur)) ++strict;
      cur = next;
    }
    CHECK(strict <= 5);
    CHECK(cur.is_top());
  }
}
