#include "random_values.hpp"

namespace tsa::testing {

namespace {

int roll(std::mt19937_64& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

std::vector<CallSite> word(std::mt19937_64& rng, int alphabet, size_t len) {
  std::vector<CallSite> w;
  for (size_t i = 0; i < len; ++i) w.push_back(CallSite(1 + roll(rng, alphabet)));
  return w;
}

}  // namespace

std::vector<Stack> all_stacks(int alphabet, size_t max_depth) {
  std::vector<Stack> out = {{}};
  for (size_t i = 0; i < out.size(); ++i) {
    if (out[i].size() == max_depth) continue;
    for (int a = 1; a <= alphabet; ++a) {
      Stack s = out[i];
      s.push_back(a);
      out.push_back(s);
    }
  }
  return out;
}

Stack random_stack(std::mt19937_64& rng, int alphabet, size_t max_depth) {
  return word(rng, alphabet, size_t(roll(rng, int(max_depth) + 1)));
}

Ctx random_ctx(std::mt19937_64& rng, int alphabet, size_t max_prefix) {
  std::vector<CtxPart> parts;
  int n = roll(rng, 4);
  for (int i = 0; i < n; ++i) {
    CtxPart p{word(rng, alphabet, size_t(roll(rng, int(max_prefix) + 1))), {}};
    int holes = roll(rng, 3);
    for (int h = 0; h < holes; ++h) p.holes.push_back(word(rng, alphabet, size_t(1 + roll(rng, 2))));
    parts.push_back(p);
  }
  Ctx c = Ctx::normalize(parts);
  return roll(rng, 5) == 0 ? ~c : c;
}

RawVal random_raw(std::mt19937_64& rng, int alphabet) {
  RawVal r;
  if (roll(rng, 8) == 0) {
    r.ints = BoundedSet<int64_t>::top();
  } else {
    std::vector<int64_t> xs;
    for (int i = 0, n = roll(rng, 4); i < n; ++i) xs.push_back(roll(rng, 8) - 2);
    r.ints = BoundedSet<int64_t>::from(xs, 4);
  }
  std::vector<std::string> ss;
  for (int i = 0, n = roll(rng, 3); i < n; ++i) ss.push_back(roll(rng, 2) ? "a" : "b");
  r.strs = BoundedSet<std::string>::from(ss, 4);
  r.t = roll(rng, 4) == 0;
  r.f = roll(rng, 4) == 0;
  r.null = roll(rng, 3) == 0;
  if (roll(rng, 3) == 0) r.paths.push_back(random_path(rng, alphabet, 3));
  return r;
}

CtxVal random_ctxval(std::mt19937_64& rng, int alphabet) {
  std::vector<CtxEntry> cells;
  Ctx used;
  for (int i = 0, n = roll(rng, 4); i < n; ++i) {
    Ctx c = random_ctx(rng, alphabet, 2) - used;
    used = used | c;
    cells.push_back(CtxEntry{c, random_raw(rng, alphabet)});
  }
  return CtxVal::from_cells(cells);
}

AllocPath random_path(std::mt19937_64& rng, int alphabet, size_t kh) {
  AllocPath p = AllocPath::at(roll(rng, 4) == 0 ? AllocSite::env(1 + roll(rng, 2)) : AllocSite::literal(100 + roll(rng, 2)));
  p.escapes = word(rng, alphabet, size_t(roll(rng, int(kh) + 1)));
  p.depth = uint32_t(roll(rng, int(kh) + 1));
  p.deep = p.depth == kh && roll(rng, 2) == 0;
  return p;
}

AbsState random_state(std::mt19937_64& rng, int alphabet, size_t kh) {
  AbsState s;
  for (int i = 0, n = roll(rng, 4); i < n; ++i) {
    Payload p;
    p.set("x", random_ctxval(rng, alphabet));
    if (roll(rng, 2)) p.set("y", random_ctxval(rng, alphabet));
    if (roll(rng, 3) == 0) p.arr = random_ctxval(rng, alphabet);
    s.put(random_path(rng, alphabet, kh), std::move(p));
  }
  return s;
}

}  // namespace tsa::testing
