#include "tsa/absval.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <tuple>

namespace tsa {

namespace {

template <class T>
std::vector<T> sorted_union(const std::vector<T>& a, const std::vector<T>& b) {
  if (b.empty()) return a;
  if (a.empty()) return b;
  std::vector<T> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

template <class T>
void normalize(std::vector<T>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

size_t bound_of(const RawVal& a, const RawVal& b) {
  return std::max({a.ints.bound(), b.ints.bound(), a.strs.bound(), b.strs.bound(), size_t(1)});
}

using IntOp = bool (*)(int64_t, int64_t, int64_t*);

bool op_add(int64_t a, int64_t b, int64_t* r) { return !__builtin_add_overflow(a, b, r); }
bool op_sub(int64_t a, int64_t b, int64_t* r) { return !__builtin_sub_overflow(a, b, r); }
bool op_mul(int64_t a, int64_t b, int64_t* r) { return !__builtin_mul_overflow(a, b, r); }
bool op_div(int64_t a, int64_t b, int64_t* r) {
  if (b == 0) return false;
  if (a == INT64_MIN && b == -1) return false;
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
  *r = q;
  return true;
}

BoundedSet<int64_t> int_op(const BoundedSet<int64_t>& a, const BoundedSet<int64_t>& b, size_t n, IntOp op) {
  if (a.is_bottom() || b.is_bottom()) return {};
  if (a.is_top() || b.is_top()) return BoundedSet<int64_t>::top();
  std::vector<int64_t> out;
  for (int64_t x : a.elems())
    for (int64_t y : b.elems()) {
      int64_t r;
      if (op(x, y, &r)) out.push_back(r);
    }
  return BoundedSet<int64_t>::from(std::move(out), n);
}

// Groups cells by raw value; contexts of cells with equal raw values are united.
CtxVal group(const std::map<RawVal, Ctx>& m);

}  // namespace

bool RawVal::is_bottom() const {
  return ints.is_bottom() && strs.is_bottom() && !t && !f && !null && paths.empty() && funs.empty();
}

bool operator<(const RawVal& a, const RawVal& b) {
  return std::tie(a.ints, a.strs, a.t, a.f, a.null, a.paths, a.funs) <
         std::tie(b.ints, b.strs, b.t, b.f, b.null, b.paths, b.funs);
}

RawVal raw_int(int64_t v, size_t n) {
  RawVal r;
  r.ints = BoundedSet<int64_t>::of({v}, n);
  return r;
}

RawVal raw_str(const std::string& s, size_t n) {
  RawVal r;
  r.strs = BoundedSet<std::string>::of({s}, n);
  return r;
}

RawVal raw_bool(bool b) {
  RawVal r;
  (b ? r.t : r.f) = true;
  return r;
}

RawVal raw_null() {
  RawVal r;
  r.null = true;
  return r;
}

RawVal raw_path(const AllocPath& p) {
  RawVal r;
  r.paths.push_back(p);
  return r;
}

RawVal raw_fun(const AllocPath& closure, FunctionId fn) {
  RawVal r;
  r.funs.push_back(FunRef{closure, fn});
  return r;
}

RawVal raw_join(const RawVal& a, const RawVal& b) {
  if (b.is_bottom()) return a;
  if (a.is_bottom()) return b;
  RawVal r;
  r.ints = join(a.ints, b.ints);
  r.strs = join(a.strs, b.strs);
  r.t = a.t || b.t;
  r.f = a.f || b.f;
  r.null = a.null || b.null;
  r.paths = sorted_union(a.paths, b.paths);
  r.funs = sorted_union(a.funs, b.funs);
  return r;
}

bool raw_leq(const RawVal& a, const RawVal& b) {
  return leq(a.ints, b.ints) && leq(a.strs, b.strs) && (!a.t || b.t) && (!a.f || b.f) &&
         (!a.null || b.null) && std::includes(b.paths.begin(), b.paths.end(), a.paths.begin(), a.paths.end()) &&
         std::includes(b.funs.begin(), b.funs.end(), a.funs.begin(), a.funs.end());
}

RawVal raw_add(const RawVal& a, const RawVal& b) {
  size_t n = bound_of(a, b);
  RawVal r;
  r.ints = int_op(a.ints, b.ints, n, op_add);
  if (a.strs.is_bottom() || b.strs.is_bottom()) {
  } else if (a.strs.is_top() || b.strs.is_top()) {
    r.strs = BoundedSet<std::string>::top();
  } else {
    std::vector<std::string> out;
    for (const auto& x : a.strs.elems())
      for (const auto& y : b.strs.elems()) out.push_back(x + y);
    r.strs = BoundedSet<std::string>::from(std::move(out), n);
  }
  return r;
}

RawVal raw_sub(const RawVal& a, const RawVal& b) {
  RawVal r;
  r.ints = int_op(a.ints, b.ints, bound_of(a, b), op_sub);
  return r;
}

RawVal raw_mul(const RawVal& a, const RawVal& b) {
  RawVal r;
  r.ints = int_op(a.ints, b.ints, bound_of(a, b), op_mul);
  return r;
}

RawVal raw_div(const RawVal& a, const RawVal& b) {
  RawVal r;
  r.ints = int_op(a.ints, b.ints, bound_of(a, b), op_div);
  if (!b.ints.is_top() && b.ints.elems() == std::vector<int64_t>{0}) r.ints = {};
  return r;
}

bool may_truthy(const RawVal& r) {
  if (r.t || !r.paths.empty() || !r.funs.empty()) return true;
  if (r.ints.is_top() || r.strs.is_top()) return true;
  for (int64_t x : r.ints.elems())
    if (x != 0) return true;
  for (const auto& s : r.strs.elems())
    if (!s.empty()) return true;
  return false;
}

bool may_falsy(const RawVal& r) {
  if (r.f || r.null) return true;
  if (r.ints.contains(0) || r.strs.contains(std::string())) return true;
  return false;
}

namespace {

CtxVal group(const std::map<RawVal, Ctx>& m) {
  std::vector<CtxEntry> cells;
  cells.reserve(m.size());
  for (const auto& [raw, ctx] : m)
    if (!ctx.is_empty() && !raw.is_bottom()) cells.push_back(CtxEntry{ctx, raw});
  return CtxVal::from_cells(std::move(cells));
}

void add_cell(std::map<RawVal, Ctx>& m, const Ctx& c, RawVal r) {
  if (c.is_empty() || r.is_bottom()) return;
  auto it = m.find(r);
  if (it == m.end()) m.emplace(std::move(r), c);
  else it->second = it->second | c;
}

}  // namespace

CtxVal CtxVal::constant(const RawVal& r) { return at(Ctx::all(), r); }

CtxVal CtxVal::at(const Ctx& c, const RawVal& r) {
  CtxVal v;
  if (!c.is_empty() && !r.is_bottom()) v.entries_.push_back(CtxEntry{c, r});
  return v;
}

CtxVal CtxVal::from_cells(std::vector<CtxEntry> cells) {
  std::sort(cells.begin(), cells.end(), [](const CtxEntry& a, const CtxEntry& b) { return a.raw < b.raw; });
  CtxVal v;
  for (auto& c : cells) {
    if (c.ctx.is_empty() || c.raw.is_bottom()) continue;
    if (!v.entries_.empty() && v.entries_.back().raw == c.raw) {
      v.entries_.back().ctx = v.entries_.back().ctx | c.ctx;
    } else {
      v.entries_.push_back(std::move(c));
    }
  }
  return v;
}

RawVal CtxVal::lookup(const Stack& s) const {
  for (const auto& e : entries_)
    if (e.ctx.contains(s)) return e.raw;
  return {};
}

Ctx CtxVal::support() const {
  Ctx c;
  for (const auto& e : entries_) c = c | e.ctx;
  return c;
}

RawVal CtxVal::flatten() const {
  RawVal r;
  for (const auto& e : entries_) r = raw_join(r, e.raw);
  return r;
}

CtxVal cv_join(const CtxVal& a, const CtxVal& b) {
  if (b.is_bottom()) return a;
  if (a.is_bottom()) return b;
  if (a == b) return a;
  return lift2(a, b, raw_join);
}

bool cv_leq(const CtxVal& a, const CtxVal& b) {
  if (a.is_bottom()) return true;
  Ctx supp_b = b.support();
  for (const auto& ea : a.entries()) {
    if (!ea.ctx.leq(supp_b)) return false;
    for (const auto& eb : b.entries())
      if (!ea.ctx.disjoint(eb.ctx) && !raw_leq(ea.raw, eb.raw)) return false;
  }
  return true;
}

CtxVal lift1(const CtxVal& a, const RawFn& f) {
  std::map<RawVal, Ctx> m;
  for (const auto& e : a.entries()) add_cell(m, e.ctx, f(e.raw));
  RawVal zero = f(RawVal{});
  if (!zero.is_bottom()) add_cell(m, ~a.support(), zero);
  return group(m);
}

CtxVal lift2(const CtxVal& a, const CtxVal& b, const RawFn2& f) {
  std::map<RawVal, Ctx> m;
  Ctx sa = a.support(), sb = b.support();
  for (const auto& ea : a.entries()) {
    for (const auto& eb : b.entries()) {
      if (ea.ctx.disjoint(eb.ctx)) continue;
      add_cell(m, ea.ctx & eb.ctx, f(ea.raw, eb.raw));
    }
    RawVal lone = f(ea.raw, RawVal{});
    if (!lone.is_bottom()) add_cell(m, ea.ctx - sb, std::move(lone));
  }
  for (const auto& eb : b.entries()) {
    RawVal lone = f(RawVal{}, eb.raw);
    if (!lone.is_bottom()) add_cell(m, eb.ctx - sa, std::move(lone));
  }
  RawVal zero = f(RawVal{}, RawVal{});
  if (!zero.is_bottom()) add_cell(m, ~(sa | sb), zero);
  return group(m);
}

CtxVal lift_add(const CtxVal& a, const CtxVal& b) { return lift2(a, b, raw_add); }
CtxVal lift_sub(const CtxVal& a, const CtxVal& b) { return lift2(a, b, raw_sub); }
CtxVal lift_mul(const CtxVal& a, const CtxVal& b) { return lift2(a, b, raw_mul); }
CtxVal lift_div(const CtxVal& a, const CtxVal& b) { return lift2(a, b, raw_div); }

CtxVal enter_ctx(CallSite site, const CtxVal& v) {
  std::vector<CtxEntry> cells;
  for (const auto& e : v.entries()) cells.push_back(CtxEntry{e.ctx.enter(site), e.raw});
  return CtxVal::from_cells(std::move(cells));
}

CtxVal exit_ctx(CallSite site, const CtxVal& v) {
  std::vector<CtxEntry> cells;
  for (const auto& e : v.entries()) cells.push_back(CtxEntry{e.ctx.exit(site), e.raw});
  return CtxVal::from_cells(std::move(cells));
}

CtxVal bind_v(const CtxVal& v, const std::function<CtxVal(const RawVal&)>& f) {
  CtxVal out;
  for (const auto& e : v.entries()) out = cv_join(out, cv_restrict(f(e.raw), e.ctx));
  CtxVal zero = f(RawVal{});
  if (!zero.is_bottom()) out = cv_join(out, cv_restrict(zero, ~v.support()));
  return out;
}

CtxVal cv_restrict(const CtxVal& v, const Ctx& c) {
  if (c.is_all() || v.is_bottom()) return v;
  std::vector<CtxEntry> cells;
  for (const auto& e : v.entries()) cells.push_back(CtxEntry{e.ctx & c, e.raw});
  return CtxVal::from_cells(std::move(cells));
}

CtxVal cv_truncate(const CtxVal& v, size_t k) {
  bool deep = false;
  for (const auto& e : v.entries()) deep = deep || e.ctx.depth() > k;
  if (!deep) return v;
  CtxVal out;
  for (const auto& e : v.entries()) out = cv_join(out, CtxVal::at(e.ctx.truncate(k), e.raw));
  return out;
}

namespace {

std::vector<CallSite> first_prefix(const Ctx& c) {
  auto parts = c.parts();
  return parts.empty() ? std::vector<CallSite>{} : parts.front().prefix;
}

size_t common_prefix(const std::vector<CallSite>& a, const std::vector<CallSite>& b) {
  size_t n = 0;
  while (n < a.size() && n < b.size() && a[n] == b[n]) ++n;
  return n;
}

}  // namespace

CtxVal cv_limit(const CtxVal& v, size_t max_entries) {
  CtxVal cur = v;
  while (cur.size() > max_entries && cur.size() >= 2) {
    const auto& es = cur.entries();
    std::vector<std::vector<CallSite>> prefixes;
    for (const auto& e : es) prefixes.push_back(first_prefix(e.ctx));
    size_t bi = 0, bj = 1, best = 0;
    bool found = false;
    for (size_t i = 0; i < es.size(); ++i)
      for (size_t j = i + 1; j < es.size(); ++j) {
        size_t cp = common_prefix(prefixes[i], prefixes[j]);
        if (!found || cp > best) {
          found = true;
          best = cp;
          bi = i;
          bj = j;
        }
      }
    std::vector<CtxEntry> cells;
    for (size_t i = 0; i < es.size(); ++i)
      if (i != bi && i != bj) cells.push_back(es[i]);
    cells.push_back(CtxEntry{es[bi].ctx | es[bj].ctx, raw_join(es[bi].raw, es[bj].raw)});
    cur = CtxVal::from_cells(std::move(cells));
  }
  return cur;
}

Ctx cv_where(const CtxVal& v, const std::function<bool(const RawVal&)>& pred) {
  Ctx c;
  for (const auto& e : v.entries())
    if (pred(e.raw)) c = c | e.ctx;
  return c;
}

RawVal enter_call(CallSite site, const RawVal& r, size_t kh) {
  if (r.paths.empty() && r.funs.empty()) return r;
  RawVal out = r;
  for (auto& p : out.paths) p = enter_call_path(site, p, kh);
  for (auto& fr : out.funs) fr.closure = enter_call_path(site, fr.closure, kh);
  normalize(out.paths);
  normalize(out.funs);
  return out;
}

RawVal exit_call(CallSite site, const RawVal& r, size_t kh) {
  if (r.paths.empty() && r.funs.empty()) return r;
  RawVal out = r;
  out.paths.clear();
  out.funs.clear();
  for (const auto& p : r.paths)
    for (auto& q : exit_call_path(site, p, kh)) out.paths.push_back(std::move(q));
  for (const auto& fr : r.funs)
    for (auto& q : exit_call_path(site, fr.closure, kh)) out.funs.push_back(FunRef{std::move(q), fr.fn});
  normalize(out.paths);
  normalize(out.funs);
  return out;
}

CtxVal enter_call(CallSite site, const CtxVal& v, size_t kh) {
  std::vector<CtxEntry> cells;
  for (const auto& e : v.entries()) cells.push_back(CtxEntry{e.ctx.enter(site), enter_call(site, e.raw, kh)});
  return CtxVal::from_cells(std::move(cells));
}

CtxVal exit_call(CallSite site, const CtxVal& v, size_t kh) {
  std::map<RawVal, Ctx> m;
  for (const auto& e : v.entries()) add_cell(m, e.ctx.exit(site), exit_call(site, e.raw, kh));
  return group(m);
}

}  // namespace tsa
