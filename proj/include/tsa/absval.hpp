#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tsa/alloc_path.hpp"
#include "tsa/ctx.hpp"
#include "tsa/lattices.hpp"

namespace tsa {

struct FunRef {
  AllocPath closure;
  FunctionId fn = -1;
  friend bool operator==(const FunRef&, const FunRef&) = default;
  friend bool operator<(const FunRef& a, const FunRef& b) {
    if (a.fn != b.fn) return a.fn < b.fn;
    return a.closure < b.closure;
  }
};

struct RawVal {
  BoundedSet<int64_t> ints;
  BoundedSet<std::string> strs;
  bool t = false, f = false, null = false;
  std::vector<AllocPath> paths;  // sorted, unique
  std::vector<FunRef> funs;      // sorted, unique

  bool is_bottom() const;
  friend bool operator==(const RawVal&, const RawVal&) = default;
  friend bool operator<(const RawVal& a, const RawVal& b);
};

RawVal raw_int(int64_t v, size_t n);
RawVal raw_str(const std::string& s, size_t n);
RawVal raw_bool(bool b);
RawVal raw_null();
RawVal raw_path(const AllocPath& p);
RawVal raw_fun(const AllocPath& closure, FunctionId fn);

RawVal raw_join(const RawVal& a, const RawVal& b);
bool raw_leq(const RawVal& a, const RawVal& b);

RawVal raw_add(const RawVal& a, const RawVal& b);
RawVal raw_sub(const RawVal& a, const RawVal& b);
RawVal raw_mul(const RawVal& a, const RawVal& b);
RawVal raw_div(const RawVal& a, const RawVal& b);

// Whether some concrete value described by r is truthy / falsy.
bool may_truthy(const RawVal& r);
bool may_falsy(const RawVal& r);

struct CtxEntry {
  Ctx ctx;
  RawVal raw;
  friend bool operator==(const CtxEntry&, const CtxEntry&) = default;
};

// Finitely representable map Stack -> RawVal: disjoint contexts, distinct non-bottom
// raw values, entries sorted by raw value.
class CtxVal {
 public:
  CtxVal() = default;
  static CtxVal constant(const RawVal& r);  // [* -> r]
  static CtxVal at(const Ctx& c, const RawVal& r);
  // Cells must have pairwise disjoint contexts; equal raw values are merged.
  static CtxVal from_cells(std::vector<CtxEntry> cells);

  const std::vector<CtxEntry>& entries() const { return entries_; }
  bool is_bottom() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }
  RawVal lookup(const Stack& s) const;
  Ctx support() const;
  // Join of all raw values, ignoring contexts.
  RawVal flatten() const;

  friend bool operator==(const CtxVal&, const CtxVal&) = default;

 private:
  std::vector<CtxEntry> entries_;
};

using RawFn = std::function<RawVal(const RawVal&)>;
using RawFn2 = std::function<RawVal(const RawVal&, const RawVal&)>;

CtxVal cv_join(const CtxVal& a, const CtxVal& b);
bool cv_leq(const CtxVal& a, const CtxVal& b);
CtxVal lift1(const CtxVal& a, const RawFn& f);
CtxVal lift2(const CtxVal& a, const CtxVal& b, const RawFn2& f);
CtxVal lift_add(const CtxVal& a, const CtxVal& b);
CtxVal lift_sub(const CtxVal& a, const CtxVal& b);
CtxVal lift_mul(const CtxVal& a, const CtxVal& b);
CtxVal lift_div(const CtxVal& a, const CtxVal& b);
CtxVal enter_ctx(CallSite site, const CtxVal& v);
CtxVal exit_ctx(CallSite site, const CtxVal& v);
CtxVal bind_v(const CtxVal& v, const std::function<CtxVal(const RawVal&)>& f);
CtxVal cv_restrict(const CtxVal& v, const Ctx& c);
CtxVal cv_truncate(const CtxVal& v, size_t k);
// Joins entries (closest first prefixes first) until at most max_entries remain.
CtxVal cv_limit(const CtxVal& v, size_t max_entries);
// Union of the contexts whose raw value satisfies pred.
Ctx cv_where(const CtxVal& v, const std::function<bool(const RawVal&)>& pred);

// enter_call / exit_call on values: remap allocation paths, then shift contexts.
RawVal enter_call(CallSite site, const RawVal& r, size_t kh);
RawVal exit_call(CallSite site, const RawVal& r, size_t kh);
CtxVal enter_call(CallSite site, const CtxVal& v, size_t kh);
CtxVal exit_call(CallSite site, const CtxVal& v, size_t kh);

}  // namespace tsa
