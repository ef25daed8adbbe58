#include "tsa/heap.hpp"

#include <cassert>
#include <set>

namespace tsa {

namespace {

void canonicalize(Payload& p) {
  for (auto it = p.fields.begin(); it != p.fields.end();) {
    if (it->second == p.dflt) it = p.fields.erase(it);
    else ++it;
  }
}

const Payload& bottom_payload() {
  static const Payload b;
  return b;
}

}  // namespace

const CtxVal& Payload::get(const std::string& id) const {
  auto it = fields.find(id);
  return it == fields.end() ? dflt : it->second;
}

bool Payload::is_bottom() const { return fields.empty() && dflt.is_bottom() && arr.is_bottom(); }

void Payload::set(const std::string& id, CtxVal v) {
  if (v == dflt) fields.erase(id);
  else fields[id] = std::move(v);
}

Payload payload_join(const Payload& a, const Payload& b) {
  if (b.is_bottom()) return a;
  if (a.is_bottom()) return b;
  Payload out;
  out.dflt = cv_join(a.dflt, b.dflt);
  out.arr = cv_join(a.arr, b.arr);
  auto ia = a.fields.begin(), ib = b.fields.begin();
  while (ia != a.fields.end() || ib != b.fields.end()) {
    if (ib == b.fields.end() || (ia != a.fields.end() && ia->first < ib->first)) {
      out.fields[ia->first] = cv_join(ia->second, b.dflt);
      ++ia;
    } else if (ia == a.fields.end() || ib->first < ia->first) {
      out.fields[ib->first] = cv_join(a.dflt, ib->second);
      ++ib;
    } else {
      out.fields[ia->first] = cv_join(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  canonicalize(out);
  return out;
}

bool payload_leq(const Payload& a, const Payload& b) {
  if (!cv_leq(a.dflt, b.dflt) || !cv_leq(a.arr, b.arr)) return false;
  for (const auto& [id, v] : a.fields)
    if (!cv_leq(v, b.get(id))) return false;
  for (const auto& [id, v] : b.fields)
    if (!a.fields.count(id) && !cv_leq(a.dflt, v)) return false;
  return true;
}

Payload payload_map(const Payload& p, const std::function<CtxVal(const CtxVal&)>& f) {
  Payload out;
  out.dflt = f(p.dflt);
  out.arr = f(p.arr);
  for (const auto& [id, v] : p.fields) out.fields[id] = f(v);
  canonicalize(out);
  return out;
}

const Payload& AbsState::at(const AllocPath& p) const {
  auto it = cells_.find(p);
  return it == cells_.end() ? bottom_payload() : *it->second;
}

void AbsState::put(const AllocPath& p, Payload payload) {
  if (payload.is_bottom()) cells_.erase(p);
  else cells_[p] = std::make_shared<const Payload>(std::move(payload));
}

void AbsState::put(const AllocPath& p, PayloadPtr payload) {
  if (!payload || payload->is_bottom()) cells_.erase(p);
  else cells_[p] = std::move(payload);
}

bool operator==(const AbsState& a, const AbsState& b) {
  if (a.cells_.size() != b.cells_.size()) return false;
  auto ib = b.cells_.begin();
  for (const auto& [p, v] : a.cells_) {
    if (!(p == ib->first)) return false;
    if (v != ib->second && !(*v == *ib->second)) return false;
    ++ib;
  }
  return true;
}

AbsState state_join(const AbsState& a, const AbsState& b) {
  if (b.is_bottom()) return a;
  if (a.is_bottom()) return b;
  AbsState out = a;
  for (const auto& [p, v] : b.cells()) {
    if (!out.has(p)) {
      out.put(p, v);
      continue;
    }
    auto cur = a.cells().at(p);
    if (cur == v || *cur == *v) continue;
    out.put(p, payload_join(*cur, *v));
  }
  return out;
}

bool state_leq(const AbsState& a, const AbsState& b) {
  for (const auto& [p, v] : a.cells()) {
    auto it = b.cells().find(p);
    if (it == b.cells().end()) return false;
    if (it->second != v && !payload_leq(*v, *it->second)) return false;
  }
  return true;
}

AbsState state_map(const AbsState& s, const std::function<CtxVal(const CtxVal&)>& f) {
  AbsState out;
  for (const auto& [p, v] : s.cells()) out.put(p, payload_map(*v, f));
  return out;
}

AbsState state_restrict(const AbsState& s, const Ctx& c) {
  if (c.is_all()) return s;
  if (c.is_empty()) return {};
  return state_map(s, [&](const CtxVal& v) { return cv_restrict(v, c); });
}

AbsState state_widen(const AbsState& s, size_t k, size_t max_entries) {
  AbsState out;
  for (const auto& [p, v] : s.cells()) {
    bool wide = false;
    auto check = [&](const CtxVal& x) {
      if (x.size() > max_entries) wide = true;
      for (const auto& e : x.entries())
        if (e.ctx.depth() > k) wide = true;
    };
    check(v->dflt);
    check(v->arr);
    for (const auto& kv : v->fields) check(kv.second);
    if (!wide) {
      out.put(p, v);
      continue;
    }
    out.put(p, payload_map(*v, [&](const CtxVal& x) { return cv_limit(cv_truncate(x, k), max_entries); }));
  }
  return out;
}

Payload enter_call(CallSite site, const Payload& p, size_t kh) {
  return payload_map(p, [&](const CtxVal& v) { return enter_call(site, v, kh); });
}

Payload exit_call(CallSite site, const Payload& p, size_t kh) {
  return payload_map(p, [&](const CtxVal& v) { return exit_call(site, v, kh); });
}

AbsState enter_call(CallSite site, const AbsState& s, size_t kh) {
  AbsState out;
  for (const auto& [p, v] : s.cells()) {
    AllocPath q = enter_call_path(site, p, kh);
    Payload moved = enter_call(site, *v, kh);
    if (out.has(q)) moved = payload_join(out.at(q), moved);
    out.put(q, std::move(moved));
  }
  return out;
}

AbsState exit_call(CallSite site, const AbsState& s, size_t kh) {
  AbsState out;
  for (const auto& [p, v] : s.cells()) {
    Payload moved = exit_call(site, *v, kh);
    if (moved.is_bottom()) continue;
    for (const auto& q : exit_call_path(site, p, kh)) {
      if (out.has(q)) out.put(q, payload_join(out.at(q), moved));
      else out.put(q, moved);
    }
  }
  return out;
}

AbsState state_collect(const AbsState& s, const CtxVal& root) {
  auto local = [](const AllocPath& p) { return p.depth == 0 && !p.deep && !p.site.global; };
  std::set<AllocPath> seen;
  std::vector<const AllocPath*> work;
  auto visit_raw = [&](const RawVal& r) {
    auto reach = [&](const AllocPath& p) {
      if (!local(p) || !s.has(p) || !seen.insert(p).second) return;
      work.push_back(&*seen.find(p));
    };
    for (const auto& p : r.paths) reach(p);
    for (const auto& f : r.funs) reach(f.closure);
  };
  auto visit = [&](const Payload& p) {
    for (const auto& e : p.dflt.entries()) visit_raw(e.raw);
    for (const auto& e : p.arr.entries()) visit_raw(e.raw);
    for (const auto& kv : p.fields)
      for (const auto& e : kv.second.entries()) visit_raw(e.raw);
  };
  bool any_local = false;
  for (const auto& [p, v] : s.cells()) {
    if (local(p)) any_local = true;
    else visit(*v);
  }
  if (!any_local) return s;
  for (const auto& e : root.entries()) visit_raw(e.raw);
  while (!work.empty()) {
    const AllocPath* p = work.back();
    work.pop_back();
    visit(s.at(*p));
  }
  AbsState out;
  for (const auto& [p, v] : s.cells())
    if (!local(p) || seen.count(p)) out.put(p, v);
  return out;
}

AbsState bind_s(const CtxVal& v, const std::function<AbsState(const RawVal&)>& f) {
  if (v.size() == 1 && v.entries()[0].ctx.is_all()) return f(v.entries()[0].raw);
  AbsState out;
  for (const auto& e : v.entries()) out = state_join(out, state_restrict(f(e.raw), e.ctx));
  Ctx rest = ~v.support();
  if (!rest.is_empty()) {
    AbsState zero = f(RawVal{});
    if (!zero.is_bottom()) out = state_join(out, state_restrict(zero, rest));
  }
  return out;
}

AbsState state_write_prop(const AbsState& s, const std::vector<AllocPath>& targets, const std::string& field,
                          const CtxVal& v, const ProgramIndex& idx) {
  if (targets.empty()) return s;
  AbsState out = s;
  if (targets.size() == 1 && is_singular(targets[0], idx)) {
    Payload p = s.at(targets[0]);
    p.set(field, v);
    out.put(targets[0], std::move(p));
    return out;
  }
  for (const auto& t : targets) {
    Payload p = s.at(t);
    p.set(field, cv_join(p.get(field), v));
    out.put(t, std::move(p));
  }
  return out;
}

AbsState state_write_index(const AbsState& s, const std::vector<AllocPath>& targets, const CtxVal& v) {
  AbsState out = s;
  for (const auto& t : targets) {
    Payload p = s.at(t);
    p.arr = cv_join(p.arr, v);
    out.put(t, std::move(p));
  }
  return out;
}

CtxVal state_read_prop(const AbsState& s, const CtxVal& target, const std::string& field) {
  return bind_v(target, [&](const RawVal& r) {
    CtxVal acc;
    for (const auto& p : r.paths) acc = cv_join(acc, s.at(p).get(field));
    return acc;
  });
}

CtxVal state_read_index(const AbsState& s, const CtxVal& target) {
  return bind_v(target, [&](const RawVal& r) {
    CtxVal acc;
    for (const auto& p : r.paths) acc = cv_join(acc, s.at(p).arr);
    return acc;
  });
}

Ctx state_reach(const AbsState& s, const AllocPath& env) { return s.at(env).dflt.support(); }

}  // namespace tsa
