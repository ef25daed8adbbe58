#include "tsa/alloc_path.hpp"

namespace tsa {

AllocPath enter_call_path(CallSite, const AllocPath& p, size_t kh) {
  AllocPath q = p;
  if (q.deep || q.site.global) return q;
  if (q.depth + 1 > kh) {
    q.depth = uint32_t(kh);
    q.deep = true;
  } else {
    q.depth += 1;
  }
  return q;
}

namespace {

AllocPath exact_exit(CallSite site, AllocPath q, size_t kh) {
  if (q.depth >= 1) {
    q.depth -= 1;
    return q;
  }
  if (q.long_escapes) return q;
  q.escapes.push_back(site);
  if (q.escapes.size() > kh) {
    q.escapes.resize(kh);
    q.long_escapes = true;
  }
  return q;
}

}  // namespace

std::vector<AllocPath> exit_call_path(CallSite site, const AllocPath& p, size_t kh) {
  if (p.site.global) return {p};
  if (!p.deep) return {exact_exit(site, p, kh)};
  AllocPath exact = p;
  exact.deep = false;
  return {exact, p};
}

bool is_singular(const AllocPath& p, const ProgramIndex& idx) {
  if (p.collapsed()) return false;
  if (p.site.kind == AllocSite::Kind::Literal && idx.loop(p.site.id)) return false;
  for (CallSite c : p.escapes)
    if (idx.loop(c)) return false;
  return true;
}

}  // namespace tsa
