#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tsa/absval.hpp"

namespace tsa {

// Object and array summary of one abstract address. Fields not listed read as dflt.
struct Payload {
  std::map<std::string, CtxVal> fields;
  CtxVal dflt;
  CtxVal arr;

  const CtxVal& get(const std::string& id) const;
  bool is_bottom() const;
  void set(const std::string& id, CtxVal v);  // keeps the canonical form
  friend bool operator==(const Payload&, const Payload&) = default;
};

Payload payload_join(const Payload& a, const Payload& b);
bool payload_leq(const Payload& a, const Payload& b);
Payload payload_map(const Payload& p, const std::function<CtxVal(const CtxVal&)>& f);

class AbsState {
 public:
  using PayloadPtr = std::shared_ptr<const Payload>;
  using Map = std::map<AllocPath, PayloadPtr>;

  AbsState() = default;

  const Map& cells() const { return cells_; }
  bool is_bottom() const { return cells_.empty(); }
  const Payload& at(const AllocPath& p) const;  // bottom payload when absent
  bool has(const AllocPath& p) const { return cells_.count(p) != 0; }
  void put(const AllocPath& p, Payload payload);
  void put(const AllocPath& p, PayloadPtr payload);

  friend bool operator==(const AbsState& a, const AbsState& b);

 private:
  Map cells_;
};

AbsState state_join(const AbsState& a, const AbsState& b);
bool state_leq(const AbsState& a, const AbsState& b);
AbsState state_restrict(const AbsState& s, const Ctx& c);
// Widening: truncate every stored context to depth k and cap entry counts.
AbsState state_widen(const AbsState& s, size_t k, size_t max_entries);
AbsState state_map(const AbsState& s, const std::function<CtxVal(const CtxVal&)>& f);

Payload enter_call(CallSite site, const Payload& p, size_t kh);
Payload exit_call(CallSite site, const Payload& p, size_t kh);
AbsState enter_call(CallSite site, const AbsState& s, size_t kh);
AbsState exit_call(CallSite site, const AbsState& s, size_t kh);

// Drops cells allocated in the current frame (depth 0, not deep) that neither an outer
// frame's cell nor the root value can reach.
AbsState state_collect(const AbsState& s, const CtxVal& root);

// bind_s(v)(f): state whose contents at stack s come from f(v(s)).
AbsState bind_s(const CtxVal& v, const std::function<AbsState(const RawVal&)>& f);

// Strong update when the only target is singular, weak otherwise. No targets: unchanged.
AbsState state_write_prop(const AbsState& s, const std::vector<AllocPath>& targets, const std::string& field,
                          const CtxVal& v, const ProgramIndex& idx);
AbsState state_write_index(const AbsState& s, const std::vector<AllocPath>& targets, const CtxVal& v);

CtxVal state_read_prop(const AbsState& s, const CtxVal& target, const std::string& field);
CtxVal state_read_index(const AbsState& s, const CtxVal& target);

// Stacks at which the state is reachable: support of the default of the given env record.
Ctx state_reach(const AbsState& s, const AllocPath& env);

}  // namespace tsa
