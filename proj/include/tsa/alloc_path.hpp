#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "tsa/syntax.hpp"

namespace tsa {

struct AllocSite {
  enum class Kind : uint8_t { Literal, Env };
  Kind kind = Kind::Literal;
  int id = -1;        // literal label or FunctionId
  bool global = false;  // allocated in the main frame, which calls never leave or re-enter

  static AllocSite literal(LabelId l, bool global = false) { return {Kind::Literal, l, global}; }
  static AllocSite env(FunctionId f) { return {Kind::Env, f, f == kMain}; }
  friend bool operator==(const AllocSite&, const AllocSite&) = default;
  friend auto operator<=>(const AllocSite&, const AllocSite&) = default;
};

// site + call sites the object escaped through (earliest first) + number of frames
// entered since. deep: the real depth is larger than depth (clamped at K_h).
// long_escapes: escapes is a prefix of the real escape string (cut at K_h).
struct AllocPath {
  AllocSite site;
  std::vector<CallSite> escapes;
  uint32_t depth = 0;
  bool deep = false;
  bool long_escapes = false;

  static AllocPath at(AllocSite s) { return AllocPath{s, {}, 0, false, false}; }
  bool collapsed() const { return deep || long_escapes; }
  friend bool operator==(const AllocPath&, const AllocPath&) = default;
  friend bool operator<(const AllocPath& a, const AllocPath& b) {
    return std::tie(a.site, a.escapes, a.depth, a.deep, a.long_escapes) <
           std::tie(b.site, b.escapes, b.depth, b.deep, b.long_escapes);
  }
};

AllocPath enter_call_path(CallSite site, const AllocPath& p, size_t kh);

// Global sites are fixed points of both.
// One result, or two when p is deep: the real depth after the exit may equal depth or still exceed it.
std::vector<AllocPath> exit_call_path(CallSite site, const AllocPath& p, size_t kh);

bool is_singular(const AllocPath& p, const ProgramIndex& idx);

}  // namespace tsa
