#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "tsa/syntax.hpp"

namespace tsa {

// Call stack relative to the analysed function, direct caller first.
using Stack = std::vector<CallSite>;

// One part of a context: every stack extending prefix, minus those extending prefix·h
// for a hole h.
struct CtxPart {
  std::vector<CallSite> prefix;
  std::vector<std::vector<CallSite>> holes;
  friend bool operator==(const CtxPart&, const CtxPart&) = default;
};

// A set of call stacks closed under the Boolean operations. Stored as a trie over
// call sites in which every node carries one membership bit that covers the node
// itself and all children not listed; children that add nothing are pruned, so equal
// sets have equal tries.
class Ctx {
 public:
  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  Ctx();  // empty context
  static Ctx empty() { return Ctx(); }
  static Ctx all();
  static Ctx subtree(const std::vector<CallSite>& prefix);
  static Ctx normalize(const std::vector<CtxPart>& parts);

  bool is_empty() const;
  bool is_all() const;
  bool contains(const Stack& s) const;
  std::vector<CtxPart> parts() const;  // canonical: minimal, sorted

  Ctx enter(CallSite site) const;  // prefix every stack with site
  Ctx exit(CallSite site) const;   // { s | site·s in this }
  Ctx truncate(size_t k) const;
  size_t depth() const;  // longest listed path in the trie

  friend Ctx operator|(const Ctx& a, const Ctx& b);
  friend Ctx operator&(const Ctx& a, const Ctx& b);
  friend Ctx operator~(const Ctx& a);
  friend Ctx operator-(const Ctx& a, const Ctx& b);
  friend bool operator==(const Ctx& a, const Ctx& b);
  friend bool operator<(const Ctx& a, const Ctx& b);

  bool leq(const Ctx& b) const;
  bool disjoint(const Ctx& b) const;
  size_t hash() const;

 private:
  explicit Ctx(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

inline Ctx ctx_subtree(const std::vector<CallSite>& p) { return Ctx::subtree(p); }
inline Ctx ctx_union(const Ctx& a, const Ctx& b) { return a | b; }
inline Ctx ctx_intersect(const Ctx& a, const Ctx& b) { return a & b; }
inline Ctx ctx_complement(const Ctx& a) { return ~a; }
inline bool ctx_contains(const Ctx& c, const Stack& s) { return c.contains(s); }
inline Ctx ctx_normalize(const std::vector<CtxPart>& parts) { return Ctx::normalize(parts); }
inline bool ctx_is_empty(const Ctx& c) { return c.is_empty(); }
inline bool ctx_leq(const Ctx& a, const Ctx& b) { return a.leq(b); }
inline Ctx ctx_truncate(const Ctx& c, size_t k) { return c.truncate(k); }

}  // namespace tsa
