#include "tsa/ctx.hpp"

#include <algorithm>
#include <functional>

namespace tsa {

struct Ctx::Node {
  bool in = false;
  std::vector<std::pair<CallSite, NodePtr>> kids;  // sorted by call site
};

namespace {

using Node = Ctx::Node;
using NodePtr = Ctx::NodePtr;

const NodePtr& leaf(bool in) {
  static const NodePtr yes = std::make_shared<const Node>(Node{true, {}});
  static const NodePtr no = std::make_shared<const Node>(Node{false, {}});
  return in ? yes : no;
}

bool is_leaf(const NodePtr& n) { return n->kids.empty(); }

NodePtr child(const NodePtr& n, CallSite s) {
  auto it = std::lower_bound(n->kids.begin(), n->kids.end(), s,
                             [](const auto& kv, CallSite x) { return kv.first < x; });
  if (it != n->kids.end() && it->first == s) return it->second;
  return leaf(n->in);
}

// Builds a node, pruning children that are leaves agreeing with the parent bit.
NodePtr make(bool in, std::vector<std::pair<CallSite, NodePtr>> kids) {
  kids.erase(std::remove_if(kids.begin(), kids.end(),
                            [in](const auto& kv) { return is_leaf(kv.second) && kv.second->in == in; }),
             kids.end());
  if (kids.empty()) return leaf(in);
  return std::make_shared<const Node>(Node{in, std::move(kids)});
}

template <class Rec>
NodePtr merge(const NodePtr& a, const NodePtr& b, bool in, Rec rec) {
  std::vector<std::pair<CallSite, NodePtr>> kids;
  size_t i = 0, j = 0;
  while (i < a->kids.size() || j < b->kids.size()) {
    CallSite s;
    NodePtr ca, cb;
    if (j == b->kids.size() || (i < a->kids.size() && a->kids[i].first < b->kids[j].first)) {
      s = a->kids[i].first;
      ca = a->kids[i++].second;
      cb = leaf(b->in);
    } else if (i == a->kids.size() || b->kids[j].first < a->kids[i].first) {
      s = b->kids[j].first;
      ca = leaf(a->in);
      cb = b->kids[j++].second;
    } else {
      s = a->kids[i].first;
      ca = a->kids[i++].second;
      cb = b->kids[j++].second;
    }
    kids.emplace_back(s, rec(ca, cb));
  }
  return make(in, std::move(kids));
}

NodePtr unite(const NodePtr& a, const NodePtr& b) {
  if (a == b) return a;
  if (is_leaf(a)) return a->in ? a : b;
  if (is_leaf(b)) return b->in ? b : a;
  return merge(a, b, a->in || b->in, unite);
}

NodePtr intersect(const NodePtr& a, const NodePtr& b) {
  if (a == b) return a;
  if (is_leaf(a)) return a->in ? b : a;
  if (is_leaf(b)) return b->in ? a : b;
  return merge(a, b, a->in && b->in, intersect);
}

bool any_in(const NodePtr& n) {
  if (n->in) return true;
  for (const auto& kv : n->kids)
    if (any_in(kv.second)) return true;
  return false;
}

NodePtr subtract(const NodePtr& a, const NodePtr& b) {
  if (a == b) return leaf(false);
  if (is_leaf(b)) return b->in ? leaf(false) : a;
  if (is_leaf(a) && !a->in) return a;
  return merge(a, b, a->in && !b->in, subtract);
}

// Walks both tries in lockstep; stops at the first stack in a and not in b.
bool leq_nodes(const NodePtr& a, const NodePtr& b) {
  if (a == b || (is_leaf(a) && !a->in)) return true;
  if (is_leaf(b)) return b->in || (is_leaf(a) && !a->in);
  if (a->in && !b->in) return false;
  size_t i = 0, j = 0;
  while (i < a->kids.size() || j < b->kids.size()) {
    bool ok;
    if (j == b->kids.size() || (i < a->kids.size() && a->kids[i].first < b->kids[j].first)) {
      ok = leq_nodes(a->kids[i++].second, leaf(b->in));
    } else if (i == a->kids.size() || b->kids[j].first < a->kids[i].first) {
      ok = leq_nodes(leaf(a->in), b->kids[j++].second);
    } else {
      ok = leq_nodes(a->kids[i++].second, b->kids[j++].second);
    }
    if (!ok) return false;
  }
  return true;
}

bool disjoint_nodes(const NodePtr& a, const NodePtr& b) {
  if (is_leaf(a)) return a->in ? !any_in(b) : true;
  if (is_leaf(b)) return b->in ? !any_in(a) : true;
  if (a->in && b->in) return false;
  size_t i = 0, j = 0;
  while (i < a->kids.size() || j < b->kids.size()) {
    bool ok;
    if (j == b->kids.size() || (i < a->kids.size() && a->kids[i].first < b->kids[j].first)) {
      ok = disjoint_nodes(a->kids[i++].second, leaf(b->in));
    } else if (i == a->kids.size() || b->kids[j].first < a->kids[i].first) {
      ok = disjoint_nodes(leaf(a->in), b->kids[j++].second);
    } else {
      ok = disjoint_nodes(a->kids[i++].second, b->kids[j++].second);
    }
    if (!ok) return false;
  }
  return true;
}

NodePtr flip(const NodePtr& n) {
  if (is_leaf(n)) return leaf(!n->in);
  std::vector<std::pair<CallSite, NodePtr>> kids;
  kids.reserve(n->kids.size());
  for (const auto& [s, c] : n->kids) kids.emplace_back(s, flip(c));
  return std::make_shared<const Node>(Node{!n->in, std::move(kids)});
}

NodePtr cut(const NodePtr& n, size_t depth, size_t k) {
  if (is_leaf(n)) return n;
  if (depth >= k) return leaf(any_in(n));
  std::vector<std::pair<CallSite, NodePtr>> kids;
  kids.reserve(n->kids.size());
  bool same = true;
  for (const auto& [s, c] : n->kids) {
    kids.emplace_back(s, cut(c, depth + 1, k));
    same = same && kids.back().second == c;
  }
  if (same) return n;
  return make(n->in, std::move(kids));
}

size_t node_depth(const NodePtr& n) {
  size_t d = 0;
  for (const auto& kv : n->kids) d = std::max(d, 1 + node_depth(kv.second));
  return d;
}

bool equal(const NodePtr& a, const NodePtr& b) {
  if (a == b) return true;
  if (a->in != b->in || a->kids.size() != b->kids.size()) return false;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (a->kids[i].first != b->kids[i].first || !equal(a->kids[i].second, b->kids[i].second)) return false;
  return true;
}

int compare(const NodePtr& a, const NodePtr& b) {
  if (a == b) return 0;
  if (a->in != b->in) return a->in ? 1 : -1;
  size_t n = std::min(a->kids.size(), b->kids.size());
  for (size_t i = 0; i < n; ++i) {
    if (a->kids[i].first != b->kids[i].first) return a->kids[i].first < b->kids[i].first ? -1 : 1;
    int c = compare(a->kids[i].second, b->kids[i].second);
    if (c) return c;
  }
  if (a->kids.size() != b->kids.size()) return a->kids.size() < b->kids.size() ? -1 : 1;
  return 0;
}

size_t node_hash(const NodePtr& n) {
  size_t h = n->in ? 0x9e3779b97f4a7c15ULL : 0x7f4a7c159e3779b9ULL;
  for (const auto& [s, c] : n->kids) {
    h ^= std::hash<int>()(s) + 0x9e3779b9 + (h << 6) + (h >> 2);
    h ^= node_hash(c) + 0x9e3779b9 + (h << 6) + (h >> 2);
  }
  return h;
}

struct PartCollector {
  std::vector<CtxPart> parts;
  std::vector<CallSite> path;

  // n is a 0-region node: look for parts starting below it
  void outside(const NodePtr& n) {
    for (const auto& [s, c] : n->kids) {
      path.push_back(s);
      if (c->in) start(c);
      else outside(c);
      path.pop_back();
    }
  }

  void start(const NodePtr& n) {
    size_t slot = parts.size();
    parts.push_back(CtxPart{path, {}});
    size_t base = path.size();
    holes(n, base, slot);
  }

  // n is a 1-region node belonging to parts[slot]
  void holes(const NodePtr& n, size_t base, size_t slot) {
    for (const auto& [s, c] : n->kids) {
      path.push_back(s);
      if (c->in) {
        holes(c, base, slot);
      } else {
        parts[slot].holes.emplace_back(path.begin() + long(base), path.end());
        outside(c);
      }
      path.pop_back();
    }
  }
};

}  // namespace

Ctx::Ctx() : root_(leaf(false)) {}

Ctx Ctx::all() { return Ctx(leaf(true)); }

Ctx Ctx::subtree(const std::vector<CallSite>& prefix) {
  NodePtr n = leaf(true);
  for (size_t i = prefix.size(); i-- > 0;) n = make(false, {{prefix[i], n}});
  return Ctx(n);
}

Ctx Ctx::normalize(const std::vector<CtxPart>& parts) {
  Ctx out;
  for (const auto& p : parts) {
    Ctx c = subtree(p.prefix);
    for (const auto& h : p.holes) {
      std::vector<CallSite> full = p.prefix;
      full.insert(full.end(), h.begin(), h.end());
      c = c - subtree(full);
    }
    out = out | c;
  }
  return out;
}

bool Ctx::is_empty() const { return is_leaf(root_) && !root_->in; }
bool Ctx::is_all() const { return is_leaf(root_) && root_->in; }

bool Ctx::contains(const Stack& s) const {
  const Node* n = root_.get();
  for (CallSite site : s) {
    auto it = std::lower_bound(n->kids.begin(), n->kids.end(), site,
                               [](const auto& kv, CallSite x) { return kv.first < x; });
    if (it == n->kids.end() || it->first != site) return n->in;
    n = it->second.get();
  }
  return n->in;
}

std::vector<CtxPart> Ctx::parts() const {
  PartCollector pc;
  if (root_->in) pc.start(root_);
  else pc.outside(root_);
  std::sort(pc.parts.begin(), pc.parts.end(),
            [](const CtxPart& a, const CtxPart& b) { return a.prefix < b.prefix; });
  return pc.parts;
}

Ctx Ctx::enter(CallSite site) const { return Ctx(make(false, {{site, root_}})); }

Ctx Ctx::exit(CallSite site) const { return Ctx(child(root_, site)); }

Ctx Ctx::truncate(size_t k) const { return Ctx(cut(root_, 0, k)); }

size_t Ctx::depth() const { return node_depth(root_); }

Ctx operator|(const Ctx& a, const Ctx& b) { return Ctx(unite(a.root_, b.root_)); }
Ctx operator&(const Ctx& a, const Ctx& b) { return Ctx(intersect(a.root_, b.root_)); }
Ctx operator~(const Ctx& a) { return Ctx(flip(a.root_)); }
Ctx operator-(const Ctx& a, const Ctx& b) { return Ctx(subtract(a.root_, b.root_)); }
bool Ctx::leq(const Ctx& b) const { return leq_nodes(root_, b.root_); }
bool Ctx::disjoint(const Ctx& b) const { return disjoint_nodes(root_, b.root_); }
bool operator==(const Ctx& a, const Ctx& b) { return equal(a.root_, b.root_); }
bool operator<(const Ctx& a, const Ctx& b) { return compare(a.root_, b.root_) < 0; }

size_t Ctx::hash() const { return node_hash(root_); }

}  // namespace tsa
