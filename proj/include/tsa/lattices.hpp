#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <vector>

namespace tsa {

// Element of the restricted powerset P<=N(T): a sorted set of at most N elements, or Top.
// The bound travels with the value; joining values with different bounds uses the larger.
template <class T>
class BoundedSet {
 public:
  BoundedSet() = default;

  static BoundedSet top() {
    BoundedSet s;
    s.top_ = true;
    return s;
  }

  static BoundedSet of(std::initializer_list<T> xs, size_t bound) { return from(std::vector<T>(xs), bound); }

  static BoundedSet from(std::vector<T> xs, size_t bound) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    BoundedSet s;
    s.bound_ = bound;
    if (xs.size() > bound) return top();
    s.elems_ = std::move(xs);
    return s;
  }

  bool is_top() const { return top_; }
  bool is_bottom() const { return !top_ && elems_.empty(); }
  const std::vector<T>& elems() const { return elems_; }
  size_t bound() const { return bound_; }
  size_t size() const { return elems_.size(); }

  bool contains(const T& x) const { return top_ || std::binary_search(elems_.begin(), elems_.end(), x); }

  friend BoundedSet bset_join(const BoundedSet& a, const BoundedSet& b, size_t n) {
    if (a.top_ || b.top_) return top();
    if (b.elems_.empty()) return with_bound(a, n);
    if (a.elems_.empty()) return with_bound(b, n);
    std::vector<T> u;
    u.reserve(a.elems_.size() + b.elems_.size());
    std::set_union(a.elems_.begin(), a.elems_.end(), b.elems_.begin(), b.elems_.end(), std::back_inserter(u));
    if (u.size() > n) return top();
    BoundedSet s;
    s.bound_ = n;
    s.elems_ = std::move(u);
    return s;
  }

  friend BoundedSet join(const BoundedSet& a, const BoundedSet& b) {
    return bset_join(a, b, std::max(a.bound_, b.bound_));
  }

  friend BoundedSet meet(const BoundedSet& a, const BoundedSet& b) {
    if (a.top_) return b;
    if (b.top_) return a;
    BoundedSet s;
    s.bound_ = std::max(a.bound_, b.bound_);
    std::set_intersection(a.elems_.begin(), a.elems_.end(), b.elems_.begin(), b.elems_.end(),
                          std::back_inserter(s.elems_));
    return s;
  }

  friend bool leq(const BoundedSet& a, const BoundedSet& b) {
    if (b.top_) return true;
    if (a.top_) return false;
    return std::includes(b.elems_.begin(), b.elems_.end(), a.elems_.begin(), a.elems_.end());
  }

  // Bounds do not take part in equality: they only steer future joins.
  friend bool operator==(const BoundedSet& a, const BoundedSet& b) {
    return a.top_ == b.top_ && a.elems_ == b.elems_;
  }
  friend bool operator<(const BoundedSet& a, const BoundedSet& b) {
    if (a.top_ != b.top_) return b.top_;
    return a.elems_ < b.elems_;
  }

 private:
  bool top_ = false;
  size_t bound_ = 0;
  std::vector<T> elems_;

  static BoundedSet with_bound(const BoundedSet& a, size_t n) {
    if (a.elems_.size() > n) return top();
    BoundedSet s = a;
    s.bound_ = std::max(a.bound_, n);
    return s;
  }
};

template <class T>
BoundedSet<T> bset_join_all(const std::vector<BoundedSet<T>>& sets, size_t n) {
  BoundedSet<T> acc;
  for (const auto& s : sets) acc = bset_join(acc, s, n);
  return acc;
}

}  // namespace tsa
