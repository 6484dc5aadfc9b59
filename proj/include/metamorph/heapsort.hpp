#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <metamorph/algebras.hpp>
#include <metamorph/jigsaw.hpp>

namespace metamorph {

// A natural number extended with a greatest element.  Infinity is the
// straight edge of the sorting jigsaw and the padding after a finite run.
class ExtVal {
 public:
  constexpr ExtVal() : infinite_(true), value_(0) {}

  static constexpr ExtVal infinity() { return ExtVal(); }
  static constexpr ExtVal finite(std::uint64_t v) { return ExtVal(v); }

  bool is_infinite() const { return infinite_; }
  std::uint64_t finite_value() const {
    if (infinite_) throw std::logic_error("ExtVal: no finite value in infinity");
    return value_;
  }

  friend bool operator==(const ExtVal& a, const ExtVal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }
  friend bool operator!=(const ExtVal& a, const ExtVal& b) { return !(a == b); }
  friend bool operator<(const ExtVal& a, const ExtVal& b) {
    if (a.infinite_) return false;
    if (b.infinite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtVal& a, const ExtVal& b) { return !(b < a); }

 private:
  explicit constexpr ExtVal(std::uint64_t v) : infinite_(false), value_(v) {}

  bool infinite_;
  std::uint64_t value_;
};

// ASCII spelling; display layers choose their own glyph for infinity.
inline std::string to_string(const ExtVal& v) {
  return v.is_infinite() ? "inf" : std::to_string(v.finite_value());
}

inline std::ostream& operator<<(std::ostream& os, const ExtVal& v) {
  return os << to_string(v);
}

// Persistent leftist min-heap.  All operations share structure and leave
// their operands untouched.  Infinity is never stored: pushing it returns
// the heap unchanged, so a heap's contents are always finite values and the
// minimum of a non-empty heap is finite.
class Heap {
 public:
  Heap() = default;

  bool empty() const { return root_ == nullptr; }
  std::size_t size() const { return size_; }

  Heap push(const ExtVal& v) const {
    if (v.is_infinite()) return *this;
    Heap out;
    out.root_ = merge(make(v, nullptr, nullptr), root_);
    out.size_ = size_ + 1;
    return out;
  }

  std::optional<std::pair<ExtVal, Heap>> pop_min() const {
    if (!root_) return std::nullopt;
    Heap rest;
    rest.root_ = merge(root_->left, root_->right);
    rest.size_ = size_ - 1;
    return std::make_pair(root_->value, std::move(rest));
  }

  // Total variant: the empty heap yields infinity and stays empty, so the
  // output continues forever once the finite contents run out.
  std::pair<ExtVal, Heap> pop_min_total() const {
    if (auto r = pop_min()) return *r;
    return {ExtVal::infinity(), Heap()};
  }

  // Sorted contents; two heaps are equal exactly when these agree.
  std::vector<ExtVal> canonical() const {
    std::vector<ExtVal> out;
    out.reserve(size_);
    collect(root_, out);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::string key() const {
    std::string out = "{";
    bool first = true;
    for (const ExtVal& v : canonical()) {
      if (!first) out += ",";
      out += to_string(v);
      first = false;
    }
    return out + "}";
  }

 private:
  struct Node {
    ExtVal value;
    int rank;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
  };
  using Ptr = std::shared_ptr<const Node>;

  static int rank(const Ptr& n) { return n ? n->rank : 0; }

  static Ptr make(const ExtVal& v, Ptr a, Ptr b) {
    if (rank(a) < rank(b)) std::swap(a, b);
    int r = rank(b) + 1;
    return std::make_shared<const Node>(Node{v, r, std::move(a), std::move(b)});
  }

  static Ptr merge(const Ptr& a, const Ptr& b) {
    if (!a) return b;
    if (!b) return a;
    if (b->value < a->value) return make(b->value, b->left, merge(a, b->right));
    return make(a->value, a->left, merge(a->right, b));
  }

  static void collect(const Ptr& n, std::vector<ExtVal>& out) {
    if (!n) return;
    out.push_back(n->value);
    collect(n->left, out);
    collect(n->right, out);
  }

  Ptr root_;
  std::size_t size_ = 0;
};

//===========================================================================
// Heapsort wiring.
//===========================================================================

inline RightAlgebra<ExtVal, Heap> push_algebra() {
  return RightAlgebra<ExtVal, Heap>{
      [](const ExtVal& v, const Heap& h) { return h.push(v); }, Heap()};
}

inline Coalgebra<ExtVal, Heap> pop_min_coalgebra() {
  return Coalgebra<ExtVal, Heap>{[](const Heap& h) { return h.pop_min(); }};
}

inline TotalCoalgebra<ExtVal, Heap> pop_min_total_coalgebra() {
  return TotalCoalgebra<ExtVal, Heap>{[](const Heap& h) { return h.pop_min_total(); }};
}

// One comparison per piece: the smaller value exits left, the larger one
// sinks to the row below.
inline Piece<ExtVal, ExtVal> sorting_piece() {
  return Piece<ExtVal, ExtVal>{
      [](const ExtVal& a, const ExtVal& b) -> std::pair<ExtVal, ExtVal> {
        return b < a ? std::make_pair(b, a) : std::make_pair(a, b);
      }};
}

// Pushing infinity never creates output where there was none; pushing any
// finite value always does.
inline FlatClassifier<ExtVal> sorting_flat_classifier() {
  return FlatClassifier<ExtVal>{[](const ExtVal& v) {
    return v.is_infinite() ? Flatness::Flat : Flatness::NotFlat;
  }};
}

}  // namespace metamorph
