#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace metamorph {

// Demand-driven, possibly infinite sequence.  A colist is defined by the one
// way to take it apart: uncons() yields nothing (End) or a head plus the rest.
//
// Nodes are suspended and memoized: the first uncons() of a node runs its
// thunk exactly once (thread-safe, idempotent under concurrent first access)
// and every later uncons() returns the recorded result.  Traversing a shared
// colist twice therefore never recomputes a producer step.
template <typename B>
class Colist {
  struct Node;
  using NodePtr = std::shared_ptr<Node>;
  // Internal shape of a forced node: head plus tail node (null = End tail).
  using Cell = std::optional<std::pair<B, NodePtr>>;

 public:
  // Result of one deconstruction: nothing for End, else head and tail.
  using Step = std::optional<std::pair<B, Colist>>;

  // Default-constructed colists are End.
  Colist() : node_(nullptr) {}

  static Colist end() { return Colist(); }

  static Colist cons(B head, Colist tail) {
    return Colist(std::make_shared<Node>(Cell(std::in_place, std::move(head), std::move(tail.node_))));
  }

  // Suspends `force`; it runs on first deconstruction only.  If it throws,
  // nothing is recorded and the next deconstruction re-runs it.
  static Colist defer(std::function<Step()> force) {
    auto wrapped = [force = std::move(force)]() -> Cell {
      Step s = force();
      if (!s) return std::nullopt;
      return Cell(std::in_place, std::move(s->first), std::move(s->second.node_));
    };
    return Colist(std::make_shared<Node>(std::move(wrapped)));
  }

  // Single self-referencing node: uncons() yields (value, the same colist).
  // Constant colists therefore cost O(1) space no matter how far they are
  // traversed, and carry no reference cycle.
  static Colist repeat(B value) {
    auto node = std::make_shared<Node>();
    node->repeated.emplace(std::move(value));
    return Colist(std::move(node));
  }

  Step uncons() const {
    if (!node_) return std::nullopt;
    Node& n = *node_;
    if (n.repeated) return Step(std::in_place, *n.repeated, *this);
    if (!n.ready.load(std::memory_order_acquire)) {
      std::call_once(n.once, [&n] {
        n.cell = n.force();
        n.force = nullptr;  // release captured producer state
        n.ready.store(true, std::memory_order_release);
      });
    }
    if (!n.cell) return std::nullopt;
    return Step(std::in_place, n.cell->first, Colist(n.cell->second));
  }

 private:
  explicit Colist(NodePtr node) : node_(std::move(node)) {}

  struct Node {
    Node() = default;
    explicit Node(Cell value) : cell(std::move(value)), ready(true) {}
    explicit Node(std::function<Cell()> thunk) : force(std::move(thunk)) {}

    std::once_flag once;
    std::function<Cell()> force;
    Cell cell;
    std::optional<B> repeated;
    std::atomic<bool> ready{false};
  };

  NodePtr node_;
};

template <typename B>
struct TakeResult {
  std::vector<B> items;
  bool ended = false;

  friend bool operator==(const TakeResult& a, const TakeResult& b) {
    return a.ended == b.ended && a.items == b.items;
  }
};

// First min(n, length) elements; `ended` is set iff End shows up within the
// first n deconstructions.  A colist of exactly n elements is reported
// not-ended, because its End lies one deconstruction beyond the budget.
template <typename B>
TakeResult<B> take(Colist<B> xs, std::size_t n) {
  TakeResult<B> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto step = xs.uncons();
    if (!step) {
      out.ended = true;
      break;
    }
    out.items.push_back(step->first);
    xs = step->second;
  }
  return out;
}

template <typename B>
Colist<B> to_colist(const std::vector<B>& items) {
  Colist<B> out = Colist<B>::end();
  for (std::size_t i = items.size(); i-- > 0;) out = Colist<B>::cons(items[i], out);
  return out;
}

}  // namespace metamorph
