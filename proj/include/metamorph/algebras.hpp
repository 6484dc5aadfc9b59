#pragma once

#include <functional>
#include <optional>
#include <utility>

namespace metamorph {

// The four programmable pieces of a metamorphism: how to absorb input from
// the right or from the left, and how to emit output one element at a time.
// All steps must be total and pure; verification relies on replaying them.

template <typename A, typename S>
struct RightAlgebra {
  std::function<S(const A&, const S&)> step;
  S empty;
};

template <typename A, typename S>
struct LeftAlgebra {
  std::function<S(const S&, const A&)> step;
};

// Emits nothing when the state has no output to give yet.
template <typename B, typename S>
struct Coalgebra {
  std::function<std::optional<std::pair<B, S>>(const S&)> next;
};

// Every state yields an output; models producers that never run dry.
template <typename B, typename S>
struct TotalCoalgebra {
  std::function<std::pair<B, S>(const S&)> next;
};

// A total producer is in particular a partial one that never declines.
template <typename B, typename S>
Coalgebra<B, S> as_coalgebra(TotalCoalgebra<B, S> total) {
  return Coalgebra<B, S>{[total = std::move(total)](const S& s) {
    return std::optional<std::pair<B, S>>(total.next(s));
  }};
}

}  // namespace metamorph
