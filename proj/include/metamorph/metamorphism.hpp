#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <metamorph/algebras.hpp>
#include <metamorph/colist.hpp>

namespace metamorph {

template <typename A, typename S>
S fold_right(const RightAlgebra<A, S>& alg, const std::vector<A>& input) {
  S state = alg.empty;
  for (std::size_t i = input.size(); i-- > 0;) state = alg.step(input[i], state);
  return state;
}

template <typename A, typename S>
S fold_left(const LeftAlgebra<A, S>& alg, S init, const std::vector<A>& input) {
  for (const A& a : input) init = alg.step(init, a);
  return init;
}

// Re-expresses a left algebra as a right algebra over state transformations:
// step(a, t) = t after absorbing a, empty = identity.  Folding it from the
// right and applying the resulting transformation to an initial state is
// extensionally fold_left; tests check that, it is not assumed.
template <typename A, typename S>
RightAlgebra<A, std::function<S(const S&)>> from_left_algebra(LeftAlgebra<A, S> alg) {
  using Transform = std::function<S(const S&)>;
  RightAlgebra<A, Transform> out;
  out.step = [alg](const A& a, const Transform& rest) -> Transform {
    return [alg, a, rest](const S& s) { return rest(alg.step(s, a)); };
  };
  out.empty = [](const S& s) { return s; };
  return out;
}

template <typename B, typename S>
Colist<B> unfold(Coalgebra<B, S> coalg, S seed) {
  return Colist<B>::defer([coalg = std::move(coalg), seed = std::move(seed)]() ->
                          typename Colist<B>::Step {
    auto r = coalg.next(seed);
    if (!r) return std::nullopt;
    return std::make_pair(std::move(r->first), unfold(coalg, std::move(r->second)));
  });
}

// Definitional evaluator: absorb the entire input, then emit on demand.
// The fold happens up front; the unfold stays lazy.
template <typename A, typename B, typename S>
Colist<B> consume_before_produce(const LeftAlgebra<A, S>& alg, Coalgebra<B, S> coalg,
                                 S init, const std::vector<A>& input) {
  return unfold(std::move(coalg), fold_left(alg, std::move(init), input));
}

template <typename A, typename B, typename S>
Colist<B> consume_before_produce_right(const RightAlgebra<A, S>& alg,
                                       Coalgebra<B, S> coalg,
                                       const std::vector<A>& input) {
  return unfold(std::move(coalg), fold_right(alg, input));
}

}  // namespace metamorph
