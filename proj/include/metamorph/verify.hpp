#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <metamorph/algebras.hpp>
#include <metamorph/colist.hpp>
#include <metamorph/jigsaw.hpp>
#include <metamorph/metamorphism.hpp>

namespace metamorph {

// The evaluators promise to agree with the definitional route only under
// side conditions on the algebra/coalgebra pair.  This header checks those
// conditions dynamically over sampled state and element domains, reporting
// either a case count or a replayable counterexample.  Dynamic checking
// covers sampled states only; results always carry the coverage actually
// achieved (cases checked, truncation).

struct CheckBudget {
  std::size_t state_bound = 4;        // passed to the state sampler
  std::size_t elem_bound = 0;         // passed to the element sampler (0: its default)
  std::size_t list_bound = 3;         // passed to the list sampler (lemma check)
  std::uint64_t max_cases = 1000000;  // hard cap; exceeding it truncates the run
};

// Sources of test data.  enumerate must be deterministic for a given bound;
// draw must be reproducible from its seed.  Either may be absent.
template <typename X>
struct DomainSampler {
  std::function<std::vector<X>(std::size_t bound)> enumerate;
  std::function<X(std::uint64_t seed)> draw;
};

// Runtime stand-in for state equality: states are equal iff their canonical
// keys are.  Keys double as the serialized form in counterexample reports.
template <typename S>
struct StateEq {
  std::function<std::string(const S&)> key;
};

template <typename Cx>
struct CheckResult {
  std::optional<Cx> counterexample;
  std::uint64_t cases_checked = 0;
  bool truncated = false;

  bool holds() const { return !counterexample.has_value(); }
};

// A failed obligation.  The typed state/element allow exact replay; the
// rendered fields make the report self-contained.
template <typename S, typename A>
struct ConditionWitness {
  std::string clause;
  std::optional<S> state;
  std::optional<A> element;
  std::string state_key;
  std::string element_text;
  std::string lhs;  // what the condition demands
  std::string rhs;  // what the coalgebra actually did
};

template <typename S, typename A>
struct LemmaWitness {
  S state;
  std::vector<A> rest;
  std::string state_key;
  std::string rest_text;
  std::string lhs;
  std::string rhs;
};

template <typename A>
struct EquivalenceWitness {
  std::vector<A> input;
  std::string input_text;
  std::string lhs;  // candidate evaluator's prefix
  std::string rhs;  // definitional evaluator's prefix
};

namespace detail {

template <typename B, typename S>
std::string render_emission(const std::optional<std::pair<B, S>>& r,
                            const StateEq<S>& eq) {
  if (!r) return "withholds";
  std::ostringstream os;
  os << "emits " << r->first << ", state " << eq.key(r->second);
  return os.str();
}

template <typename B, typename S>
bool emission_equal(const std::optional<std::pair<B, S>>& a,
                    const std::optional<std::pair<B, S>>& b, const StateEq<S>& eq) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->first == b->first && eq.key(a->second) == eq.key(b->second);
}

template <typename A>
std::string render_list(const std::vector<A>& xs) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) os << ",";
    os << xs[i];
  }
  os << "]";
  return os.str();
}

template <typename A>
std::string render_element(const A& a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

// lhs/rhs of a failed obligation, or nothing if it holds.
using Disagreement = std::optional<std::pair<std::string, std::string>>;

}  // namespace detail

//===========================================================================
// Single obligations.  The checkers below iterate these over sampled
// domains; counterexample replay re-runs exactly one of them.
//===========================================================================

// Emission commutes with consumption: if the coalgebra emits (b, s') at s,
// it must emit (b, step(s', a)) at step(s, a).
template <typename A, typename B, typename S>
detail::Disagreement streaming_condition_failure(const LeftAlgebra<A, S>& alg,
                                                 const Coalgebra<B, S>& coalg,
                                                 const StateEq<S>& eq, const S& s,
                                                 const A& a) {
  auto premise = coalg.next(s);
  if (!premise) return std::nullopt;  // vacuous
  std::optional<std::pair<B, S>> expected(
      std::in_place, premise->first, alg.step(premise->second, a));
  auto actual = coalg.next(alg.step(s, a));
  if (detail::emission_equal(expected, actual, eq)) return std::nullopt;
  return std::make_pair(detail::render_emission(expected, eq),
                        detail::render_emission(actual, eq));
}

// Extension of the streaming condition along a whole remaining input: the
// emission at s survives absorbing any list as.
template <typename A, typename B, typename S>
detail::Disagreement streaming_lemma_failure(const LeftAlgebra<A, S>& alg,
                                             const Coalgebra<B, S>& coalg,
                                             const StateEq<S>& eq, const S& s,
                                             const std::vector<A>& rest) {
  auto premise = coalg.next(s);
  if (!premise) return std::nullopt;
  std::optional<std::pair<B, S>> expected(
      std::in_place, premise->first, fold_left(alg, premise->second, rest));
  auto actual = coalg.next(fold_left(alg, s, rest));
  if (detail::emission_equal(expected, actual, eq)) return std::nullopt;
  return std::make_pair(detail::render_emission(expected, eq),
                        detail::render_emission(actual, eq));
}

// Total-coalgebra form: there is always an emission, and pushing one element
// must transform it exactly the way one piece placement says.
template <typename A, typename B, typename S>
detail::Disagreement jigsaw_infinite_failure(const RightAlgebra<A, S>& alg,
                                             const TotalCoalgebra<B, S>& coalg,
                                             const Piece<A, B>& piece,
                                             const StateEq<S>& eq, const S& s,
                                             const A& a) {
  auto [b, s2] = coalg.next(s);
  auto [left, bottom] = piece.place(a, b);
  std::pair<B, S> expected(left, alg.step(bottom, s2));
  auto actual = coalg.next(alg.step(a, s));
  if (expected.first == actual.first && eq.key(expected.second) == eq.key(actual.second))
    return std::nullopt;
  std::ostringstream lhs, rhs;
  lhs << "emits " << expected.first << ", state " << eq.key(expected.second);
  rhs << "emits " << actual.first << ", state " << eq.key(actual.second);
  return std::make_pair(lhs.str(), rhs.str());
}

// The producer must emit the straight edge forever from the empty state.
template <typename A, typename B, typename S>
detail::Disagreement straight_production_failure(const RightAlgebra<A, S>& alg,
                                                 const TotalCoalgebra<B, S>& coalg,
                                                 const B& straight,
                                                 const StateEq<S>& eq) {
  auto [b, s2] = coalg.next(alg.empty);
  if (b == straight && eq.key(s2) == eq.key(alg.empty)) return std::nullopt;
  std::ostringstream lhs, rhs;
  lhs << "emits " << straight << ", state " << eq.key(alg.empty);
  rhs << "emits " << b << ", state " << eq.key(s2);
  return std::make_pair(lhs.str(), rhs.str());
}

// Partial-coalgebra form, one sampled pair (s, a).  Checks the clause the
// pair falls under; returns (clause, lhs, rhs) on failure.
template <typename A, typename B, typename S>
std::optional<std::tuple<std::string, std::string, std::string>>
jigsaw_general_failure(const RightAlgebra<A, S>& alg, const Coalgebra<B, S>& coalg,
                       const Piece<A, B>& piece, const B& straight,
                       const FlatClassifier<A>& flat, const StateEq<S>& eq, const S& s,
                       const A& a) {
  auto at_s = coalg.next(s);
  auto pushed = alg.step(a, s);
  auto at_pushed = coalg.next(pushed);
  Flatness kind = flat.classify(a);

  if (kind == Flatness::Flat && !at_s && at_pushed) {
    return std::make_tuple(std::string("flat"), std::string("withholds"),
                           detail::render_emission(at_pushed, eq));
  }
  if (kind == Flatness::NotFlat && !at_pushed) {
    return std::make_tuple(std::string("not-flat"), std::string("emits something"),
                           std::string("withholds"));
  }

  B b = straight;
  S s2 = s;
  std::string clause;
  if (at_s) {
    b = at_s->first;
    s2 = at_s->second;
    clause = "commute";
  } else if (at_pushed) {
    clause = "commute-straight";  // emission born from this push
  } else {
    return std::nullopt;  // neither branch applies
  }
  auto [left, bottom] = piece.place(a, b);
  std::optional<std::pair<B, S>> expected(std::in_place, left, alg.step(bottom, s2));
  if (detail::emission_equal(expected, at_pushed, eq)) return std::nullopt;
  return std::make_tuple(clause, detail::render_emission(expected, eq),
                         detail::render_emission(at_pushed, eq));
}

// The empty state must emit nothing.
template <typename A, typename B, typename S>
detail::Disagreement nothing_from_empty_failure(const RightAlgebra<A, S>& alg,
                                                const Coalgebra<B, S>& coalg,
                                                const StateEq<S>& eq) {
  auto r = coalg.next(alg.empty);
  if (!r) return std::nullopt;
  return std::make_pair(std::string("withholds"), detail::render_emission(r, eq));
}

//===========================================================================
// Checkers: iterate the obligations over sampled domains.
//===========================================================================

template <typename A, typename B, typename S>
CheckResult<ConditionWitness<S, A>> check_streaming_condition(
    const LeftAlgebra<A, S>& alg, const Coalgebra<B, S>& coalg,
    const DomainSampler<S>& states, const DomainSampler<A>& elems,
    const StateEq<S>& eq, const CheckBudget& budget = {}) {
  CheckResult<ConditionWitness<S, A>> result;
  auto ss = states.enumerate(budget.state_bound);
  auto as = elems.enumerate(budget.elem_bound);
  for (const S& s : ss) {
    for (const A& a : as) {
      if (result.cases_checked >= budget.max_cases) {
        result.truncated = true;
        return result;
      }
      ++result.cases_checked;
      if (auto fail = streaming_condition_failure(alg, coalg, eq, s, a)) {
        result.counterexample = ConditionWitness<S, A>{
            "commute", s,      a,           eq.key(s), detail::render_element(a),
            fail->first, fail->second};
        return result;
      }
    }
  }
  return result;
}

template <typename A, typename B, typename S>
CheckResult<LemmaWitness<S, A>> check_streaming_lemma(
    const LeftAlgebra<A, S>& alg, const Coalgebra<B, S>& coalg,
    const DomainSampler<S>& states, const DomainSampler<std::vector<A>>& lists,
    const StateEq<S>& eq, const CheckBudget& budget = {}) {
  CheckResult<LemmaWitness<S, A>> result;
  auto ss = states.enumerate(budget.state_bound);
  auto rests = lists.enumerate(budget.list_bound);
  for (const S& s : ss) {
    for (const auto& rest : rests) {
      if (result.cases_checked >= budget.max_cases) {
        result.truncated = true;
        return result;
      }
      ++result.cases_checked;
      if (auto fail = streaming_lemma_failure(alg, coalg, eq, s, rest)) {
        result.counterexample =
            LemmaWitness<S, A>{s,           rest,         eq.key(s),
                               detail::render_list(rest), fail->first, fail->second};
        return result;
      }
    }
  }
  return result;
}

template <typename A, typename B, typename S>
CheckResult<ConditionWitness<S, A>> check_jigsaw_infinite(
    const RightAlgebra<A, S>& alg, const TotalCoalgebra<B, S>& coalg,
    const Piece<A, B>& piece, const B& straight, const DomainSampler<S>& states,
    const DomainSampler<A>& elems, const StateEq<S>& eq,
    const CheckBudget& budget = {}) {
  CheckResult<ConditionWitness<S, A>> result;
  ++result.cases_checked;
  if (auto fail = straight_production_failure(alg, coalg, straight, eq)) {
    result.counterexample =
        ConditionWitness<S, A>{"straight-production", std::nullopt, std::nullopt,
                               eq.key(alg.empty),     "",           fail->first,
                               fail->second};
    return result;
  }
  auto ss = states.enumerate(budget.state_bound);
  auto as = elems.enumerate(budget.elem_bound);
  for (const S& s : ss) {
    for (const A& a : as) {
      if (result.cases_checked >= budget.max_cases) {
        result.truncated = true;
        return result;
      }
      ++result.cases_checked;
      if (auto fail = jigsaw_infinite_failure(alg, coalg, piece, eq, s, a)) {
        result.counterexample = ConditionWitness<S, A>{
            "commute", s,      a,           eq.key(s), detail::render_element(a),
            fail->first, fail->second};
        return result;
      }
    }
  }
  return result;
}

template <typename A, typename B, typename S>
CheckResult<ConditionWitness<S, A>> check_jigsaw_general(
    const RightAlgebra<A, S>& alg, const Coalgebra<B, S>& coalg,
    const Piece<A, B>& piece, const B& straight, const FlatClassifier<A>& flat,
    const DomainSampler<S>& states, const DomainSampler<A>& elems,
    const StateEq<S>& eq, const CheckBudget& budget = {}) {
  CheckResult<ConditionWitness<S, A>> result;
  ++result.cases_checked;
  if (auto fail = nothing_from_empty_failure(alg, coalg, eq)) {
    result.counterexample =
        ConditionWitness<S, A>{"nothing-from-empty", std::nullopt, std::nullopt,
                               eq.key(alg.empty),    "",           fail->first,
                               fail->second};
    return result;
  }
  auto ss = states.enumerate(budget.state_bound);
  auto as = elems.enumerate(budget.elem_bound);
  for (const S& s : ss) {
    for (const A& a : as) {
      if (result.cases_checked >= budget.max_cases) {
        result.truncated = true;
        return result;
      }
      ++result.cases_checked;
      if (auto fail =
              jigsaw_general_failure(alg, coalg, piece, straight, flat, eq, s, a)) {
        result.counterexample = ConditionWitness<S, A>{
            std::get<0>(*fail), s,
            a,                  eq.key(s),
            detail::render_element(a), std::get<1>(*fail),
            std::get<2>(*fail)};
        return result;
      }
    }
  }
  return result;
}

//===========================================================================
// Counterexample replay: re-run exactly the failed obligation.
//===========================================================================

template <typename A, typename B, typename S>
bool replay_streaming_condition(const LeftAlgebra<A, S>& alg,
                                const Coalgebra<B, S>& coalg, const StateEq<S>& eq,
                                const ConditionWitness<S, A>& w) {
  if (!w.state || !w.element) return false;
  return streaming_condition_failure(alg, coalg, eq, *w.state, *w.element).has_value();
}

template <typename A, typename B, typename S>
bool replay_streaming_lemma(const LeftAlgebra<A, S>& alg, const Coalgebra<B, S>& coalg,
                            const StateEq<S>& eq, const LemmaWitness<S, A>& w) {
  return streaming_lemma_failure(alg, coalg, eq, w.state, w.rest).has_value();
}

template <typename A, typename B, typename S>
bool replay_jigsaw_infinite(const RightAlgebra<A, S>& alg,
                            const TotalCoalgebra<B, S>& coalg, const Piece<A, B>& piece,
                            const B& straight, const StateEq<S>& eq,
                            const ConditionWitness<S, A>& w) {
  if (w.clause == "straight-production")
    return straight_production_failure(alg, coalg, straight, eq).has_value();
  if (!w.state || !w.element) return false;
  return jigsaw_infinite_failure(alg, coalg, piece, eq, *w.state, *w.element).has_value();
}

template <typename A, typename B, typename S>
bool replay_jigsaw_general(const RightAlgebra<A, S>& alg, const Coalgebra<B, S>& coalg,
                           const Piece<A, B>& piece, const B& straight,
                           const FlatClassifier<A>& flat, const StateEq<S>& eq,
                           const ConditionWitness<S, A>& w) {
  if (w.clause == "nothing-from-empty")
    return nothing_from_empty_failure(alg, coalg, eq).has_value();
  if (!w.state || !w.element) return false;
  return jigsaw_general_failure(alg, coalg, piece, straight, flat, eq, *w.state,
                                *w.element)
      .has_value();
}

//===========================================================================
// Oracle equivalence.
//===========================================================================

template <typename B>
bool oracle_prefix_equal(const Colist<B>& c1, const Colist<B>& c2, std::size_t n) {
  return take(c1, n) == take(c2, n);
}

namespace detail {

template <typename B>
std::string render_prefix(const TakeResult<B>& t) {
  std::string out = render_list(t.items);
  out += t.ended ? " then End" : " ...";
  return out;
}

}  // namespace detail

// All input lists over `domain` up to length max_len, shortest first and in
// domain order within a length.  This enumeration order doubles as
// counterexample shrinking: the first failure reported is a smallest one.
template <typename X>
std::vector<std::vector<X>> all_lists(const std::vector<X>& domain,
                                      std::size_t max_len) {
  std::vector<std::vector<X>> out;
  out.emplace_back();
  std::size_t level_begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t level_end = out.size();
    for (std::size_t i = level_begin; i < level_end; ++i) {
      for (const X& x : domain) {
        auto next = out[i];
        next.push_back(x);
        out.push_back(std::move(next));
      }
    }
    level_begin = level_end;
  }
  return out;
}

// Compares a candidate evaluator against the definitional one on every input
// list up to max_len, at prefix length `prefix` (elements and ended flag).
template <typename A, typename B>
CheckResult<EquivalenceWitness<A>> exhaustive_equivalence(
    const std::function<Colist<B>(const std::vector<A>&)>& candidate,
    const std::function<Colist<B>(const std::vector<A>&)>& definitional,
    const std::vector<A>& domain, std::size_t max_len, std::size_t prefix,
    const CheckBudget& budget = {}) {
  CheckResult<EquivalenceWitness<A>> result;
  for (const auto& input : all_lists(domain, max_len)) {
    if (result.cases_checked >= budget.max_cases) {
      result.truncated = true;
      return result;
    }
    ++result.cases_checked;
    auto got = take(candidate(input), prefix);
    auto want = take(definitional(input), prefix);
    if (!(got == want)) {
      result.counterexample =
          EquivalenceWitness<A>{input, detail::render_list(input),
                                detail::render_prefix(got), detail::render_prefix(want)};
      return result;
    }
  }
  return result;
}

//===========================================================================
// Erased-state recomputation: evaluators that never materialize a state
// (the jigsaw family) are checked against the state a list denotes.
//===========================================================================

template <typename A, typename S>
S recompute_index(const RightAlgebra<A, S>& alg, const std::vector<A>& input) {
  return fold_right(alg, input);
}

template <typename A, typename S>
S recompute_left_index(const LeftAlgebra<A, S>& alg, S init,
                       const std::vector<A>& input) {
  return fold_left(alg, std::move(init), input);
}

}  // namespace metamorph
