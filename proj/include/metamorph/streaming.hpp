#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <metamorph/algebras.hpp>
#include <metamorph/colist.hpp>
#include <metamorph/metamorphism.hpp>

namespace metamorph {

// A streaming evaluation plan: the algebra that absorbs input, the coalgebra
// that emits while input remains, and an optional flusher coalgebra that
// takes over once the input is exhausted and the main coalgebra withholds.
// The flusher typically drops a safety guard to drain whatever is left.
template <typename A, typename B, typename S>
struct StreamingSpec {
  LeftAlgebra<A, S> alg;
  Coalgebra<B, S> coalg;
  std::optional<Coalgebra<B, S>> flusher;
};

namespace detail {

// One node of the streamed colist.  Production comes first: as long as the
// coalgebra emits, input is not touched.  Only when it withholds do we
// consume one element and try again; with nothing left to consume we either
// hand the state to the flusher or end.
template <typename A, typename B, typename S>
typename Colist<B>::Step stream_step(const StreamingSpec<A, B, S>& spec, S state,
                                     const std::shared_ptr<const std::vector<A>>& input,
                                     std::size_t next_in) {
  while (true) {
    if (auto r = spec.coalg.next(state)) {
      S produced = std::move(r->second);
      return std::make_pair(
          std::move(r->first),
          Colist<B>::defer([spec, produced = std::move(produced), input, next_in]() {
            return stream_step(spec, produced, input, next_in);
          }));
    }
    if (next_in < input->size()) {
      state = spec.alg.step(state, (*input)[next_in]);
      ++next_in;
      continue;
    }
    if (spec.flusher) return unfold(*spec.flusher, std::move(state)).uncons();
    return std::nullopt;
  }
}

}  // namespace detail

// Incremental evaluator: interleaves production with consumption instead of
// folding the whole input first.  Agrees with consume_before_produce only
// when the coalgebra satisfies the streaming condition; the verify header
// checks that, this function just runs the schedule.
template <typename A, typename B, typename S>
Colist<B> stream(StreamingSpec<A, B, S> spec, S init, std::vector<A> input) {
  auto shared = std::make_shared<const std::vector<A>>(std::move(input));
  return Colist<B>::defer([spec = std::move(spec), init = std::move(init), shared]() {
    return detail::stream_step(spec, init, shared, 0);
  });
}

// Push-driven variant of stream() for callers that obtain input a piece at a
// time.  Single-owner and mutable; not shareable across threads.
template <typename A, typename B, typename S>
class StreamProcessor {
 public:
  StreamProcessor(StreamingSpec<A, B, S> spec, S init)
      : spec_(std::move(spec)), state_(std::move(init)) {}

  // Absorbs one element, then drains every output the coalgebra will give.
  std::vector<B> feed(const A& a) {
    if (finished_) throw std::logic_error("StreamProcessor: feed after finish");
    state_ = spec_.alg.step(state_, a);
    return drain();
  }

  // Ends the input: the remaining output is the flusher's unfold when a
  // flusher is present, otherwise whatever the main coalgebra still yields.
  Colist<B> finish() {
    finished_ = true;
    return unfold(spec_.flusher ? *spec_.flusher : spec_.coalg, state_);
  }

  const S& state() const { return state_; }
  bool finished() const { return finished_; }

 private:
  std::vector<B> drain() {
    std::vector<B> out;
    while (auto r = spec_.coalg.next(state_)) {
      out.push_back(std::move(r->first));
      state_ = std::move(r->second);
    }
    return out;
  }

  StreamingSpec<A, B, S> spec_;
  S state_;
  bool finished_ = false;
};

}  // namespace metamorph
