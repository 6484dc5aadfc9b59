#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <metamorph/algebras.hpp>
#include <metamorph/rational.hpp>
#include <metamorph/streaming.hpp>

namespace metamorph {

using Digit = std::uint64_t;

// State of a fractional base conversion: the value read so far, the weight
// of the next input digit, and the weight of the next output digit.
struct BaseConvState {
  Rational value;
  Rational input_weight;
  Rational output_weight;

  friend bool operator==(const BaseConvState& a, const BaseConvState& b) {
    return a.value == b.value && a.input_weight == b.input_weight &&
           a.output_weight == b.output_weight;
  }

  std::string key() const {
    return "v=" + to_string(value) + " wi=" + to_string(input_weight) +
           " wo=" + to_string(output_weight);
  }
};

inline std::ostream& operator<<(std::ostream& os, const BaseConvState& s) {
  return os << "(" << s.value << ", " << s.input_weight << ", " << s.output_weight << ")";
}

inline void require_base(std::uint64_t base) {
  if (base < 2) throw std::invalid_argument("base must be at least 2");
}

// Start of a conversion: nothing read, first digits carry weight 1/base.
inline BaseConvState initial_state(std::uint64_t base_in, std::uint64_t base_out) {
  require_base(base_in);
  require_base(base_out);
  return BaseConvState{Rational(0), Rational(1, BigInt(base_in)),
                       Rational(1, BigInt(base_out))};
}

// Absorbing digit d adds d at the current input weight and moves the weight
// one place right.  Digits are validated here, at ingestion; everything
// downstream may assume they are in range.
inline LeftAlgebra<Digit, BaseConvState> digit_algebra(std::uint64_t base_in) {
  require_base(base_in);
  return LeftAlgebra<Digit, BaseConvState>{
      [base_in](const BaseConvState& s, const Digit& d) {
        if (d >= base_in) throw std::invalid_argument("digit out of range for base");
        return BaseConvState{s.value + Rational(BigInt(d)) * s.input_weight,
                             s.input_weight / Rational(BigInt(base_in)),
                             s.output_weight};
      }};
}

namespace detail {

// Splits off the next output digit: d = floor(value / output_weight) with
// remainder r, shifting the output weight one place right.
inline std::pair<Digit, BaseConvState> split_digit(const BaseConvState& s,
                                                   std::uint64_t base_out) {
  BigInt d = floor_div(s.value, s.output_weight);
  Rational rest = s.value - Rational(d) * s.output_weight;
  BaseConvState next{std::move(rest), s.input_weight,
                     s.output_weight / Rational(BigInt(base_out))};
  return {d.convert_to<Digit>(), std::move(next)};
}

}  // namespace detail

// Emits whenever any value is left.  Correct only once the whole input has
// been absorbed: it commits to floor(value / output_weight) even though
// unread input could still push the digit higher.
inline Coalgebra<Digit, BaseConvState> eager_emitter(std::uint64_t base_out) {
  require_base(base_out);
  return Coalgebra<Digit, BaseConvState>{
      [base_out](const BaseConvState& s) -> std::optional<std::pair<Digit, BaseConvState>> {
        if (!s.value.is_positive()) return std::nullopt;
        return detail::split_digit(s, base_out);
      }};
}

// Emits only when safe against any continuation of the input: the remainder
// plus the largest value the unread digits can still contribute, which is
// bounded by base_in times the next input weight, must fit under the output
// weight.  Satisfies the streaming condition; the eager emitter does not.
inline Coalgebra<Digit, BaseConvState> guarded_emitter(std::uint64_t base_in,
                                                       std::uint64_t base_out) {
  require_base(base_in);
  require_base(base_out);
  return Coalgebra<Digit, BaseConvState>{
      [base_in, base_out](const BaseConvState& s)
          -> std::optional<std::pair<Digit, BaseConvState>> {
        if (!s.value.is_positive()) return std::nullopt;
        auto [d, next] = detail::split_digit(s, base_out);
        if (next.value + Rational(BigInt(base_in)) * s.input_weight > s.output_weight)
          return std::nullopt;
        return std::make_pair(d, std::move(next));
      }};
}

// The full streaming plan: guarded while input remains, and optionally the
// eager emitter as flusher once input is exhausted, when eagerness is safe.
inline StreamingSpec<Digit, Digit, BaseConvState> conversion_spec(std::uint64_t base_in,
                                                                  std::uint64_t base_out,
                                                                  bool with_flush) {
  StreamingSpec<Digit, Digit, BaseConvState> spec{
      digit_algebra(base_in), guarded_emitter(base_in, base_out), std::nullopt};
  if (with_flush) spec.flusher = eager_emitter(base_out);
  return spec;
}

// Exact value of a digit string: sum of d_k * base^-k.  Independent of the
// state machinery above; used to cross-check it.
inline Rational digits_value(const std::vector<Digit>& digits, std::uint64_t base) {
  require_base(base);
  Rational weight(1, BigInt(base));
  Rational acc(0);
  for (Digit d : digits) {
    acc = acc + Rational(BigInt(d)) * weight;
    weight = weight / Rational(BigInt(base));
  }
  return acc;
}

}  // namespace metamorph
