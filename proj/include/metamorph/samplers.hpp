#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <metamorph/base_conversion.hpp>
#include <metamorph/heapsort.hpp>
#include <metamorph/verify.hpp>

namespace metamorph {

inline StateEq<BaseConvState> base_conv_state_eq() {
  return StateEq<BaseConvState>{[](const BaseConvState& s) { return s.key(); }};
}

inline StateEq<Heap> heap_state_eq() {
  return StateEq<Heap>{[](const Heap& h) { return h.key(); }};
}

// States a real conversion run can visit: everything reachable from the
// initial state by consuming up to `bound` digits, closed under up to
// max_produce production steps of `producer` from each of those states.
// The conditions are only claimed on reachable states, and production steps
// are how the interesting ones (shrunken output weight) arise.  Enumeration
// order is deterministic: consumption breadth-first, then production chains.
inline DomainSampler<BaseConvState> reachable_states(
    std::uint64_t base_in, std::uint64_t base_out,
    Coalgebra<Digit, BaseConvState> producer, std::size_t max_produce) {
  auto alg = digit_algebra(base_in);
  DomainSampler<BaseConvState> sampler;
  sampler.enumerate = [base_in, base_out, producer, max_produce,
                       alg](std::size_t bound) {
    std::vector<BaseConvState> states;
    std::set<std::string> seen;
    auto add = [&](const BaseConvState& s) {
      if (seen.insert(s.key()).second) {
        states.push_back(s);
        return true;
      }
      return false;
    };
    add(initial_state(base_in, base_out));
    std::size_t level_begin = 0;
    for (std::size_t depth = 0; depth < bound; ++depth) {
      std::size_t level_end = states.size();
      for (std::size_t i = level_begin; i < level_end; ++i) {
        for (Digit d = 0; d < base_in; ++d) add(alg.step(states[i], d));
      }
      level_begin = level_end;
    }
    std::size_t consumed_end = states.size();
    for (std::size_t i = 0; i < consumed_end; ++i) {
      BaseConvState s = states[i];
      for (std::size_t k = 0; k < max_produce; ++k) {
        auto r = producer.next(s);
        if (!r) break;
        s = r->second;
        add(s);
      }
    }
    return states;
  };
  sampler.draw = [base_in, base_out, producer, max_produce, alg](std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    BaseConvState s = initial_state(base_in, base_out);
    std::size_t consume = eng() % 5;
    for (std::size_t i = 0; i < consume; ++i) s = alg.step(s, eng() % base_in);
    std::size_t produce = eng() % (max_produce + 1);
    for (std::size_t i = 0; i < produce; ++i) {
      auto r = producer.next(s);
      if (!r) break;
      s = r->second;
    }
    return s;
  };
  return sampler;
}

// Stress-test sampler over arbitrary rational triples, reachable or not.
// enumerate lays a small deterministic grid; draw picks random components
// with numerators and denominators up to max_component.
inline DomainSampler<BaseConvState> arbitrary_states(std::uint64_t max_component) {
  DomainSampler<BaseConvState> sampler;
  sampler.enumerate = [](std::size_t bound) {
    std::vector<BaseConvState> states;
    std::set<std::string> seen;
    for (std::uint64_t p = 0; p <= bound; ++p)
      for (std::uint64_t q = 1; q <= bound; ++q)
        for (std::uint64_t wi = 1; wi <= bound; ++wi)
          for (std::uint64_t wo = 1; wo <= bound; ++wo) {
            BaseConvState s{Rational(BigInt(p), BigInt(q)),
                            Rational(1, BigInt(wi)), Rational(1, BigInt(wo))};
            if (seen.insert(s.key()).second) states.push_back(std::move(s));
          }
    return states;
  };
  sampler.draw = [max_component](std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    auto part = [&](bool allow_zero) {
      std::uint64_t num = eng() % (max_component + 1) + (allow_zero ? 0 : 1);
      std::uint64_t den = eng() % max_component + 1;
      return Rational(BigInt(num), BigInt(den));
    };
    return BaseConvState{part(true), part(false), part(false)};
  };
  return sampler;
}

// All digits of a base; the bound is ignored, the domain is already finite.
inline DomainSampler<Digit> digit_domain(std::uint64_t base) {
  require_base(base);
  DomainSampler<Digit> sampler;
  sampler.enumerate = [base](std::size_t) {
    std::vector<Digit> out;
    for (Digit d = 0; d < base; ++d) out.push_back(d);
    return out;
  };
  sampler.draw = [base](std::uint64_t seed) { return std::mt19937_64(seed)() % base; };
  return sampler;
}

// Digit lists up to the enumeration bound, shortest first.
inline DomainSampler<std::vector<Digit>> digit_lists(std::uint64_t base) {
  require_base(base);
  DomainSampler<std::vector<Digit>> sampler;
  sampler.enumerate = [base](std::size_t bound) {
    std::vector<Digit> domain;
    for (Digit d = 0; d < base; ++d) domain.push_back(d);
    return all_lists(domain, bound);
  };
  sampler.draw = [base](std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<Digit> out(eng() % 5);
    for (Digit& d : out) d = eng() % base;
    return out;
  };
  return sampler;
}

// Finite values 0..max_finite, optionally with infinity appended.
inline DomainSampler<ExtVal> ext_val_domain(std::uint64_t max_finite,
                                            bool with_infinity) {
  DomainSampler<ExtVal> sampler;
  sampler.enumerate = [max_finite, with_infinity](std::size_t) {
    std::vector<ExtVal> out;
    for (std::uint64_t v = 0; v <= max_finite; ++v) out.push_back(ExtVal::finite(v));
    if (with_infinity) out.push_back(ExtVal::infinity());
    return out;
  };
  sampler.draw = [max_finite, with_infinity](std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::uint64_t span = max_finite + 1 + (with_infinity ? 1 : 0);
    std::uint64_t pick = eng() % span;
    return pick > max_finite ? ExtVal::infinity() : ExtVal::finite(pick);
  };
  return sampler;
}

// Every heap holding at most `bound` elements drawn from `values`, one per
// multiset.  Heap identity is the multiset, so nondecreasing index tuples
// enumerate each state exactly once.
inline DomainSampler<Heap> heap_domain(std::vector<ExtVal> values) {
  DomainSampler<Heap> sampler;
  sampler.enumerate = [values](std::size_t bound) {
    std::vector<Heap> out;
    out.emplace_back();
    std::vector<std::vector<std::size_t>> level;
    level.emplace_back();
    for (std::size_t size = 1; size <= bound; ++size) {
      std::vector<std::vector<std::size_t>> next;
      for (const auto& combo : level) {
        std::size_t start = combo.empty() ? 0 : combo.back();
        for (std::size_t i = start; i < values.size(); ++i) {
          auto extended = combo;
          extended.push_back(i);
          Heap h;
          for (std::size_t j : extended) h = h.push(values[j]);
          out.push_back(std::move(h));
          next.push_back(std::move(extended));
        }
      }
      level = std::move(next);
    }
    return out;
  };
  sampler.draw = [values](std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    Heap h;
    std::size_t size = eng() % 7;
    for (std::size_t i = 0; i < size && !values.empty(); ++i)
      h = h.push(values[eng() % values.size()]);
    return h;
  };
  return sampler;
}

}  // namespace metamorph
