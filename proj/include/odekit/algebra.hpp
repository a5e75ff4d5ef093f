/**
 * @file algebra.hpp
 * @brief Element-wise state operations used by every stepper.
 *
 * Steppers never touch state elements directly. They go through an algebra
 * type, so the same stepper works on std::array, std::vector, std::deque or
 * any user container for which an algebra is provided.
 */
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <ranges>
#include <string>
#include <utility>

#include "odekit/errors.hpp"

namespace odekit {

/// Any sized random-access container of floating-point scalars.
template <class State>
concept RangeState = std::ranges::random_access_range<State> &&
                     std::ranges::sized_range<State> &&
                     std::floating_point<std::ranges::range_value_t<State>>;

template <class State>
using scalar_of = std::ranges::range_value_t<State>;

/// Largest fused linear combination the algebra supports; enough for the
/// seven Dormand-Prince stages.
inline constexpr std::size_t max_scale_sum_terms = 7;

namespace detail {

template <class State, class... Others>
void require_same_size(const State& ref, const Others&... others) {
  const auto n = std::ranges::size(ref);
  if (((std::ranges::size(others) != n) || ...)) {
    throw DimensionError("state length mismatch in algebra operation (expected " +
                         std::to_string(n) + ")");
  }
}

}  // namespace detail

/// Default algebra for random-access containers.
struct RangeAlgebra {
  /// Make dst the same length as ref. Fixed-size containers must already match.
  template <RangeState State>
  static void resize_like(State& dst, const State& ref) {
    if constexpr (requires { dst.resize(std::ranges::size(ref)); }) {
      if (std::ranges::size(dst) != std::ranges::size(ref)) {
        dst.resize(std::ranges::size(ref));
      }
    } else {
      detail::require_same_size(ref, dst);
    }
  }

  template <RangeState State>
  static void assign(State& dst, const State& src) {
    resize_like(dst, src);
    std::ranges::copy(src, std::ranges::begin(dst));
  }

  /// New state with the length of src, zero-filled.
  template <RangeState State>
  static State clone_shape(const State& src) {
    State out{};
    resize_like(out, src);
    for (auto& v : out) v = scalar_of<State>{0};
    return out;
  }

  /// out_i = sum_j coeffs_j * terms_j,i. out may alias any term.
  template <RangeState State, std::size_t K, class... Terms>
    requires(sizeof...(Terms) == K && K >= 1 && K <= max_scale_sum_terms &&
             (std::same_as<Terms, State> && ...))
  static State& scale_sum(State& out, const std::array<scalar_of<State>, K>& coeffs,
                          const Terms&... terms) {
    detail::require_same_size(out, terms...);
    const auto n = std::ranges::size(out);
    [&]<std::size_t... J>(std::index_sequence<J...>) {
      for (std::size_t i = 0; i < n; ++i) {
        out[i] = (... + (coeffs[J] * terms[i]));
      }
    }(std::make_index_sequence<K>{});
    return out;
  }

  /// out_i = op(inputs_i...). out may alias any input.
  template <RangeState State, class Op, class... Inputs>
    requires(std::same_as<Inputs, State> && ...)
  static State& for_each(State& out, Op&& op, const Inputs&... inputs) {
    detail::require_same_size(out, inputs...);
    const auto n = std::ranges::size(out);
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = op(inputs[i]...);
    }
    return out;
  }

  /// max_i op(inputs_i...). A NaN produced by op is sticky and returned.
  template <RangeState State, class Op, class... Inputs>
    requires(std::same_as<Inputs, State> && ...)
  static scalar_of<State> reduce_max(Op&& op, const State& first, const Inputs&... rest) {
    detail::require_same_size(first, rest...);
    const auto n = std::ranges::size(first);
    if (n == 0) throw DimensionError("reduce_max on an empty state");
    scalar_of<State> acc = op(first[0], rest[0]...);
    for (std::size_t i = 1; i < n; ++i) {
      const scalar_of<State> v = op(first[i], rest[i]...);
      if (v > acc || std::isnan(v)) {
        if (std::isnan(acc)) continue;
        acc = v;
      }
    }
    return acc;
  }

  template <RangeState State>
  static scalar_of<State> norm_inf(const State& s) {
    return reduce_max([](auto v) { return std::abs(v); }, s);
  }
};

/// Operations a stepper needs from its algebra.
template <class Algebra, class State>
concept AlgebraFor = requires(State& s, const State& c) {
  Algebra::resize_like(s, c);
  Algebra::assign(s, c);
  { Algebra::clone_shape(c) } -> std::same_as<State>;
  Algebra::scale_sum(s, std::array<scalar_of<State>, 2>{}, c, c);
  { Algebra::norm_inf(c) } -> std::convertible_to<scalar_of<State>>;
};

}  // namespace odekit
