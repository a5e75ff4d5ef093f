/**
 * @file stepper_categories.hpp
 * @brief Capability tags used by the integrate drivers to pick a strategy.
 */
#pragma once

#include <concepts>

namespace odekit {

struct stepper_tag {};
struct error_stepper_tag : stepper_tag {};
struct controlled_stepper_tag {};
struct dense_output_stepper_tag {};

struct StepperOrderInfo {
  int order;
  int error_order;  // 0 for steppers without an error estimate
  int stage_count;
};

template <class Stepper>
using stepper_category_t = typename std::remove_cvref_t<Stepper>::stepper_category;

template <class Stepper>
concept PlainStepper = std::derived_from<stepper_category_t<Stepper>, stepper_tag>;

template <class Stepper>
concept ControlledStepper =
    std::same_as<stepper_category_t<Stepper>, controlled_stepper_tag>;

template <class Stepper>
concept DenseOutputStepper =
    std::same_as<stepper_category_t<Stepper>, dense_output_stepper_tag>;

/// Steppers whose last stage is the derivative at the new point.
template <class Stepper>
concept FsalStepper = PlainStepper<Stepper> && std::remove_cvref_t<Stepper>::is_fsal;

}  // namespace odekit
