/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/schedule.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace exasp {

namespace {

void check_s(double s) {
  if (!(s >= 0.0 && s <= 1.0))
    throw std::domain_error("path coordinate s=" + std::to_string(s) +
                            " outside [0, 1]");
}

} // namespace

PathwaySchedule::PathwaySchedule(double omega_max, double lambda_max,
                                 double total_time, std::size_t n_steps)
    : omega_max_(omega_max), lambda_max_(lambda_max), total_time_(total_time),
      n_steps_(n_steps) {
  if (n_steps_ < 1)
    throw std::invalid_argument("schedule needs at least one step");
  if (!(total_time_ >= 0.0))
    throw std::invalid_argument("total time must be non-negative");
  if (!(omega_max_ >= 0.0))
    throw std::invalid_argument("omega_max must be non-negative");
}

PathwaySchedule PathwaySchedule::from_time_step(double omega_max,
                                                double lambda_max,
                                                double total_time, double dt) {
  if (!(dt > 0.0))
    throw std::invalid_argument("time step must be positive");
  const auto n = static_cast<std::size_t>(std::llround(total_time / dt));
  return {omega_max, lambda_max, total_time, n < 1 ? 1 : n};
}

double PathwaySchedule::omega_unchecked(double s) const {
  return omega_max_ * s;
}

double PathwaySchedule::lambda_unchecked(double s) const {
  const double x = std::sin(std::numbers::pi * s);
  return lambda_max_ * x * x * x;
}

double PathwaySchedule::omega(double s) const {
  check_s(s);
  return omega_unchecked(s);
}

double PathwaySchedule::lambda(double s) const {
  check_s(s);
  // sin(pi) is not exactly zero in floating point.
  if (s == 0.0 || s == 1.0)
    return 0.0;
  return lambda_unchecked(s);
}

double PathwaySchedule::d_omega(double s) const {
  check_s(s);
  return omega_max_;
}

double PathwaySchedule::d_lambda(double s) const {
  check_s(s);
  if (s == 0.0 || s == 1.0)
    return 0.0;
  const double x = std::sin(std::numbers::pi * s);
  return 3.0 * lambda_max_ * std::numbers::pi * x * x *
         std::cos(std::numbers::pi * s);
}

} // namespace exasp
