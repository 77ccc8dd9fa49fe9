/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstddef>

namespace exasp {

/// Adiabatic path omega(s) = omega_max * s, lambda(s) = lambda_max sin^3(pi s)
/// discretized into n_steps equal steps of length dt = T / n_steps. Step k
/// propagates with the Hamiltonian at the left endpoint s_k = k / n_steps.
class PathwaySchedule {
public:
  PathwaySchedule(double omega_max, double lambda_max, double total_time,
                  std::size_t n_steps);

  /// n_steps = round(T / dt), at least 1.
  static PathwaySchedule from_time_step(double omega_max, double lambda_max,
                                        double total_time, double dt);

  double omega_max() const { return omega_max_; }
  double lambda_max() const { return lambda_max_; }
  double total_time() const { return total_time_; }
  std::size_t n_steps() const { return n_steps_; }
  double dt() const { return total_time_ / static_cast<double>(n_steps_); }
  double grid_point(std::size_t k) const {
    return static_cast<double>(k) / static_cast<double>(n_steps_);
  }

  /// Throw std::domain_error outside [0, 1].
  double omega(double s) const;
  double lambda(double s) const;
  double d_omega(double s) const;
  double d_lambda(double s) const;

  /// Unchecked closed forms, valid for any real s.
  double omega_unchecked(double s) const;
  double lambda_unchecked(double s) const;

private:
  double omega_max_;
  double lambda_max_;
  double total_time_;
  std::size_t n_steps_;
};

} // namespace exasp
