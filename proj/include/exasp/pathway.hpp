/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <array>
#include <optional>

#include "exasp/pauli_fierz.hpp"
#include "exasp/schedule.hpp"

namespace exasp {

/// omega_max = 2 * (first bright excitation energy along e).
double estimate_omega_max(const ElectronicSystem &sys,
                          const std::array<double, 3> &polarization,
                          double threshold = kBrightThreshold);

/// Spectrum of H(omega, lambda) in the coupled sector, ascending.
Spectrum coupled_spectrum(const CoupledSystem &cs, double omega, double lambda,
                          std::size_t max_states = 0);

struct TimeBoundOptions {
  /// Uniform grid s_k = k / grid_size, k = 1..grid_size.
  std::size_t grid_size = 201;
  /// Golden-section refinement around the largest grid value.
  bool refine = true;
  double degeneracy_tolerance = 1e-10;
  double numerator_tolerance = 1e-10;
};

struct TimeBound {
  /// max_s max_K |<K|dH/ds|J>| / (E_K - E_J)^2; +inf for an unresolved
  /// crossing with non-zero coupling.
  double value = 0.0;
  double s_at_max = 0.0;
  /// Grid point at which J's nearest competitor was found.
  std::size_t partner_at_max = 0;
  bool diverged = false;
};

/// Adiabatic-time estimate for the state that starts as |Psi_I; 1> with
/// I = initial_index in the electronic spectrum. The followed state is
/// tracked along s by maximum overlap with the previous grid point.
TimeBound adiabatic_time_bound(const CoupledSystem &cs,
                               const PathwaySchedule &sched,
                               std::size_t initial_index = 0,
                               const TimeBoundOptions &opts = {});

} // namespace exasp
