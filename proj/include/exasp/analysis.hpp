/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "exasp/pathway.hpp"
#include "exasp/pauli_fierz.hpp"
#include "exasp/schedule.hpp"
#include "exasp/statevector.hpp"

namespace exasp {

/// Photon-vacuum projection: (renormalized state, p0). Throws
/// ProjectionError when p0 < 1e-14.
std::pair<StateVector, double> postselect_vacuum(const StateVector &state,
                                                 std::size_t photon_qubit);

struct SpectrumPoint {
  double s = 0.0;
  double omega = 0.0;
  double lambda = 0.0;
  /// Lowest n_states eigenvalues, ascending.
  std::vector<double> energies;
  /// Index (energy order) and energy of the adiabatically followed state.
  std::size_t followed_index = 0;
  double followed_energy = 0.0;
  /// |<Psi_k; n|followed>|^2 for the k-th electronic eigenstate and photon
  /// number n, stored at k * 2 + n.
  std::vector<double> diabatic_weights;
};

/// Eigenvalue scan along the pathway at n_points uniform values of s in
/// [0, 1]. The followed state starts as |Psi_initial; 1> and is tracked by
/// maximum overlap with the previous grid point.
std::vector<SpectrumPoint> pathway_spectrum(const CoupledSystem &cs,
                                            const PathwaySchedule &sched,
                                            std::size_t n_points,
                                            std::size_t n_states,
                                            std::size_t initial_index = 0);

struct FidelityReport {
  double fid_raw = 0.0;
  double fid_postselected = 0.0;
  double p0 = 0.0;
  /// 1 - fid_raw.
  double eps_final = 1.0;
  /// 1 - fid_postselected.
  double eps_final_post = 1.0;
};

/// Fidelities of `final` against |target; 0>. `target` lives on the
/// electronic register. A zero vacuum probability gives fid_postselected = 0.
FidelityReport fidelity_report(const StateVector &final,
                               const CoupledSystem &cs,
                               const StateVector &target);
/// Same, with the target taken as the electronic eigenstate `target_index`.
FidelityReport fidelity_report(const StateVector &final,
                               const CoupledSystem &cs,
                               std::size_t target_index);

/// 1 - |<exact|approx>|^2.
double initial_error(const StateVector &exact, const StateVector &approx);

struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  double r_squared = 0.0;
};

/// Least squares of log y = log a + b log x. Needs at least two points with
/// positive coordinates.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y);

} // namespace exasp
