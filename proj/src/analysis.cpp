/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exasp/pathway.hpp"

namespace exasp {

std::pair<StateVector, double> postselect_vacuum(const StateVector &state,
                                                 std::size_t photon_qubit) {
  return project_qubit(state, photon_qubit, 0);
}

std::vector<SpectrumPoint> pathway_spectrum(const CoupledSystem &cs,
                                            const PathwaySchedule &sched,
                                            std::size_t n_points,
                                            std::size_t n_states,
                                            std::size_t initial_index) {
  if (n_points < 2)
    throw std::invalid_argument("pathway scan needs at least two points");
  if (n_states == 0)
    throw std::invalid_argument("pathway scan needs at least one state");

  const auto el = exact_diagonalize(cs.electronic());
  if (initial_index >= el.size())
    throw SpectrumError("initial state index outside the spectrum");
  const std::size_t n_diab = std::min(n_states, el.size());
  std::vector<StateVector> diabats;
  diabats.reserve(2 * n_diab);
  for (std::size_t k = 0; k < n_diab; ++k)
    for (int n : {0, 1})
      diabats.push_back(init_product(el.states[k], n));

  StateVector previous = init_product(el.states[initial_index], 1);
  std::vector<SpectrumPoint> out;
  out.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    SpectrumPoint p;
    p.s = static_cast<double>(i) / static_cast<double>(n_points - 1);
    p.omega = sched.omega(p.s);
    p.lambda = sched.lambda(p.s);
    const auto spec = coupled_spectrum(cs, p.omega, p.lambda);

    double best = -1.0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      const double ov = fidelity(previous, spec.states[k]);
      if (ov > best) {
        best = ov;
        p.followed_index = k;
      }
    }
    // Inside an exactly degenerate manifold keep the projection of the
    // previous state rather than an arbitrary basis vector.
    const double ej = spec.energies[p.followed_index];
    std::vector<cplx> amps(previous.dim());
    std::size_t in_manifold = 0;
    for (std::size_t k = 0; k < spec.size(); ++k) {
      if (std::abs(spec.energies[k] - ej) > 1e-10)
        continue;
      ++in_manifold;
      const cplx c = spec.states[k].inner(previous);
      for (std::size_t a = 0; a < amps.size(); ++a)
        amps[a] += c * spec.states[k][a];
    }
    if (in_manifold > 1) {
      previous = StateVector::from_amplitudes(std::move(amps));
      previous.normalize();
    } else {
      previous = spec.states[p.followed_index];
    }

    p.followed_energy = ej;
    const std::size_t keep = std::min(n_states, spec.size());
    p.energies.assign(spec.energies.begin(),
                      spec.energies.begin() + static_cast<std::ptrdiff_t>(keep));
    p.diabatic_weights.reserve(diabats.size());
    for (const auto &d : diabats)
      p.diabatic_weights.push_back(fidelity(d, previous));
    out.push_back(std::move(p));
  }
  return out;
}

FidelityReport fidelity_report(const StateVector &final,
                               const CoupledSystem &cs,
                               const StateVector &target) {
  if (final.n_qubits() != cs.n_qubits())
    throw StructureError("final state does not match the coupled register");
  const StateVector target_vac = init_product(target, 0);
  FidelityReport r;
  r.fid_raw = fidelity(target_vac, final);
  r.p0 = outcome_probability(final, cs.photon_qubit(), 0);
  r.fid_postselected = r.p0 >= 1e-14 ? r.fid_raw / r.p0 : 0.0;
  r.eps_final = std::max(0.0, 1.0 - r.fid_raw);
  r.eps_final_post = std::max(0.0, 1.0 - r.fid_postselected);
  return r;
}

FidelityReport fidelity_report(const StateVector &final,
                               const CoupledSystem &cs,
                               std::size_t target_index) {
  const auto el = exact_diagonalize(cs.electronic());
  if (target_index >= el.size())
    throw SpectrumError("target index outside the spectrum");
  return fidelity_report(final, cs, el.states[target_index]);
}

double initial_error(const StateVector &exact, const StateVector &approx) {
  return std::max(0.0, 1.0 - fidelity(exact, approx));
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("power-law fit needs equal-length inputs");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw std::invalid_argument("power-law fit needs positive data");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double n = static_cast<double>(lx.size());
  if (lx.size() < 2)
    throw std::invalid_argument("power-law fit needs at least two points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0)
    throw std::invalid_argument("power-law fit needs distinct x values");
  PowerLawFit f;
  f.exponent = sxy / sxx;
  f.prefactor = std::exp(my - f.exponent * mx);
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

} // namespace exasp
