/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/pathway.hpp"

#include <cmath>
#include <limits>

namespace exasp {

double estimate_omega_max(const ElectronicSystem &sys,
                          const std::array<double, 3> &polarization,
                          double threshold) {
  const double n =
      std::sqrt(polarization[0] * polarization[0] +
                polarization[1] * polarization[1] +
                polarization[2] * polarization[2]);
  if (!(n > 0.0))
    throw std::invalid_argument("polarization vector must be non-zero");
  const std::array<double, 3> e{polarization[0] / n, polarization[1] / n,
                                polarization[2] / n};
  const auto spectrum = exact_diagonalize(sys);
  const auto bright =
      find_first_bright_state(spectrum, project_dipole(sys, e), threshold);
  return 2.0 * bright.excitation_energy;
}

Spectrum coupled_spectrum(const CoupledSystem &cs, double omega, double lambda,
                          std::size_t max_states) {
  return diagonalize_in_basis(compiled_hamiltonian_at(cs, omega, lambda),
                              cs.sector_basis(), max_states);
}

namespace {

struct PointResult {
  double value = 0.0;
  std::size_t partner = 0;
  bool diverged = false;
  StateVector followed;
};

PointResult evaluate_point(const CoupledSystem &cs, const PathwaySchedule &sched,
                           double s, const StateVector &previous,
                           const TimeBoundOptions &opts) {
  const auto spec = coupled_spectrum(cs, sched.omega(s), sched.lambda(s));
  std::size_t j = 0;
  double best = -1.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double ov = fidelity(previous, spec.states[k]);
    if (ov > best) {
      best = ov;
      j = k;
    }
  }

  // Resolve an exactly degenerate manifold around J by projecting the
  // previous state into it.
  std::vector<std::size_t> manifold;
  for (std::size_t k = 0; k < spec.size(); ++k)
    if (std::abs(spec.energies[k] - spec.energies[j]) <
        opts.degeneracy_tolerance)
      manifold.push_back(k);
  StateVector followed = spec.states[j];
  if (manifold.size() > 1) {
    std::vector<cplx> amps(previous.dim());
    for (auto k : manifold) {
      const cplx c = spec.states[k].inner(previous);
      for (std::size_t i = 0; i < amps.size(); ++i)
        amps[i] += c * spec.states[k][i];
    }
    followed = StateVector::from_amplitudes(std::move(amps));
    followed.normalize();
  }

  const CompiledOperator dh(d_hamiltonian_d_s(cs, sched, s));
  const StateVector v = dh.apply(followed);
  const double ej = spec.energies[j];

  PointResult r;
  r.followed = followed;
  double in_manifold = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const cplx m = spec.states[k].inner(v);
    const double gap = std::abs(spec.energies[k] - ej);
    if (gap < opts.degeneracy_tolerance) {
      in_manifold += std::norm(m);
      continue;
    }
    const double num = std::abs(m);
    if (num < opts.numerator_tolerance)
      continue;
    const double ratio = num / (gap * gap);
    if (ratio > r.value) {
      r.value = ratio;
      r.partner = k;
    }
  }
  // Coupling to degenerate partners: everything in the manifold except the
  // diagonal element along J itself.
  const double diag = std::norm(followed.inner(v));
  if (std::sqrt(std::max(0.0, in_manifold - diag)) >= opts.numerator_tolerance) {
    r.value = std::numeric_limits<double>::infinity();
    r.diverged = true;
  }
  return r;
}

} // namespace

TimeBound adiabatic_time_bound(const CoupledSystem &cs,
                               const PathwaySchedule &sched,
                               std::size_t initial_index,
                               const TimeBoundOptions &opts) {
  if (opts.grid_size < 1)
    throw std::invalid_argument("time-bound grid needs at least one point");
  const auto el = exact_diagonalize(cs.electronic());
  if (initial_index >= el.size())
    throw SpectrumError("initial state index outside the spectrum");
  StateVector previous = init_product(el.states[initial_index], 1);

  TimeBound tb;
  std::size_t best_k = 0;
  std::vector<StateVector> followed;
  followed.reserve(opts.grid_size + 1);
  followed.push_back(previous);
  for (std::size_t k = 1; k <= opts.grid_size; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(opts.grid_size);
    auto r = evaluate_point(cs, sched, s, previous, opts);
    if (r.diverged) {
      tb.value = std::numeric_limits<double>::infinity();
      tb.s_at_max = s;
      tb.diverged = true;
      return tb;
    }
    if (r.value > tb.value) {
      tb.value = r.value;
      tb.s_at_max = s;
      tb.partner_at_max = r.partner;
      best_k = k;
    }
    previous = std::move(r.followed);
    followed.push_back(previous);
  }

  if (opts.refine && best_k > 0) {
    const double h = 1.0 / static_cast<double>(opts.grid_size);
    double lo = std::max(h * 1e-3, tb.s_at_max - h);
    double hi = std::min(1.0, tb.s_at_max + h);
    const StateVector &ref = followed[best_k];
    auto f = [&](double s) {
      return evaluate_point(cs, sched, s, ref, opts);
    };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    auto fa = f(a), fb = f(b);
    for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
      if (fa.diverged || fb.diverged)
        break;
      if (fa.value > fb.value) {
        hi = b;
        b = a;
        fb = std::move(fa);
        a = hi - g * (hi - lo);
        fa = f(a);
      } else {
        lo = a;
        a = b;
        fa = std::move(fb);
        b = lo + g * (hi - lo);
        fb = f(b);
      }
    }
    for (const auto *p : {&fa, &fb}) {
      if (p->diverged) {
        tb.value = std::numeric_limits<double>::infinity();
        tb.diverged = true;
      } else if (p->value > tb.value) {
        tb.value = p->value;
        tb.s_at_max = p == &fa ? a : b;
        tb.partner_at_max = p->partner;
      }
    }
  }
  return tb;
}

} // namespace exasp
