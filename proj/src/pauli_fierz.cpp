/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/pauli_fierz.hpp"

#include <cmath>
#include <stdexcept>

namespace exasp {

TermWeights TermWeights::at(double omega, double lambda) {
  if (omega < 0.0)
    throw std::invalid_argument("photon frequency must be non-negative");
  return {1.0, omega, lambda * std::sqrt(omega / 2.0), lambda * lambda};
}

double TermWeights::operator[](CouplingTerm t) const {
  switch (t) {
  case CouplingTerm::electronic:
    return electronic;
  case CouplingTerm::photon:
    return photon;
  case CouplingTerm::coupling:
    return coupling;
  case CouplingTerm::dse:
    return dse;
  }
  return 0.0;
}

CoupledSystem couple(const ElectronicSystem &sys,
                     const std::array<double, 3> &e) {
  const double n = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  if (!(n > 0.0))
    throw std::invalid_argument("polarization vector must be non-zero");
  CoupledSystem cs;
  cs.electronic_ = sys;
  cs.polarization_ = {e[0] / n, e[1] / n, e[2] / n};
  cs.photon_qubit_ = sys.n_qubits;
  cs.projected_dipole_ = project_dipole(sys, cs.polarization_);
  cs.dse_ = cs.projected_dipole_ * cs.projected_dipole_;

  const std::size_t nq = sys.n_qubits + 1;
  cs.terms_[0] = sys.h_e.tensor_top(Pauli::I);
  PauliSum photon(nq);
  photon.add_term(PauliString(nq, 0.5));
  photon.add_term(PauliString::single(nq, cs.photon_qubit_, Pauli::Z, -0.5));
  cs.terms_[1] = photon;
  cs.terms_[2] = cs.projected_dipole_.tensor_top(Pauli::X) * cplx{-1.0, 0.0};
  cs.terms_[3] = cs.dse_.tensor_top(Pauli::I) * cplx{0.5, 0.0};

  auto compiled = std::make_shared<std::array<CompiledOperator, 4>>();
  for (std::size_t k = 0; k < 4; ++k)
    (*compiled)[k] = CompiledOperator(cs.terms_[k]);
  cs.compiled_ = std::move(compiled);
  cs.basis_ = exasp::sector_basis(nq, sys.n_qubits, sys.sector);
  return cs;
}

PauliSum hamiltonian_at(const CoupledSystem &cs, double omega, double lambda) {
  const auto w = TermWeights::at(omega, lambda);
  PauliSum h(cs.n_qubits());
  for (auto t : {CouplingTerm::electronic, CouplingTerm::photon,
                 CouplingTerm::coupling, CouplingTerm::dse})
    if (w[t] != 0.0)
      h += cs.term(t) * cplx{w[t], 0.0};
  return h.canonical();
}

CompiledOperator compiled_hamiltonian_at(const CoupledSystem &cs, double omega,
                                         double lambda) {
  const auto w = TermWeights::at(omega, lambda);
  const std::array<std::pair<double, const CompiledOperator *>, 4> parts{{
      {w.electronic, &cs.compiled_term(CouplingTerm::electronic)},
      {w.photon, &cs.compiled_term(CouplingTerm::photon)},
      {w.coupling, &cs.compiled_term(CouplingTerm::coupling)},
      {w.dse, &cs.compiled_term(CouplingTerm::dse)},
  }};
  return CompiledOperator::linear_combination(parts);
}

PauliSum d_hamiltonian_d_s(const CoupledSystem &cs,
                           const PathwaySchedule &sched, double s) {
  if (!(s > 0.0 && s <= 1.0))
    throw std::domain_error("dH/ds requires s in (0, 1]");
  const double omega = sched.omega(s);
  const double lambda = sched.lambda(s);
  const double omega_min = 1e-8 * sched.omega_max();

  if (omega < omega_min) {
    constexpr double h = 1e-6;
    const double wp = sched.omega_unchecked(s + h), lp = sched.lambda_unchecked(s + h);
    const double wm = sched.omega_unchecked(s - h), lm = sched.lambda_unchecked(s - h);
    // The closed forms are odd/linear in s, so evaluate the weights directly
    // instead of going through the omega >= 0 check.
    auto weights = [](double w, double l) {
      return std::array<double, 3>{w, l * std::sqrt(std::abs(w) / 2.0), l * l};
    };
    const auto a = weights(wp, lp), b = weights(wm, lm);
    PauliSum d(cs.n_qubits());
    d += cs.term(CouplingTerm::photon) * cplx{(a[0] - b[0]) / (2 * h), 0.0};
    d += cs.term(CouplingTerm::coupling) * cplx{(a[1] - b[1]) / (2 * h), 0.0};
    d += cs.term(CouplingTerm::dse) * cplx{(a[2] - b[2]) / (2 * h), 0.0};
    return d.canonical();
  }

  const double dw = sched.d_omega(s), dl = sched.d_lambda(s);
  const double root = std::sqrt(omega / 2.0);
  // d(lambda sqrt(omega/2))/ds and d(lambda^2)/ds.
  const double d_coupling = dl * root + lambda * dw / (4.0 * root);
  const double d_dse = 2.0 * lambda * dl;
  PauliSum d(cs.n_qubits());
  d += cs.term(CouplingTerm::photon) * cplx{dw, 0.0};
  d += cs.term(CouplingTerm::coupling) * cplx{d_coupling, 0.0};
  d += cs.term(CouplingTerm::dse) * cplx{d_dse, 0.0};
  return d.canonical();
}

} // namespace exasp
