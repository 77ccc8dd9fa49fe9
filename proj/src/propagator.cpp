/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/propagator.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace exasp {

Method parse_method(std::string_view name) {
  if (name == "exact")
    return Method::exact;
  if (name == "trotter")
    return Method::trotter;
  throw std::invalid_argument("unknown propagation method '" +
                              std::string(name) + "'");
}

std::string_view to_string(Method m) {
  return m == Method::exact ? "exact" : "trotter";
}

TrotterTerms::TrotterTerms(const CoupledSystem &cs) {
  for (auto fam : {CouplingTerm::electronic, CouplingTerm::photon,
                   CouplingTerm::coupling, CouplingTerm::dse})
    for (const auto &s : cs.term(fam).strings())
      entries_.push_back({s, fam});
}

std::vector<PauliString> TrotterTerms::at(const TermWeights &w) const {
  std::vector<PauliString> out;
  out.reserve(entries_.size());
  for (const auto &e : entries_) {
    const double weight = w[e.family];
    if (weight == 0.0)
      continue;
    PauliString s = e.string;
    s.set_coeff(s.coeff() * weight);
    out.push_back(std::move(s));
  }
  return out;
}

double apply_trotter_step(StateVector &state,
                          const std::vector<PauliString> &ordered_terms,
                          double dt) {
  double phase = 0.0;
  for (const auto &p : ordered_terms) {
    if (std::abs(p.coeff().imag()) > 1e-12)
      throw std::invalid_argument("Trotter term " + p.label() +
                                  " has a non-real coefficient");
    const double c = p.coeff().real();
    if (p.is_identity()) {
      phase -= dt * c;
      continue;
    }
    PauliString unit = p;
    unit.set_coeff(1.0);
    apply_pauli_rotation(state, unit, dt * c);
  }
  return phase;
}

StateVector prepare_initial(const CoupledSystem &cs, const StateVector &ground) {
  if (ground.n_qubits() != cs.electronic().n_qubits)
    throw StructureError("ground state has " +
                         std::to_string(ground.n_qubits()) +
                         " qubits, electronic register has " +
                         std::to_string(cs.electronic().n_qubits));
  return init_product(ground, 1);
}

std::size_t default_record_every(std::size_t n_steps) {
  return n_steps <= 1000 ? 1 : (n_steps + 999) / 1000;
}

namespace {

TraceRow record(const CoupledSystem &cs, const PathwaySchedule &sched,
                std::size_t step, const CompiledOperator &h,
                const StateVector &psi, const StateVector &initial,
                const std::optional<StateVector> &target_vacuum) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  TraceRow r;
  r.step = step;
  r.s = sched.grid_point(step);
  r.omega = sched.omega(r.s);
  r.lambda = sched.lambda(r.s);
  r.e_total = h.expectation(psi).real();

  const StateVector he = cs.compiled_electronic().apply(psi);
  const std::uint64_t bit = std::uint64_t{1} << cs.photon_qubit();
  cplx e_all = 0.0, e_vac = 0.0;
  double p0 = 0.0;
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    const cplx term = std::conj(psi[i]) * he[i];
    e_all += term;
    if ((i & bit) == 0) {
      e_vac += term;
      p0 += std::norm(psi[i]);
    }
  }
  r.e_electronic = e_all.real();
  r.p_photon0 = p0;
  r.e_postselected = p0 >= 1e-14 ? e_vac.real() / p0 : nan;
  r.fid_initial = fidelity(initial, psi);
  if (target_vacuum) {
    r.fid_target_raw = fidelity(*target_vacuum, psi);
    r.fid_target_post = p0 >= 1e-14 ? r.fid_target_raw / p0 : nan;
  } else {
    r.fid_target_raw = r.fid_target_post = nan;
  }
  return r;
}

} // namespace

EvolveResult evolve(const CoupledSystem &cs, const PathwaySchedule &sched,
                    const StateVector &psi0, const EvolveOptions &opts) {
  if (psi0.n_qubits() != cs.n_qubits())
    throw StructureError("initial state does not match the coupled register");
  std::optional<StateVector> target_vacuum;
  if (opts.target)
    target_vacuum = init_product(*opts.target, 0);

  const std::size_t n = sched.n_steps();
  const std::size_t every =
      opts.record_every == 0 ? default_record_every(n) : opts.record_every;
  const double dt = sched.dt();

  EvolveResult res;
  res.final_state = psi0;
  StateVector &psi = res.final_state;

  std::array<double, 4> identity_coeff{};
  for (auto fam : {CouplingTerm::electronic, CouplingTerm::photon,
                   CouplingTerm::coupling, CouplingTerm::dse}) {
    const auto &term = cs.term(fam);
    identity_coeff[static_cast<std::size_t>(fam)] =
        term.coeff(std::vector<Pauli>(term.n_qubits(), Pauli::I)).real();
  }

  std::optional<TrotterTerms> trotter;
  if (opts.method == Method::trotter)
    trotter.emplace(cs);

  auto h_at = [&](std::size_t j) {
    const double s = sched.grid_point(j);
    return compiled_hamiltonian_at(cs, sched.omega(s), sched.lambda(s));
  };

  CompiledOperator h = h_at(0);
  res.trace.rows.push_back(record(cs, sched, 0, h, psi, psi0, target_vacuum));
  for (std::size_t k = 0; k < n; ++k) {
    const double s = sched.grid_point(k);
    const auto w = TermWeights::at(sched.omega(s), sched.lambda(s));
    if (opts.method == Method::exact) {
      // The identity component only contributes a global phase.
      double shift = 0.0;
      for (auto fam : {CouplingTerm::electronic, CouplingTerm::photon,
                       CouplingTerm::coupling, CouplingTerm::dse})
        shift += w[fam] * identity_coeff[static_cast<std::size_t>(fam)];
      CompiledOperator h_step = h;
      h_step.add_identity(-shift);
      evolve_exact_step(psi, h_step, dt, opts.krylov);
      res.global_phase -= dt * shift;
    } else {
      res.global_phase += apply_trotter_step(psi, trotter->at(w), dt);
    }
    const std::size_t j = k + 1;
    const bool want = (j % every == 0) || j == n;
    if (want || opts.method == Method::exact)
      h = h_at(j);
    if (want)
      res.trace.rows.push_back(
          record(cs, sched, j, h, psi, psi0, target_vacuum));
  }
  return res;
}

StateVector two_level_ground_state(double epsilon, double g) {
  const double phi = std::atan(-g / epsilon);
  StateVector s(1);
  s[0] = std::cos(phi / 2);
  s[1] = std::sin(phi / 2);
  return s;
}

} // namespace exasp
