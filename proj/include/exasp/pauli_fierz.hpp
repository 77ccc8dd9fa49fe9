/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "exasp/models.hpp"
#include "exasp/schedule.hpp"

namespace exasp {

/// Term families of the coupled Hamiltonian, in the order a Trotter step
/// applies them.
enum class CouplingTerm { electronic = 0, photon = 1, coupling = 2, dse = 3 };

/// Scalar prefactors of each term family at a point (omega, lambda):
///   H = H_e + omega N_ph + lambda sqrt(omega/2) C + lambda^2 D
/// with N_ph = (I - Z_ph)/2, C = -(e.mu) X_ph and D = (e.mu)^2 / 2.
struct TermWeights {
  double electronic = 1.0;
  double photon = 0.0;
  double coupling = 0.0;
  double dse = 0.0;

  static TermWeights at(double omega, double lambda);
  double operator[](CouplingTerm t) const;
};

/// Electronic system dressed with a single two-level photon mode on one
/// extra (top) qubit. Immutable once built.
class CoupledSystem {
public:
  const ElectronicSystem &electronic() const { return electronic_; }
  const std::array<double, 3> &polarization() const { return polarization_; }
  std::size_t photon_qubit() const { return photon_qubit_; }
  std::size_t n_qubits() const { return photon_qubit_ + 1; }

  /// e . mu on the electronic register.
  const PauliSum &projected_dipole() const { return projected_dipole_; }
  /// (e . mu)^2 on the electronic register.
  const PauliSum &dse() const { return dse_; }

  /// Term family on the full register with unit prefactor.
  const PauliSum &term(CouplingTerm t) const {
    return terms_[static_cast<std::size_t>(t)];
  }
  const CompiledOperator &compiled_term(CouplingTerm t) const {
    return (*compiled_)[static_cast<std::size_t>(t)];
  }
  /// Electronic Hamiltonian tensored with identity on the photon.
  const CompiledOperator &compiled_electronic() const {
    return compiled_term(CouplingTerm::electronic);
  }
  /// Register basis of the electronic sector times both photon states.
  const std::vector<std::uint64_t> &sector_basis() const { return basis_; }

  friend CoupledSystem couple(const ElectronicSystem &sys,
                              const std::array<double, 3> &e);

private:
  ElectronicSystem electronic_;
  std::array<double, 3> polarization_{0.0, 0.0, 1.0};
  std::size_t photon_qubit_ = 0;
  PauliSum projected_dipole_;
  PauliSum dse_;
  std::array<PauliSum, 4> terms_;
  std::shared_ptr<const std::array<CompiledOperator, 4>> compiled_;
  std::vector<std::uint64_t> basis_;
};

/// Normalizes e and extends the register by one photon qubit. Throws
/// std::invalid_argument for a zero vector.
CoupledSystem couple(const ElectronicSystem &sys, const std::array<double, 3> &e);

/// Canonical H(omega, lambda). Throws std::invalid_argument for omega < 0.
PauliSum hamiltonian_at(const CoupledSystem &cs, double omega, double lambda);
CompiledOperator compiled_hamiltonian_at(const CoupledSystem &cs, double omega,
                                         double lambda);

/// dH/ds = omega'(s) dH/domega + lambda'(s) dH/dlambda for s in (0, 1].
/// Below omega_min = 1e-8 omega_max the 1/sqrt(omega) factor is avoided by a
/// central difference in s with step 1e-6.
PauliSum d_hamiltonian_d_s(const CoupledSystem &cs,
                           const PathwaySchedule &sched, double s);

} // namespace exasp
