/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "exasp/pauli_fierz.hpp"
#include "exasp/schedule.hpp"
#include "exasp/statevector.hpp"

namespace exasp {

enum class Method { exact, trotter };

Method parse_method(std::string_view name);
std::string_view to_string(Method m);

/// One recorded point of a propagation. Row j describes the state after j
/// steps, at s = j / N. Quantities that are undefined (no target, zero
/// vacuum probability) are NaN.
struct TraceRow {
  std::size_t step = 0;
  double s = 0.0;
  double omega = 0.0;
  double lambda = 0.0;
  double e_total = 0.0;
  double e_electronic = 0.0;
  double e_postselected = 0.0;
  double p_photon0 = 0.0;
  double fid_target_raw = 0.0;
  double fid_target_post = 0.0;
  double fid_initial = 0.0;
};

struct PropagationTrace {
  std::vector<TraceRow> rows;
};

/// Pauli terms of H(s) in Trotter order: electronic (canonical order), then
/// photon frequency, coupling, and dipole self-energy. Only coefficients
/// depend on s; the strings are fixed once per system.
class TrotterTerms {
public:
  struct Entry {
    PauliString string; // coefficient at unit family weight
    CouplingTerm family;
  };

  explicit TrotterTerms(const CoupledSystem &cs);

  const std::vector<Entry> &entries() const { return entries_; }
  /// Concrete ordered terms at the given weights, identity included.
  /// Families with zero weight are left out.
  std::vector<PauliString> at(const TermWeights &w) const;

private:
  std::vector<Entry> entries_;
};

/// prod_j exp(-i dt c_j P_j) in the given order. Identity terms are not
/// applied; their phase -dt*c is returned.
double apply_trotter_step(StateVector &state,
                          const std::vector<PauliString> &ordered_terms,
                          double dt);

/// |ground> (x) |1>.
StateVector prepare_initial(const CoupledSystem &cs, const StateVector &ground);

/// 1 for N <= 1000, else ceil(N / 1000).
std::size_t default_record_every(std::size_t n_steps);

struct EvolveOptions {
  Method method = Method::exact;
  /// 0 selects default_record_every.
  std::size_t record_every = 0;
  /// Electronic target for fidelity columns; NaN columns when absent.
  std::optional<StateVector> target;
  KrylovOptions krylov;
};

struct EvolveResult {
  StateVector final_state;
  PropagationTrace trace;
  /// Accumulated phase from identity terms (never applied to amplitudes).
  double global_phase = 0.0;
};

EvolveResult evolve(const CoupledSystem &cs, const PathwaySchedule &sched,
                    const StateVector &psi0, const EvolveOptions &opts = {});

/// Exact ground state of the two-level model, RY(phi)|0> with
/// phi = atan(-g/epsilon) as the rotation angle.
StateVector two_level_ground_state(double epsilon, double g);

} // namespace exasp
