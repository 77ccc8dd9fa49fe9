/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "exasp/pathway.hpp"
#include "exasp/pauli_fierz.hpp"
#include "exasp/schedule.hpp"
#include "exasp/statevector.hpp"

namespace exasp {

enum class GateKind { rx, ry, rz, h, s, sdg, cx, x };

std::string_view gate_name(GateKind k);
bool is_rotation(GateKind k);

/// A single gate. Rotations use `angle` with R_P(a) = exp(-i a P / 2). For
/// CX, `q0` is the control and `q1` the target; other gates ignore `q1`.
struct Gate {
  GateKind kind = GateKind::h;
  std::size_t q0 = 0;
  std::size_t q1 = 0;
  double angle = 0.0;

  bool operator==(const Gate &) const = default;
};

struct GateList {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;
  std::size_t n_steps = 0;
  std::string source;

  void rx(std::size_t q, double a) { gates.push_back({GateKind::rx, q, 0, a}); }
  void ry(std::size_t q, double a) { gates.push_back({GateKind::ry, q, 0, a}); }
  void rz(std::size_t q, double a) { gates.push_back({GateKind::rz, q, 0, a}); }
  void h(std::size_t q) { gates.push_back({GateKind::h, q, 0, 0.0}); }
  void s(std::size_t q) { gates.push_back({GateKind::s, q, 0, 0.0}); }
  void sdg(std::size_t q) { gates.push_back({GateKind::sdg, q, 0, 0.0}); }
  void x(std::size_t q) { gates.push_back({GateKind::x, q, 0, 0.0}); }
  void cx(std::size_t c, std::size_t t) {
    gates.push_back({GateKind::cx, c, t, 0.0});
  }

  /// Throws StructureError on out-of-range qubits, equal CX operands or
  /// non-finite angles.
  void validate() const;
  std::size_t cx_count() const;

  bool operator==(const GateList &) const = default;
};

/// Appends exp(-i theta P) for a unit-coefficient string: basis change (H for
/// X, S-dagger then H for Y), CX ladder onto the highest active qubit,
/// RZ(2 theta), then the mirror image. Identity strings emit nothing.
void append_pauli_rotation(GateList &g, const PauliString &p, double theta);

/// RY(phi) on qubit 0 with phi = atan(-g/epsilon), X on the photon qubit.
GateList two_level_ground_prep(double epsilon, double g);
/// X on the photon qubit only; the electronic register starts in |0...0>.
GateList photon_prep(const CoupledSystem &cs);

/// ground_prep followed by every first-order Trotter step of the schedule.
/// Terms keep their slot even at zero weight, so the structure is the same
/// for every step; peephole_optimize removes the empty rotations.
GateList emit_trotter_circuit(const CoupledSystem &cs,
                              const PathwaySchedule &sched,
                              const GateList &ground_prep);

/// Repeats until nothing changes: drops rotations with |angle| < 1e-12,
/// fuses neighbouring same-axis rotations on a qubit, and cancels
/// neighbouring H.H, S.Sdg, X.X and identical CX pairs.
GateList peephole_optimize(const GateList &g);

void apply_gate(StateVector &state, const Gate &g);
void simulate(StateVector &state, const GateList &g);
/// Dense unitary of the circuit; small registers only.
Eigen::MatrixXcd circuit_unitary(const GateList &g);

/// OpenQASM 2.0 text with 17 significant digits per angle.
std::string write_qasm(const GateList &g);
void write_qasm(std::ostream &os, const GateList &g);
GateList parse_qasm(std::string_view text, const std::string &name = "<qasm>");

} // namespace exasp
