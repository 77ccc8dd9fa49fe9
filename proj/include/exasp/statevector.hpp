/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "exasp/pauli.hpp"

namespace exasp {

/// Raised by operations that need a normalized input or a hermitian
/// generator and did not get one.
class InvalidStateError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Projection onto an outcome with (numerically) zero probability.
class ProjectionError : public std::runtime_error {
public:
  ProjectionError(const std::string &what, double probability)
      : std::runtime_error(what), probability_(probability) {}
  double probability() const { return probability_; }

private:
  double probability_;
};

/// Krylov exponential did not reach the requested residual.
class KrylovError : public std::runtime_error {
public:
  KrylovError(const std::string &what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

private:
  double residual_;
};

/// Dense amplitude vector over n qubits.
///
/// Amplitude index bit q holds the state of qubit q, so the highest qubit
/// (the photon, when present) is the most significant bit.
class StateVector {
public:
  StateVector() = default;
  /// |0...0> on n qubits.
  explicit StateVector(std::size_t n_qubits);

  static StateVector basis(std::size_t n_qubits, std::uint64_t index);
  /// Takes ownership of raw amplitudes; length must be a power of two. No
  /// normalization is applied.
  static StateVector from_amplitudes(std::vector<cplx> amps);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amps() const { return amps_; }
  std::span<cplx> amps() { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }
  cplx &operator[](std::size_t i) { return amps_[i]; }

  double norm() const;
  double norm_squared() const;
  void normalize();
  /// <this|other>.
  cplx inner(const StateVector &other) const;

private:
  std::size_t n_qubits_ = 0;
  std::vector<cplx> amps_;
};

/// |electronic> (x) |photon_occ> with the photon appended as the top qubit.
StateVector init_product(const StateVector &electronic, int photon_occ);

/// psi <- P psi, including the string's coefficient.
void apply_pauli(StateVector &state, const PauliString &p);

/// psi <- exp(-i theta P) psi. A real coefficient on `p` is folded into
/// theta; complex coefficients are rejected.
void apply_pauli_rotation(StateVector &state, const PauliString &p,
                          double theta);

/// <psi|O|psi>.
cplx expectation(const StateVector &state, const PauliSum &op);

/// |<a|b>|^2.
double fidelity(const StateVector &a, const StateVector &b);

/// Projects `qubit` onto `outcome`; returns the renormalized state and the
/// pre-projection probability. Throws ProjectionError below 1e-14.
std::pair<StateVector, double> project_qubit(const StateVector &state,
                                             std::size_t qubit, int outcome);

/// Probability of measuring `qubit` in `outcome` without collapsing.
double outcome_probability(const StateVector &state, std::size_t qubit,
                           int outcome);

/// PauliSum lowered to bit-flip groups for fast matrix-free application.
///
/// Every Pauli string maps |i> to phase(i) |i ^ x_mask>, so strings sharing
/// an x-mask collapse into one diagonal vector: (O psi)[i ^ flip] +=
/// diag[i] psi[i].
class CompiledOperator {
public:
  struct Group {
    std::uint64_t flip = 0;
    std::vector<cplx> diag;
  };

  CompiledOperator() = default;
  explicit CompiledOperator(const PauliSum &op);

  /// sum_k w_k O_k over operators on the same register.
  static CompiledOperator
  linear_combination(std::span<const std::pair<double, const CompiledOperator *>>
                         terms);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return std::size_t{1} << n_qubits_; }
  const std::vector<Group> &groups() const { return groups_; }
  /// Upper bound on the spectral radius (sum of |coefficients|).
  double norm_bound() const { return norm_bound_; }

  /// out = O in. `out` must not alias `in`.
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  StateVector apply(const StateVector &in) const;
  cplx expectation(const StateVector &state) const;

  /// O <- O + c I.
  void add_identity(double c);

private:
  std::size_t n_qubits_ = 0;
  std::vector<Group> groups_;
  double norm_bound_ = 0.0;
};

struct KrylovOptions {
  std::size_t max_dim = 60;
  double tolerance = 1e-12;
  /// Halve dt and retry when the subspace limit is hit; 0 disables.
  int max_substep_depth = 12;
};

struct KrylovStats {
  std::size_t matvecs = 0;
  std::size_t substeps = 1;
  double residual = 0.0;
};

/// psi <- exp(-i dt H) psi via Lanczos on the compiled operator.
KrylovStats evolve_exact_step(StateVector &state, const CompiledOperator &h,
                              double dt, const KrylovOptions &opts = {});
/// Convenience overload; rejects non-hermitian h.
KrylovStats evolve_exact_step(StateVector &state, const PauliSum &h, double dt,
                              const KrylovOptions &opts = {});

/// Debug dump: int32 n_qubits, then interleaved little-endian float64
/// (re, im) pairs.
void write_binary(std::ostream &os, const StateVector &state);
StateVector read_binary(std::istream &is);

} // namespace exasp
