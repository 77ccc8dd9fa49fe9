/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

// Dense-matrix helpers. These are the small-register reference path: tests
// use them as oracles and the sector diagonalizer builds on them. Nothing on
// the propagation path forms a full 2^n x 2^n matrix.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "exasp/pauli.hpp"
#include "exasp/statevector.hpp"

namespace exasp::dense {

inline constexpr std::size_t kMaxDenseQubits = 12;

Eigen::MatrixXcd matrix(const PauliString &p);
Eigen::MatrixXcd matrix(const PauliSum &op);

/// Matrix of `op` restricted to the span of the given basis indices.
Eigen::MatrixXcd sector_matrix(const CompiledOperator &op,
                               std::span<const std::uint64_t> basis);

/// exp(-i t H) for hermitian H by eigendecomposition.
Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd &h, double t);

Eigen::VectorXcd to_vector(const StateVector &s);
StateVector from_vector(const Eigen::VectorXcd &v);

} // namespace exasp::dense
