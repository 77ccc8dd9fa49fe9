/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/dense.hpp"

#include <algorithm>
#include <unordered_map>

namespace exasp::dense {

Eigen::MatrixXcd matrix(const PauliString &p) {
  return matrix(PauliSum(p));
}

Eigen::MatrixXcd matrix(const PauliSum &op) {
  if (op.n_qubits() > kMaxDenseQubits)
    throw StructureError("dense matrix requested for " +
                         std::to_string(op.n_qubits()) + " qubits");
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << op.n_qubits());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  // Column i is O|i>.
  for (Eigen::Index i = 0; i < dim; ++i) {
    auto e = StateVector::basis(op.n_qubits(), static_cast<std::uint64_t>(i));
    StateVector acc = e;
    std::fill(acc.amps().begin(), acc.amps().end(), cplx{0.0, 0.0});
    for (const auto &s : op.strings()) {
      StateVector t = e;
      apply_pauli(t, s);
      for (Eigen::Index r = 0; r < dim; ++r)
        acc[static_cast<std::size_t>(r)] += t[static_cast<std::size_t>(r)];
    }
    for (Eigen::Index r = 0; r < dim; ++r)
      m(r, i) = acc[static_cast<std::size_t>(r)];
  }
  return m;
}

Eigen::MatrixXcd sector_matrix(const CompiledOperator &op,
                               std::span<const std::uint64_t> basis) {
  std::unordered_map<std::uint64_t, Eigen::Index> pos;
  pos.reserve(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    pos.emplace(basis[k], static_cast<Eigen::Index>(k));
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto &g : op.groups()) {
    for (Eigen::Index col = 0; col < dim; ++col) {
      const std::uint64_t i = basis[static_cast<std::size_t>(col)];
      auto it = pos.find(i ^ g.flip);
      if (it != pos.end())
        m(it->second, col) += g.diag[i];
    }
  }
  return m;
}

Eigen::MatrixXcd expm_hermitian(const Eigen::MatrixXcd &h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd ph(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k)
    ph[k] = std::exp(cplx{0.0, -t * es.eigenvalues()[k]});
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXcd to_vector(const StateVector &s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i)
    v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

StateVector from_vector(const Eigen::VectorXcd &v) {
  std::vector<cplx> amps(v.data(), v.data() + v.size());
  return StateVector::from_amplitudes(std::move(amps));
}

} // namespace exasp::dense
