/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "exasp/pauli.hpp"
#include "exasp/statevector.hpp"

namespace exasp::testing {

// Kronecker-product matrix of a Pauli string, written out independently of
// the library. Qubit 0 is the least significant index bit.
inline Eigen::MatrixXcd kron_matrix(const PauliString &p) {
  const cplx i(0.0, 1.0);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = 0; q < p.size(); ++q) {
    Eigen::Matrix2cd m;
    switch (p.op(q)) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -i, i, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) =
            m(a, b) * out;
    out = next;
  }
  return p.coeff() * out;
}

inline Eigen::MatrixXcd kron_matrix(const PauliSum &s) {
  const auto d = Eigen::Index{1} << s.n_qubits();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (const auto &p : s.strings())
    out += kron_matrix(p);
  return out;
}

inline PauliString random_string(std::size_t n, std::mt19937_64 &rng) {
  std::uniform_int_distribution<int> op(0, 3);
  std::vector<Pauli> ops(n);
  for (auto &o : ops)
    o = static_cast<Pauli>(op(rng));
  return {ops, 1.0};
}

// Random Hermitian sum with real coefficients in [-1, 1].
inline PauliSum random_hermitian(std::size_t n, std::size_t terms,
                                 std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  PauliSum out(n);
  for (std::size_t k = 0; k < terms; ++k) {
    auto p = random_string(n, rng);
    p.set_coeff(c(rng));
    out.add_term(p);
  }
  return out;
}

inline StateVector random_state(std::size_t n, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> a(std::size_t{1} << n);
  for (auto &x : a)
    x = {g(rng), g(rng)};
  auto s = StateVector::from_amplitudes(std::move(a));
  s.normalize();
  return s;
}

inline Eigen::VectorXcd as_vector(const StateVector &s) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(s.dim()));
  for (std::size_t i = 0; i < s.dim(); ++i)
    v[static_cast<Eigen::Index>(i)] = s[i];
  return v;
}

inline Eigen::MatrixXcd expm_dense(const Eigen::MatrixXcd &h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd ph(es.eigenvalues().size());
  for (Eigen::Index k = 0; k < ph.size(); ++k)
    ph[k] = std::exp(cplx(0.0, -t * es.eigenvalues()[k]));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace exasp::testing
