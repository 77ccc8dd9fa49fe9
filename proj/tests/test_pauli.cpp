/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include "exasp/dense.hpp"
#include "exasp/pauli.hpp"
#include "support.hpp"

namespace exasp {
namespace {

using testing::kron_matrix;

TEST(PauliString, SingleQubitProducts) {
  const cplx i(0.0, 1.0);
  auto prod = [](const char *a, const char *b) {
    return PauliString::from_label(a) * PauliString::from_label(b);
  };
  EXPECT_EQ(prod("X", "Y").label(), "Z");
  EXPECT_EQ(prod("X", "Y").coeff(), i);
  EXPECT_EQ(prod("Y", "Z").coeff(), i);
  EXPECT_EQ(prod("Z", "X").coeff(), i);
  EXPECT_EQ(prod("Y", "X").coeff(), -i);
  for (const char *p : {"X", "Y", "Z"}) {
    const auto sq = prod(p, p);
    EXPECT_TRUE(sq.is_identity());
    EXPECT_EQ(sq.coeff(), cplx(1.0));
  }
}

TEST(PauliString, LabelsAndMasks) {
  const auto p = PauliString::from_label("IXYZ", 2.0);
  EXPECT_EQ(p.size(), 4u);
  EXPECT_EQ(p.label(), "IXYZ");
  EXPECT_EQ(p.x_mask(), 0b0110u);
  EXPECT_EQ(p.z_mask(), 0b1100u);
  EXPECT_EQ(p.y_count(), 1u);
  EXPECT_EQ(p.weight(), 3u);
  EXPECT_THROW(PauliString::from_label("XQ"), StructureError);
}

TEST(PauliString, ProductMatchesDenseProduct) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = testing::random_string(4, rng);
    const auto b = testing::random_string(4, rng);
    const Eigen::MatrixXcd want = kron_matrix(a) * kron_matrix(b);
    EXPECT_LT((kron_matrix(a * b) - want).norm(), 1e-12);
    const Eigen::MatrixXcd comm =
        kron_matrix(a) * kron_matrix(b) - kron_matrix(b) * kron_matrix(a);
    EXPECT_EQ(commutes(a, b), comm.norm() < 1e-12);
  }
}

TEST(PauliSum, CanonicalOrderIsIZXY) {
  PauliSum s(1);
  for (const char *l : {"Y", "X", "I", "Z"})
    s.add_term(PauliString::from_label(l));
  std::vector<std::string> labels;
  for (const auto &p : s.strings())
    labels.push_back(p.label());
  EXPECT_EQ(labels, (std::vector<std::string>{"I", "Z", "X", "Y"}));
}

TEST(PauliSum, CancellingTermsArePruned) {
  PauliSum s(2);
  s.add_term(PauliString::from_label("XZ", 0.5));
  s.add_term(PauliString::from_label("XZ", -0.5));
  EXPECT_TRUE(s.empty());
  s.add_term(PauliString::from_label("ZZ", 1e-16));
  EXPECT_TRUE(s.empty());
}

TEST(PauliSum, MismatchedRegistersThrow) {
  PauliSum a(2), b(3);
  EXPECT_THROW(a += b, StructureError);
  EXPECT_THROW(a.add_term(PauliString::from_label("XXX")), StructureError);
}

TEST(PauliSum, AlgebraMatchesDense) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_hermitian(3, 6, rng);
    const auto b = testing::random_hermitian(3, 6, rng);
    const auto A = kron_matrix(a), B = kron_matrix(b);
    EXPECT_LT((kron_matrix(a + b) - (A + B)).norm(), 1e-12);
    EXPECT_LT((kron_matrix(a * b) - A * B).norm(), 1e-12);
    EXPECT_LT((kron_matrix(commutator(a, b)) - (A * B - B * A)).norm(), 1e-12);
    EXPECT_LT((kron_matrix(anticommutator(a, b)) - (A * B + B * A)).norm(),
              1e-12);
    EXPECT_LT((dense::matrix(a) - A).norm(), 1e-12);
    EXPECT_TRUE(a.is_hermitian());
    EXPECT_TRUE(commutator(a, b).is_anti_hermitian());
  }
}

TEST(PauliSum, OneNormBoundsSpectralNorm) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = testing::random_hermitian(3, 8, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(kron_matrix(a));
    EXPECT_LE(es.eigenvalues().cwiseAbs().maxCoeff(), a.one_norm() + 1e-12);
  }
}

TEST(PauliSum, ExtendAndTensorTop) {
  PauliSum a(1);
  a.add_term(PauliString::from_label("X", 2.0));
  const auto e = a.extended(3);
  EXPECT_EQ(e.n_qubits(), 3u);
  EXPECT_EQ(e.coeff("XII"), cplx(2.0));
  const auto t = a.tensor_top(Pauli::Z);
  EXPECT_EQ(t.coeff("XZ"), cplx(2.0));
  EXPECT_THROW(e.extended(2), StructureError);
}

TEST(JordanWigner, NumberOperator) {
  const auto n1 = jordan_wigner(FermionOp::number(1), 3);
  PauliSum want(3);
  want.add_term(PauliString::from_label("III", 0.5));
  want.add_term(PauliString::from_label("IZI", -0.5));
  EXPECT_LT((kron_matrix(n1) - kron_matrix(want)).norm(), 1e-14);
}

TEST(JordanWigner, CanonicalAnticommutation) {
  const std::size_t n = 4;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const auto a = jordan_wigner(FermionOp{{{p, false}}, 1.0}, n);
      const auto bd = jordan_wigner(FermionOp{{{q, true}}, 1.0}, n);
      const auto b = jordan_wigner(FermionOp{{{q, false}}, 1.0}, n);
      const auto ac = anticommutator(a, bd);
      if (p == q) {
        EXPECT_EQ(ac.size(), 1u);
        EXPECT_NEAR(std::abs(ac.coeff(std::string(n, 'I')) - 1.0), 0.0, 1e-14);
      } else {
        EXPECT_TRUE(ac.empty());
      }
      EXPECT_TRUE(anticommutator(a, b).empty());
    }
}

TEST(JordanWigner, HoppingIsHermitianPair) {
  const auto h = jordan_wigner(
      std::vector<FermionOp>{FermionOp::hop(0, 2), FermionOp::hop(2, 0)}, 3);
  EXPECT_TRUE(h.is_hermitian());
  // a0+ a2 + h.c. = (X0 Z1 X2 + Y0 Z1 Y2) / 2
  EXPECT_NEAR(std::abs(h.coeff("XZX") - 0.5), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(h.coeff("YZY") - 0.5), 0.0, 1e-14);
  EXPECT_EQ(h.size(), 2u);
}

TEST(JordanWigner, ModeOutOfRangeThrows) {
  EXPECT_THROW(jordan_wigner(FermionOp::number(3), 3), StructureError);
}

} // namespace
} // namespace exasp
