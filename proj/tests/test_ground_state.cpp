/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "exasp/ground_state.hpp"
#include "support.hpp"

namespace exasp {
namespace {

std::vector<double> random_params(std::size_t n, std::uint64_t seed,
                                  double scale = 0.5) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto &v : x)
    v = u(rng);
  return x;
}

ElectronicSystem hubbard(std::size_t sites, double u) {
  HubbardParams p;
  p.n_sites = sites;
  p.u = u;
  return build_hubbard(p);
}

TEST(TupsAnsatz, ParameterCount) {
  EXPECT_EQ(TupsAnsatz::parameter_count(2, 1), 4u);
  EXPECT_EQ(TupsAnsatz::parameter_count(6, 1), 30u);
  EXPECT_EQ(TupsAnsatz::parameter_count(6, 4), 75u);
  EXPECT_EQ(TupsAnsatz::parameter_count(5, 2), 36u);
  EXPECT_THROW(TupsAnsatz::parameter_count(1, 1), StructureError);
  const TupsAnsatz a(6, 3);
  EXPECT_EQ(a.n_params(), TupsAnsatz::parameter_count(6, 3));
  EXPECT_EQ(a.n_u_params(), 45u);
  EXPECT_EQ(a.n_electrons(), 6u);
  EXPECT_THROW(TupsAnsatz(4, 1, 3), StructureError);
}

TEST(TupsAnsatz, GateOrder) {
  const TupsAnsatz a(4, 1);
  // U layer: tiles 0 and 2 then tile 1, each theta3 k1, theta2 k2, theta1 k1.
  const auto &g = a.gates();
  ASSERT_EQ(g.size(), 9u + 6u);
  EXPECT_EQ(g[0].lower, 0u);
  EXPECT_EQ(g[0].generator, 1);
  EXPECT_EQ(g[0].param, 2u);
  EXPECT_EQ(g[1].generator, 2);
  EXPECT_EQ(g[1].param, 1u);
  EXPECT_EQ(g[2].param, 0u);
  EXPECT_EQ(g[3].lower, 2u);
  EXPECT_EQ(g[6].lower, 1u);
  for (std::size_t k = 9; k < g.size(); ++k)
    EXPECT_EQ(g[k].generator, 1);
}

TEST(TupsAnsatz, ReferenceDoublyOccupiesEvenOrbitals) {
  const TupsAnsatz a(6, 1);
  EXPECT_EQ(a.reference_bits(), (3u << 0) | (3u << 4) | (3u << 8));
}

TEST(SingletGenerators, SymmetriesAndForm) {
  const auto g = singlet_generators(3, 0, 2);
  EXPECT_TRUE(g.kappa1.is_anti_hermitian());
  EXPECT_TRUE(g.kappa2.is_anti_hermitian());
  for (const auto *k : {&g.kappa1, &g.kappa2}) {
    EXPECT_TRUE(commutator(*k, number_operator(6)).empty());
    EXPECT_TRUE(commutator(*k, sz_operator(6)).empty());
  }
  const auto e02 = jordan_wigner(
      std::vector<FermionOp>{FermionOp::hop(0, 4), FermionOp::hop(1, 5)}, 6);
  const auto e20 = jordan_wigner(
      std::vector<FermionOp>{FermionOp::hop(4, 0), FermionOp::hop(5, 1)}, 6);
  EXPECT_TRUE((g.kappa1 - (e02 - e20)).empty());
  EXPECT_TRUE((g.kappa2 - (e02 * e02 - e20 * e20)).empty());
}

TEST(TupsAnsatz, ZeroParametersGiveReference) {
  const TupsAnsatz a(4, 2);
  const std::vector<double> zero(a.n_params(), 0.0);
  EXPECT_NEAR(fidelity(apply_ansatz(a, zero), a.reference()), 1.0, 1e-13);
  EXPECT_THROW(apply_ansatz(a, std::vector<double>(3)), std::invalid_argument);
}

TEST(TupsAnsatz, UnitaryAndSectorPreserving) {
  const TupsAnsatz a(4, 2);
  const auto x = random_params(a.n_params(), 3, 2.0);
  const auto s = apply_ansatz(a, x);
  EXPECT_NEAR(s.norm(), 1.0, 1e-12);
  EXPECT_NEAR(expectation(s, number_operator(8)).real(), 4.0, 1e-12);
  EXPECT_NEAR(expectation(s, sz_operator(8)).real(), 0.0, 1e-12);
}

TEST(TupsAnsatz, LocalGatesMatchPauliExponentials) {
  // One exp(theta kappa) on a 3-orbital register, against the dense
  // exponential of the Jordan-Wigner generator.
  const TupsAnsatz a(3, 1, 2);
  std::vector<double> x(a.n_params(), 0.0);
  x[1] = 0.83; // theta2 of tile (0, 1)
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n01;
  std::vector<cplx> amps(64);
  for (auto &v : amps)
    v = n01(rng);
  auto ref = StateVector::from_amplitudes(amps);
  ref.normalize();
  const auto got = apply_ansatz(a, x, ref);
  const auto g = singlet_generators(3, 1, 0);
  // exp(theta kappa) = exp(-i theta (i kappa)) with i kappa hermitian.
  const Eigen::MatrixXcd u = testing::expm_dense(
      cplx(0.0, 1.0) * testing::kron_matrix(g.kappa2), 0.83);
  const Eigen::VectorXcd want = u * testing::as_vector(ref);
  EXPECT_LT((testing::as_vector(got) - want).norm(), 1e-12);
}

TEST(TupsEnergy, SectorStateMatchesFullSpace) {
  const auto sys = hubbard(4, 3.0);
  const TupsAnsatz a(4, 2);
  const TupsEnergy f(a, sys.h_e);
  EXPECT_EQ(f.sector_dim(), 36u);
  const auto x = random_params(a.n_params(), 5, 1.5);
  const auto full = apply_ansatz(a, x);
  const auto sec = f.state(x);
  EXPECT_NEAR(fidelity(full, sec), 1.0, 1e-12);
  EXPECT_NEAR(f.energy(x), expectation(full, sys.h_e).real(), 1e-12);
}

TEST(TupsEnergy, GradientMatchesFiniteDifferences) {
  const auto sys = hubbard(4, 4.0);
  const TupsAnsatz a(4, 2);
  const TupsEnergy f(a, sys.h_e);
  auto x = random_params(a.n_params(), 9, 1.0);
  std::vector<double> g(x.size());
  const double e = f.energy_and_gradient(x, g);
  EXPECT_NEAR(e, f.energy(x), 1e-13);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double h = 1e-5, keep = x[k];
    x[k] = keep + h;
    const double ep = f.energy(x);
    x[k] = keep - h;
    const double em = f.energy(x);
    x[k] = keep;
    EXPECT_NEAR(g[k], (ep - em) / (2 * h), 1e-7) << "parameter " << k;
  }
  std::vector<double> g2;
  EXPECT_NEAR(energy_and_gradient(a, x, sys.h_e, g2), e, 1e-13);
  EXPECT_EQ(g2, g);
}

TEST(TupsEnergy, RejectsUnsuitableOperators) {
  const TupsAnsatz a(2, 1);
  PauliSum complex_h(4);
  complex_h.add_term(PauliString::from_label("XYII", 1.0));
  EXPECT_THROW(TupsEnergy(a, complex_h), InvalidStateError);
  PauliSum breaks_n(4);
  breaks_n.add_term(PauliString::from_label("XIII", 1.0));
  EXPECT_THROW(TupsEnergy(a, breaks_n), InvalidStateError);
  EXPECT_THROW(TupsEnergy(a, PauliSum(6)), StructureError);
}

TEST(Lbfgs, TwoSiteReachesExactGround) {
  const auto sys = hubbard(2, 4.0);
  const TupsAnsatz a(2, 1);
  const TupsEnergy f(a, sys.h_e);
  const auto r = minimize_lbfgs(f, random_params(a.n_params(), 1));
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.rms_gradient, 1e-5);
  EXPECT_NEAR(r.energy, 2.0 - 2.0 * std::sqrt(2.0), 1e-9);
}

TEST(Bhpt, Temperatures) {
  BHPTConfig c;
  c.n_replicas = 3;
  c.t_min = 1e-4;
  c.t_max = 1e-2;
  const auto t = c.temperatures();
  ASSERT_EQ(t.size(), 3u);
  EXPECT_NEAR(t[0], 1e-4, 1e-18);
  EXPECT_NEAR(t[1], 1e-3, 1e-16);
  EXPECT_NEAR(t[2], 1e-2, 1e-15);
  c.n_replicas = 1;
  EXPECT_EQ(c.temperatures(), std::vector<double>{1e-4});
}

TEST(Bhpt, DeterministicAcrossThreadCounts) {
  const auto sys = hubbard(4, 2.0);
  const TupsAnsatz a(4, 1);
  BHPTConfig c;
  c.n_replicas = 3;
  c.n_steps = 4;
  c.seed = 42;
  c.n_threads = 1;
  const auto r1 = optimize(a, sys, c);
  c.n_threads = 3;
  const auto r3 = optimize(a, sys, c);
  EXPECT_EQ(r1.params, r3.params);
  EXPECT_EQ(r1.energy, r3.energy);
  EXPECT_EQ(r1.swaps_attempted, r3.swaps_attempted);
  EXPECT_EQ(r1.local_minimizations, 3u * 5u);
  ASSERT_TRUE(r1.exact_energy && r1.fidelity);
  EXPECT_GE(r1.energy, *r1.exact_energy - 1e-10);
  c.seed = 43;
  EXPECT_NE(optimize(a, sys, c).params, r1.params);
}

TEST(Bhpt, FourSiteCloseToExact) {
  const auto sys = hubbard(4, 4.0);
  const TupsAnsatz a(4, 2);
  BHPTConfig c;
  c.n_replicas = 2;
  c.n_steps = 5;
  c.n_threads = 1;
  const auto r = optimize(a, sys, c);
  EXPECT_LT(r.energy - *r.exact_energy, 1e-3);
  EXPECT_GT(*r.fidelity, 0.99);
}

TEST(Checkpoint, RoundTrip) {
  TupsCheckpoint c{6, 2, 6, -3.0925, 17, random_params(45, 2)};
  std::stringstream buf;
  write_checkpoint(buf, c);
  const auto r = read_checkpoint(buf);
  EXPECT_EQ(r.n_orbitals, 6u);
  EXPECT_EQ(r.n_layers, 2u);
  EXPECT_EQ(r.n_electrons, 6u);
  EXPECT_EQ(r.seed, 17u);
  EXPECT_EQ(r.energy, c.energy);
  EXPECT_EQ(r.params, c.params);
}

TEST(Checkpoint, MalformedInput) {
  auto parse = [](const std::string &t) {
    std::istringstream is(t);
    return read_checkpoint(is, "chk");
  };
  EXPECT_THROW(parse("n_orbitals 2\nn_layers 1\nparams 2\n0.1\n"), ParseError);
  EXPECT_THROW(parse("n_orbitals 2\nn_layers 1\nparams 4\n0.1 0.2 x 0.4\n"),
               ParseError);
  EXPECT_THROW(parse("bogus 1\n"), ParseError);
  EXPECT_THROW(read_checkpoint_file("/nonexistent/tups.chk"), ParseError);
}

} // namespace
} // namespace exasp
