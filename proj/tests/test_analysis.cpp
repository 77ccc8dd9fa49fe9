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

#include "exasp/analysis.hpp"
#include "exasp/propagator.hpp"

namespace exasp {
namespace {

CoupledSystem two_level() {
  return couple(build_two_level({1.0, 0.0, 1.0}), {0.0, 0.0, 1.0});
}

TEST(PostSelection, RenormalizesVacuum) {
  const double a = std::sqrt(0.3), b = std::sqrt(0.7);
  // 0.3 |e;0> + 0.7 |g;1>
  const auto s = StateVector::from_amplitudes({0.0, a, b, 0.0});
  const auto [post, p0] = postselect_vacuum(s, 1);
  EXPECT_NEAR(p0, 0.3, 1e-15);
  EXPECT_NEAR(std::abs(post[1]), 1.0, 1e-15);
  EXPECT_THROW(postselect_vacuum(StateVector::basis(2, 2), 1), ProjectionError);
}

TEST(FidelityReport, MixedPhotonState) {
  const auto cs = two_level();
  const double a = std::sqrt(0.3), b = std::sqrt(0.7);
  const auto s = StateVector::from_amplitudes({0.0, a, b, 0.0});
  const auto r = fidelity_report(s, cs, StateVector::basis(1, 1));
  EXPECT_NEAR(r.fid_raw, 0.3, 1e-14);
  EXPECT_NEAR(r.fid_postselected, 1.0, 1e-14);
  EXPECT_NEAR(r.p0, 0.3, 1e-14);
  EXPECT_NEAR(r.eps_final, 0.7, 1e-14);
  EXPECT_NEAR(r.eps_final_post, 0.0, 1e-14);
  const auto by_index = fidelity_report(s, cs, 1);
  EXPECT_NEAR(by_index.fid_raw, r.fid_raw, 1e-14);

  // No vacuum weight at all.
  const auto none = fidelity_report(StateVector::basis(2, 2), cs, 1);
  EXPECT_EQ(none.p0, 0.0);
  EXPECT_EQ(none.fid_postselected, 0.0);
  EXPECT_EQ(none.eps_final, 1.0);
  EXPECT_EQ(none.eps_final_post, 1.0);
}

TEST(FidelityReport, PostSelectionNeverLowersFidelity) {
  const auto cs = two_level();
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> amps(4);
    for (auto &x : amps)
      x = {g(rng), g(rng)};
    auto s = StateVector::from_amplitudes(amps);
    s.normalize();
    const auto r = fidelity_report(s, cs, 1);
    EXPECT_GE(r.fid_postselected + 1e-14, r.fid_raw);
    EXPECT_NEAR(r.fid_raw, r.fid_postselected * r.p0, 1e-12);
  }
}

TEST(InitialError, OneMinusFidelity) {
  const auto a = StateVector::basis(1, 0);
  const auto b = StateVector::from_amplitudes({std::sqrt(0.9), std::sqrt(0.1)});
  EXPECT_NEAR(initial_error(a, b), 0.1, 1e-15);
  EXPECT_EQ(initial_error(a, a), 0.0);
}

TEST(PowerLaw, RecoversExactData) {
  std::vector<double> x, y;
  for (double v : {1e-4, 3e-4, 1e-3, 5e-3, 2e-2}) {
    x.push_back(v);
    y.push_back(1.448 * std::pow(v, 0.943));
  }
  const auto f = fit_power_law(x, y);
  EXPECT_NEAR(f.exponent, 0.943, 1e-10);
  EXPECT_NEAR(f.prefactor, 1.448, 1e-9);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(PowerLaw, RejectsBadInput) {
  const std::vector<double> one{1.0}, two{1.0, 2.0}, neg{1.0, -1.0};
  EXPECT_THROW(fit_power_law(one, one), std::invalid_argument);
  EXPECT_THROW(fit_power_law(two, neg), std::invalid_argument);
  EXPECT_THROW(fit_power_law(two, one), std::invalid_argument);
}

TEST(PathwaySpectrum, FollowsBrightBranch) {
  const auto cs = two_level();
  const PathwaySchedule sched(4.0, 0.5, 1.0, 100);
  const auto pts = pathway_spectrum(cs, sched, 41, 4);
  ASSERT_EQ(pts.size(), 41u);
  EXPECT_EQ(pts.front().s, 0.0);
  EXPECT_EQ(pts.back().s, 1.0);
  // Starts on |g;1> and ends on |e;0>.
  EXPECT_NEAR(pts.front().diabatic_weights[0 * 2 + 1], 1.0, 1e-10);
  EXPECT_NEAR(pts.front().followed_energy, -1.0, 1e-12);
  EXPECT_NEAR(pts.back().diabatic_weights[1 * 2 + 0], 1.0, 1e-10);
  EXPECT_NEAR(pts.back().followed_energy, 1.0, 1e-10);
  for (const auto &p : pts) {
    EXPECT_TRUE(std::is_sorted(p.energies.begin(), p.energies.end()));
    EXPECT_NEAR(p.energies[p.followed_index], p.followed_energy, 1e-12);
  }
  EXPECT_THROW(pathway_spectrum(cs, sched, 1, 4), std::invalid_argument);
}

} // namespace
} // namespace exasp
