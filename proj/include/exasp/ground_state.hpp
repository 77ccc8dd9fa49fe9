/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "exasp/models.hpp"
#include "exasp/pathway.hpp"
#include "exasp/statevector.hpp"

namespace exasp {

/// Singlet generators for orbitals p and q on 2 * n_orbitals interleaved
/// spin-orbital qubits: kappa1 = E_pq - E_qp and kappa2 = E_pq^2 - E_qp^2.
struct GeneratorPair {
  PauliSum kappa1;
  PauliSum kappa2;
};
GeneratorPair singlet_generators(std::size_t n_orbitals, std::size_t p,
                                 std::size_t q);

/// Perfect-pairing tiled unitary product state on a chain of spatial
/// orbitals.
///
/// Tiles couple neighbouring orbitals (k, k+1) through the generators of
/// singlet_generators(n, k + 1, k). A layer applies the tiles
/// with even k first, then those with odd k. Each U-layer tile carries
/// (theta1, theta2, theta3) for exp(theta1 k1) exp(theta2 k2) exp(theta3 k1);
/// the ceil(N/2) orbital-optimization layers that follow carry one angle per
/// tile for exp(theta k1). Parameters are stored in application order of
/// the tiles, U layers first.
class TupsAnsatz {
public:
  struct Gate {
    std::size_t lower = 0; // tile couples orbitals lower and lower + 1
    int generator = 1;     // 1 or 2
    std::size_t param = 0;
  };

  /// n_electrons = 0 selects half filling.
  TupsAnsatz(std::size_t n_orbitals, std::size_t n_layers,
             std::size_t n_electrons = 0);

  static std::size_t parameter_count(std::size_t n_orbitals,
                                     std::size_t n_layers);

  std::size_t n_orbitals() const { return n_orbitals_; }
  std::size_t n_layers() const { return n_layers_; }
  std::size_t n_electrons() const { return n_electrons_; }
  std::size_t n_qubits() const { return 2 * n_orbitals_; }
  std::size_t n_params() const { return n_params_; }
  std::size_t n_u_params() const { return 3 * n_layers_ * (n_orbitals_ - 1); }

  /// Exponentials in the order they act on the reference.
  const std::vector<Gate> &gates() const { return gates_; }

  /// Doubly occupied orbitals 0, 2, 4, ... for n_electrons / 2 pairs.
  StateVector reference() const;
  std::uint64_t reference_bits() const;

private:
  std::size_t n_orbitals_;
  std::size_t n_layers_;
  std::size_t n_electrons_;
  std::size_t n_params_ = 0;
  std::vector<Gate> gates_;
};

/// |Phi(theta)> from an arbitrary starting state on the ansatz register.
StateVector apply_ansatz(const TupsAnsatz &a, std::span<const double> params,
                         const StateVector &reference);
StateVector apply_ansatz(const TupsAnsatz &a, std::span<const double> params);

namespace detail {
// For one tile and one local (n_alpha, n_beta) sector: the sector indices of
// its local configurations, one run of `width` per setting of the outer bits.
struct TileSectorBlocks {
  std::size_t width = 0;
  std::vector<std::uint32_t> index;
};
} // namespace detail

/// Energy and adjoint-mode gradient of <Phi(theta)|H|Phi(theta)>. H must be a
/// real symmetric operator in the computational basis that conserves the
/// electron number and S_z. Work happens inside the (n_electrons, S_z = 0)
/// sector. Thread-safe after construction.
class TupsEnergy {
public:
  TupsEnergy(const TupsAnsatz &a, const PauliSum &h);

  const TupsAnsatz &ansatz() const { return ansatz_; }
  std::size_t sector_dim() const { return basis_.size(); }
  double energy(std::span<const double> params) const;
  /// Returns the energy and writes dE/dtheta into `gradient`.
  double energy_and_gradient(std::span<const double> params,
                             std::span<double> gradient) const;
  /// The ansatz state on the full register.
  StateVector state(std::span<const double> params) const;

private:
  using TileBlocks = std::array<detail::TileSectorBlocks, 9>;

  std::vector<double> forward(std::span<const double> params) const;
  void apply_h(const std::vector<double> &in, std::vector<double> &out) const;

  TupsAnsatz ansatz_;
  std::vector<std::uint64_t> basis_;
  std::vector<TileBlocks> blocks_; // per tile lower orbital
  std::vector<std::size_t> row_start_;
  std::vector<std::uint32_t> col_;
  std::vector<double> val_;
  std::size_t reference_index_ = 0;
};

/// Convenience wrapper: builds a TupsEnergy for a single evaluation.
double energy_and_gradient(const TupsAnsatz &a, std::span<const double> params,
                           const PauliSum &h, std::vector<double> &gradient);

struct LocalMinimum {
  std::vector<double> params;
  double energy = 0.0;
  double rms_gradient = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// L-BFGS from `start`; converged when the RMS gradient is below `rms_tol`.
LocalMinimum minimize_lbfgs(const TupsEnergy &f, std::vector<double> start,
                            std::size_t max_iterations = 2000,
                            double rms_tol = 1e-5);

struct BHPTConfig {
  std::size_t n_replicas = 8;
  /// Replica temperatures spread geometrically over [t_min, t_max], in
  /// energy units of the Hamiltonian.
  double t_min = 1e-4;
  double t_max = 1e-2;
  std::size_t n_steps = 250;
  /// Uniform perturbation in [-kick, kick] per parameter.
  double kick = 0.3;
  /// Per-step probability of an exchange attempt for each adjacent pair.
  double swap_probability = 0.1;
  std::size_t max_iterations = 2000;
  double rms_tolerance = 1e-5;
  std::uint64_t seed = 0;
  /// 0 selects the hardware concurrency.
  std::size_t n_threads = 0;

  std::vector<double> temperatures() const;
};

struct BHPTResult {
  std::vector<double> params;
  double energy = 0.0;
  double rms_gradient = 0.0;
  std::size_t local_minimizations = 0;
  std::size_t non_converged = 0;
  std::size_t swaps_attempted = 0;
  std::size_t swaps_accepted = 0;
  /// Set when an exact ground state was available.
  std::optional<double> exact_energy;
  std::optional<double> fidelity;
};

/// Basin-hopping parallel tempering. The best local minimum over all
/// replicas and steps is returned. Results depend only on the config, not
/// on the thread count.
BHPTResult optimize(const TupsAnsatz &a, const PauliSum &h,
                    const BHPTConfig &cfg,
                    const std::optional<StateVector> &exact_ground = {});

/// Electronic system variant: uses the sector ground state as reference
/// when it is small enough to diagonalize.
BHPTResult optimize(const TupsAnsatz &a, const ElectronicSystem &sys,
                    const BHPTConfig &cfg);

struct TupsCheckpoint {
  std::size_t n_orbitals = 0;
  std::size_t n_layers = 0;
  std::size_t n_electrons = 0;
  double energy = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> params;
};

void write_checkpoint(std::ostream &os, const TupsCheckpoint &c);
TupsCheckpoint read_checkpoint(std::istream &is,
                               const std::string &name = "<stream>");
TupsCheckpoint read_checkpoint_file(const std::filesystem::path &path);

} // namespace exasp
