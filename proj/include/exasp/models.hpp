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
#include <string>
#include <vector>

#include "exasp/pauli.hpp"
#include "exasp/statevector.hpp"

namespace exasp {

/// Malformed integrals input. what() carries file and line.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string &file, std::size_t line, const std::string &msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
        line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class SpectrumError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class ModelKind { two_level, hubbard, molecule, custom };

/// Fixed particle number and 2*m_s. Spin-orbitals are interleaved, so mode
/// 2p is alpha and 2p+1 is beta.
struct Sector {
  std::size_t n_electrons = 0;
  int two_ms = 0;
};

struct TwoLevelParams {
  double epsilon = 1.0;
  double g = 0.0;
  double mu = 1.0;
};

struct HubbardParams {
  std::size_t n_sites = 2;
  double t = 1.0;
  double u = 0.0;
  /// 0 means half filling.
  std::size_t n_electrons = 0;
  /// Empty means p - (L-1)/2 for p = 0..L-1 (centered, unit spacing).
  std::vector<double> site_positions;
};

/// Integrals in the spatial molecular-orbital basis. Two-electron integrals
/// are stored in chemists' order, eri(p,q,r,s) = (pq|rs) = <pr|qs>.
struct MolecularIntegrals {
  std::size_t n_orbitals = 0;
  std::size_t n_electrons = 0;
  int ms2 = 0;
  double core_energy = 0.0;
  std::vector<int> orbsym;
  std::vector<double> h;   // n^2, row-major
  std::vector<double> eri; // n^4
  std::array<std::vector<double>, 3> dipole; // n^2 each
  std::array<double, 3> dipole_core{0.0, 0.0, 0.0};

  double one_body(std::size_t p, std::size_t q) const {
    return h[p * n_orbitals + q];
  }
  double two_body(std::size_t p, std::size_t q, std::size_t r,
                  std::size_t s) const {
    const std::size_t n = n_orbitals;
    return eri[((p * n + q) * n + r) * n + s];
  }
  double dipole_element(std::size_t c, std::size_t p, std::size_t q) const {
    return dipole[c][p * n_orbitals + q];
  }
};

/// Electronic Hamiltonian and Cartesian dipole operators on one register.
struct ElectronicSystem {
  ModelKind kind = ModelKind::custom;
  std::size_t n_qubits = 0;
  PauliSum h_e;
  std::array<PauliSum, 3> dipole;
  /// Symmetry sector holding the physical ground state; empty for models
  /// without fermionic structure.
  std::optional<Sector> sector;
};

ElectronicSystem build_two_level(const TwoLevelParams &p);
ElectronicSystem build_hubbard(const HubbardParams &p);
ElectronicSystem build_molecular(const MolecularIntegrals &m);

/// Reads an FCIDUMP-style integrals file and its companion dipole file. See
/// docs/file-formats.md for the grammar.
MolecularIntegrals parse_integrals_file(const std::filesystem::path &integrals,
                                        const std::filesystem::path &dipoles);
MolecularIntegrals parse_integrals(std::istream &integrals,
                                   std::istream &dipoles,
                                   const std::string &name = "<stream>");
void write_integrals(std::ostream &integrals, std::ostream &dipoles,
                     const MolecularIntegrals &m);

/// Total number operator and S_z on an interleaved register.
PauliSum number_operator(std::size_t n_modes);
PauliSum sz_operator(std::size_t n_modes);

/// Basis indices of an n_qubits register whose low `n_modes` bits satisfy
/// the sector; higher bits are unconstrained. No sector means all indices.
std::vector<std::uint64_t> sector_basis(std::size_t n_qubits,
                                        std::size_t n_modes,
                                        const std::optional<Sector> &sector);

struct Spectrum {
  std::vector<double> energies;
  std::vector<StateVector> states;
  std::size_t size() const { return energies.size(); }
};

/// Largest sector dimension handed to the dense eigensolver.
inline constexpr std::size_t kMaxSectorDim = 6000;

/// Eigenpairs of `h` restricted to `basis`, ascending. If max_states is
/// nonzero only that many lowest pairs are returned.
Spectrum diagonalize_in_basis(const CompiledOperator &h,
                              const std::vector<std::uint64_t> &basis,
                              std::size_t max_states = 0);

/// Eigenpairs of the electronic Hamiltonian in a sector, ascending.
Spectrum exact_diagonalize(const ElectronicSystem &sys,
                           const std::optional<Sector> &sector,
                           std::size_t max_states = 0);
Spectrum exact_diagonalize(const ElectronicSystem &sys);

struct BrightState {
  std::size_t index = 0;
  double excitation_energy = 0.0;
  double transition_dipole = 0.0;
};

inline constexpr double kBrightThreshold = 1e-6;

/// Lowest k > 0 with |<0|mu|k>| above threshold. Throws SpectrumError if none.
BrightState find_first_bright_state(const Spectrum &spectrum,
                                    const PauliSum &dipole,
                                    double threshold = kBrightThreshold);

/// e . mu as a single operator (e is not normalized here).
PauliSum project_dipole(const ElectronicSystem &sys,
                        const std::array<double, 3> &e);

} // namespace exasp
