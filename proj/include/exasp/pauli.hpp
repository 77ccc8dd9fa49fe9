/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace exasp {

using cplx = std::complex<double>;

/// Thrown when operands live on registers of different sizes or reference
/// qubits/modes outside the register.
class StructureError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Single-qubit Pauli label. The numeric value is the (x, z) bit pair
/// x*2 + z, which also fixes the canonical term order I < Z < X < Y.
enum class Pauli : std::uint8_t { I = 0, Z = 1, X = 2, Y = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Tensor product of single-qubit Paulis with a complex prefactor.
/// ops()[q] acts on qubit q; all phases live in coeff().
class PauliString {
public:
  PauliString() = default;
  explicit PauliString(std::size_t n_qubits, cplx coeff = 1.0);
  PauliString(std::vector<Pauli> ops, cplx coeff);

  /// Parses "XIZ" style labels; character q is the op on qubit q.
  static PauliString from_label(std::string_view label, cplx coeff = 1.0);
  /// Single non-identity factor on `qubit`.
  static PauliString single(std::size_t n_qubits, std::size_t qubit, Pauli p,
                            cplx coeff = 1.0);

  std::size_t size() const { return ops_.size(); }
  const std::vector<Pauli> &ops() const { return ops_; }
  Pauli op(std::size_t q) const { return ops_.at(q); }
  void set_op(std::size_t q, Pauli p) { ops_.at(q) = p; }
  cplx coeff() const { return coeff_; }
  void set_coeff(cplx c) { coeff_ = c; }

  bool is_identity() const;
  /// Bits set on qubits carrying X or Y.
  std::uint64_t x_mask() const;
  /// Bits set on qubits carrying Z or Y.
  std::uint64_t z_mask() const;
  std::size_t y_count() const;
  std::size_t weight() const;

  PauliString adjoint() const { return {ops_, std::conj(coeff_)}; }
  std::string label() const;

private:
  std::vector<Pauli> ops_;
  cplx coeff_{1.0, 0.0};
};

/// Group product a*b, phase folded into the coefficient.
PauliString multiply(const PauliString &a, const PauliString &b);
PauliString operator*(const PauliString &a, const PauliString &b);

/// Whether the op-sequences of a and b commute (coefficients ignored).
bool commutes(const PauliString &a, const PauliString &b);

/// Canonical weighted sum of Pauli strings on a fixed register.
///
/// Terms are keyed by op-sequence and kept in lexicographic order under
/// I < Z < X < Y. Coefficients with modulus below kPruneTolerance are
/// dropped after every mutating operation.
class PauliSum {
public:
  static constexpr double kPruneTolerance = 1e-14;
  using TermMap = std::map<std::vector<Pauli>, cplx>;

  PauliSum() = default;
  explicit PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {}
  explicit PauliSum(const PauliString &s);
  PauliSum(std::size_t n_qubits, const std::vector<PauliString> &terms);

  static PauliSum identity(std::size_t n_qubits, cplx coeff = 1.0);

  std::size_t n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const TermMap &terms() const { return terms_; }
  /// Terms as PauliStrings in canonical order.
  std::vector<PauliString> strings() const;
  /// Coefficient of the given op-sequence (zero if absent).
  cplx coeff(const std::vector<Pauli> &ops) const;
  cplx coeff(std::string_view label) const;

  void add_term(const PauliString &s);
  PauliSum &operator+=(const PauliSum &o);
  PauliSum &operator-=(const PauliSum &o);
  PauliSum &operator*=(cplx scale);

  /// Hermitian conjugate.
  PauliSum adjoint() const;
  /// True iff every coefficient is real within `tol` (Pauli strings are
  /// self-adjoint, so this is hermiticity of the sum).
  bool is_hermitian(double tol = 1e-12) const;
  /// True iff every coefficient is imaginary within `tol`.
  bool is_anti_hermitian(double tol = 1e-12) const;

  /// Re-prunes near-zero terms. Idempotent.
  PauliSum canonical() const;

  /// Largest absolute coefficient sum; an upper bound on the operator norm.
  double one_norm() const;

  /// Embed into a larger register; qubit q maps to q (extra qubits are I).
  PauliSum extended(std::size_t n_qubits) const;
  /// Tensor this (on the low qubits) with a single-qubit Pauli on a new top
  /// qubit.
  PauliSum tensor_top(Pauli top) const;

  std::string to_string() const;

private:
  void prune();
  void require_same_size(const PauliSum &o) const;

  std::size_t n_qubits_ = 0;
  TermMap terms_;
};

PauliSum operator+(PauliSum a, const PauliSum &b);
PauliSum operator-(PauliSum a, const PauliSum &b);
PauliSum operator*(PauliSum a, cplx scale);
PauliSum operator*(cplx scale, PauliSum a);
PauliSum operator*(const PauliSum &a, const PauliSum &b);

PauliSum add(const PauliSum &a, const PauliSum &b);
/// ab - ba.
PauliSum commutator(const PauliSum &a, const PauliSum &b);
/// ab + ba.
PauliSum anticommutator(const PauliSum &a, const PauliSum &b);

/// Product of fermionic ladder operators with a coefficient, e.g.
/// coeff * a†_p a_q. Factors are applied right to left, as written.
struct FermionOp {
  struct Factor {
    std::size_t mode;
    bool dagger;
  };
  std::vector<Factor> factors;
  cplx coeff{1.0, 0.0};

  static FermionOp number(std::size_t p, cplx coeff = 1.0);
  static FermionOp hop(std::size_t p, std::size_t q, cplx coeff = 1.0);

  FermionOp adjoint() const;
};

/// Jordan-Wigner image: a_p -> (X_p + iY_p)/2 with Z on every mode < p.
PauliSum jordan_wigner(const FermionOp &op, std::size_t n_modes);
PauliSum jordan_wigner(const std::vector<FermionOp> &ops, std::size_t n_modes);

} // namespace exasp
