/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace exasp {

namespace {

const cplx kI{0.0, 1.0};

// Product of single-qubit Paulis: a*b = phase * result.
std::pair<cplx, Pauli> multiply_single(Pauli a, Pauli b) {
  if (a == Pauli::I)
    return {1.0, b};
  if (b == Pauli::I)
    return {1.0, a};
  if (a == b)
    return {1.0, Pauli::I};
  auto result = static_cast<Pauli>(static_cast<std::uint8_t>(a) ^
                                   static_cast<std::uint8_t>(b));
  // Cyclic X -> Y -> Z gives +i.
  const bool cyclic = (a == Pauli::X && b == Pauli::Y) ||
                      (a == Pauli::Y && b == Pauli::Z) ||
                      (a == Pauli::Z && b == Pauli::X);
  return {cyclic ? kI : -kI, result};
}

} // namespace

char to_char(Pauli p) {
  switch (p) {
  case Pauli::I:
    return 'I';
  case Pauli::X:
    return 'X';
  case Pauli::Y:
    return 'Y';
  case Pauli::Z:
    return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
  case 'I':
  case 'i':
    return Pauli::I;
  case 'X':
  case 'x':
    return Pauli::X;
  case 'Y':
  case 'y':
    return Pauli::Y;
  case 'Z':
  case 'z':
    return Pauli::Z;
  default:
    throw StructureError(std::string("invalid Pauli label '") + c + "'");
  }
}

PauliString::PauliString(std::size_t n_qubits, cplx coeff)
    : ops_(n_qubits, Pauli::I), coeff_(coeff) {}

PauliString::PauliString(std::vector<Pauli> ops, cplx coeff)
    : ops_(std::move(ops)), coeff_(coeff) {}

PauliString PauliString::from_label(std::string_view label, cplx coeff) {
  std::vector<Pauli> ops;
  ops.reserve(label.size());
  for (char c : label)
    ops.push_back(pauli_from_char(c));
  return {std::move(ops), coeff};
}

PauliString PauliString::single(std::size_t n_qubits, std::size_t qubit,
                                Pauli p, cplx coeff) {
  if (qubit >= n_qubits)
    throw StructureError("qubit index out of range");
  PauliString s(n_qubits, coeff);
  s.ops_[qubit] = p;
  return s;
}

bool PauliString::is_identity() const {
  return std::all_of(ops_.begin(), ops_.end(),
                     [](Pauli p) { return p == Pauli::I; });
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < ops_.size(); ++q)
    if (ops_[q] == Pauli::X || ops_[q] == Pauli::Y)
      m |= std::uint64_t{1} << q;
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < ops_.size(); ++q)
    if (ops_[q] == Pauli::Z || ops_[q] == Pauli::Y)
      m |= std::uint64_t{1} << q;
  return m;
}

std::size_t PauliString::y_count() const {
  return static_cast<std::size_t>(std::count(ops_.begin(), ops_.end(), Pauli::Y));
}

std::size_t PauliString::weight() const {
  return ops_.size() -
         static_cast<std::size_t>(std::count(ops_.begin(), ops_.end(), Pauli::I));
}

std::string PauliString::label() const {
  std::string s;
  s.reserve(ops_.size());
  for (Pauli p : ops_)
    s.push_back(to_char(p));
  return s;
}

PauliString multiply(const PauliString &a, const PauliString &b) {
  if (a.size() != b.size())
    throw StructureError("Pauli string size mismatch: " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  std::vector<Pauli> ops(a.size());
  cplx phase = a.coeff() * b.coeff();
  for (std::size_t q = 0; q < a.size(); ++q) {
    auto [ph, p] = multiply_single(a.op(q), b.op(q));
    phase *= ph;
    ops[q] = p;
  }
  return {std::move(ops), phase};
}

PauliString operator*(const PauliString &a, const PauliString &b) {
  return multiply(a, b);
}

bool commutes(const PauliString &a, const PauliString &b) {
  if (a.size() != b.size())
    throw StructureError("Pauli string size mismatch");
  std::size_t anti = 0;
  for (std::size_t q = 0; q < a.size(); ++q) {
    const Pauli pa = a.op(q), pb = b.op(q);
    if (pa != Pauli::I && pb != Pauli::I && pa != pb)
      ++anti;
  }
  return anti % 2 == 0;
}

// ---------------------------------------------------------------------------

PauliSum::PauliSum(const PauliString &s) : n_qubits_(s.size()) { add_term(s); }

PauliSum::PauliSum(std::size_t n_qubits, const std::vector<PauliString> &terms)
    : n_qubits_(n_qubits) {
  for (const auto &t : terms)
    add_term(t);
}

PauliSum PauliSum::identity(std::size_t n_qubits, cplx coeff) {
  return PauliSum(PauliString(n_qubits, coeff));
}

std::vector<PauliString> PauliSum::strings() const {
  std::vector<PauliString> out;
  out.reserve(terms_.size());
  for (const auto &[ops, c] : terms_)
    out.emplace_back(ops, c);
  return out;
}

cplx PauliSum::coeff(const std::vector<Pauli> &ops) const {
  auto it = terms_.find(ops);
  return it == terms_.end() ? cplx{0.0, 0.0} : it->second;
}

cplx PauliSum::coeff(std::string_view label) const {
  return coeff(PauliString::from_label(label).ops());
}

void PauliSum::add_term(const PauliString &s) {
  if (s.size() != n_qubits_)
    throw StructureError("term size " + std::to_string(s.size()) +
                         " does not match register size " +
                         std::to_string(n_qubits_));
  auto [it, inserted] = terms_.try_emplace(s.ops(), s.coeff());
  if (!inserted)
    it->second += s.coeff();
  if (std::abs(it->second) < kPruneTolerance)
    terms_.erase(it);
}

PauliSum &PauliSum::operator+=(const PauliSum &o) {
  require_same_size(o);
  for (const auto &[ops, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(ops, c);
    if (!inserted)
      it->second += c;
  }
  prune();
  return *this;
}

PauliSum &PauliSum::operator-=(const PauliSum &o) {
  require_same_size(o);
  for (const auto &[ops, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(ops, -c);
    if (!inserted)
      it->second -= c;
  }
  prune();
  return *this;
}

PauliSum &PauliSum::operator*=(cplx scale) {
  for (auto &[ops, c] : terms_)
    c *= scale;
  prune();
  return *this;
}

PauliSum PauliSum::adjoint() const {
  PauliSum out(n_qubits_);
  for (const auto &[ops, c] : terms_)
    out.terms_.emplace(ops, std::conj(c));
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const auto &kv) {
    return std::abs(kv.second.imag()) <= tol;
  });
}

bool PauliSum::is_anti_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const auto &kv) {
    return std::abs(kv.second.real()) <= tol;
  });
}

PauliSum PauliSum::canonical() const {
  PauliSum out = *this;
  out.prune();
  return out;
}

double PauliSum::one_norm() const {
  double n = 0.0;
  for (const auto &[ops, c] : terms_)
    n += std::abs(c);
  return n;
}

PauliSum PauliSum::extended(std::size_t n_qubits) const {
  if (n_qubits < n_qubits_)
    throw StructureError("cannot shrink a register");
  PauliSum out(n_qubits);
  for (const auto &[ops, c] : terms_) {
    auto big = ops;
    big.resize(n_qubits, Pauli::I);
    out.terms_.emplace(std::move(big), c);
  }
  return out;
}

PauliSum PauliSum::tensor_top(Pauli top) const {
  PauliSum out(n_qubits_ + 1);
  for (const auto &[ops, c] : terms_) {
    auto big = ops;
    big.push_back(top);
    out.terms_.emplace(std::move(big), c);
  }
  return out;
}

std::string PauliSum::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto &[ops, c] : terms_) {
    if (!first)
      os << " + ";
    first = false;
    os << "(" << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag())
       << "i)";
    for (Pauli p : ops)
      os << to_char(p);
  }
  if (first)
    os << "0";
  return os.str();
}

void PauliSum::prune() {
  std::erase_if(terms_, [](const auto &kv) {
    return std::abs(kv.second) < kPruneTolerance;
  });
}

void PauliSum::require_same_size(const PauliSum &o) const {
  if (o.n_qubits_ != n_qubits_)
    throw StructureError("Pauli sum size mismatch: " +
                         std::to_string(n_qubits_) + " vs " +
                         std::to_string(o.n_qubits_));
}

PauliSum operator+(PauliSum a, const PauliSum &b) { return a += b; }
PauliSum operator-(PauliSum a, const PauliSum &b) { return a -= b; }
PauliSum operator*(PauliSum a, cplx scale) { return a *= scale; }
PauliSum operator*(cplx scale, PauliSum a) { return a *= scale; }

PauliSum operator*(const PauliSum &a, const PauliSum &b) {
  if (a.n_qubits() != b.n_qubits())
    throw StructureError("Pauli sum size mismatch");
  PauliSum out(a.n_qubits());
  for (const auto &[oa, ca] : a.terms())
    for (const auto &[ob, cb] : b.terms())
      out.add_term(multiply(PauliString(oa, ca), PauliString(ob, cb)));
  return out.canonical();
}

PauliSum add(const PauliSum &a, const PauliSum &b) { return a + b; }

PauliSum commutator(const PauliSum &a, const PauliSum &b) {
  if (a.n_qubits() != b.n_qubits())
    throw StructureError("Pauli sum size mismatch");
  // Commuting string pairs cancel exactly; anticommuting ones contribute 2ab.
  PauliSum out(a.n_qubits());
  for (const auto &[oa, ca] : a.terms()) {
    const PauliString sa(oa, ca);
    for (const auto &[ob, cb] : b.terms()) {
      const PauliString sb(ob, cb);
      if (commutes(sa, sb))
        continue;
      auto p = multiply(sa, sb);
      p.set_coeff(2.0 * p.coeff());
      out.add_term(p);
    }
  }
  return out.canonical();
}

PauliSum anticommutator(const PauliSum &a, const PauliSum &b) {
  return a * b + b * a;
}

// ---------------------------------------------------------------------------

FermionOp FermionOp::number(std::size_t p, cplx coeff) {
  return {{{p, true}, {p, false}}, coeff};
}

FermionOp FermionOp::hop(std::size_t p, std::size_t q, cplx coeff) {
  return {{{p, true}, {q, false}}, coeff};
}

FermionOp FermionOp::adjoint() const {
  FermionOp out;
  out.coeff = std::conj(coeff);
  out.factors.reserve(factors.size());
  for (auto it = factors.rbegin(); it != factors.rend(); ++it)
    out.factors.push_back({it->mode, !it->dagger});
  return out;
}

PauliSum jordan_wigner(const FermionOp &op, std::size_t n_modes) {
  PauliSum result = PauliSum::identity(n_modes, op.coeff);
  for (const auto &f : op.factors) {
    if (f.mode >= n_modes)
      throw StructureError("fermion mode " + std::to_string(f.mode) +
                           " out of range for " + std::to_string(n_modes) +
                           " modes");
    PauliString xs(n_modes, 0.5);
    for (std::size_t q = 0; q < f.mode; ++q)
      xs.set_op(q, Pauli::Z);
    PauliString ys = xs;
    xs.set_op(f.mode, Pauli::X);
    ys.set_op(f.mode, Pauli::Y);
    ys.set_coeff(f.dagger ? cplx{0.0, -0.5} : cplx{0.0, 0.5});
    PauliSum ladder(n_modes, {xs, ys});
    result = result * ladder;
  }
  return result;
}

PauliSum jordan_wigner(const std::vector<FermionOp> &ops, std::size_t n_modes) {
  PauliSum out(n_modes);
  for (const auto &op : ops)
    out += jordan_wigner(op, n_modes);
  return out;
}

} // namespace exasp
