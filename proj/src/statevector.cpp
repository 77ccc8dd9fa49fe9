/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/statevector.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace exasp {

namespace {

// i^k for k mod 4.
cplx i_power(std::size_t k) {
  switch (k % 4) {
  case 0:
    return {1.0, 0.0};
  case 1:
    return {0.0, 1.0};
  case 2:
    return {-1.0, 0.0};
  default:
    return {0.0, -1.0};
  }
}

inline double parity_sign(std::uint64_t bits) {
  return (std::popcount(bits) & 1) ? -1.0 : 1.0;
}

void require_size(const StateVector &s, std::size_t n) {
  if (s.n_qubits() != n)
    throw StructureError("register size mismatch: state has " +
                         std::to_string(s.n_qubits()) + " qubits, operator " +
                         std::to_string(n));
}

} // namespace

StateVector::StateVector(std::size_t n_qubits)
    : n_qubits_(n_qubits), amps_(std::size_t{1} << n_qubits) {
  amps_[0] = 1.0;
}

StateVector StateVector::basis(std::size_t n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim())
    throw StructureError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps) {
  if (amps.empty() || !std::has_single_bit(amps.size()))
    throw StructureError("amplitude count must be a power of two");
  StateVector s;
  s.n_qubits_ = static_cast<std::size_t>(std::countr_zero(amps.size()));
  s.amps_ = std::move(amps);
  return s;
}

double StateVector::norm_squared() const {
  double n = 0.0;
  for (const auto &a : amps_)
    n += std::norm(a);
  return n;
}

double StateVector::norm() const { return std::sqrt(norm_squared()); }

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0)
    throw InvalidStateError("cannot normalize the zero vector");
  for (auto &a : amps_)
    a /= n;
}

cplx StateVector::inner(const StateVector &other) const {
  if (other.dim() != dim())
    throw StructureError("register size mismatch in inner product");
  cplx acc = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i)
    acc += std::conj(amps_[i]) * other.amps_[i];
  return acc;
}

StateVector init_product(const StateVector &electronic, int photon_occ) {
  if (photon_occ != 0 && photon_occ != 1)
    throw StructureError("photon occupation must be 0 or 1");
  if (std::abs(electronic.norm() - 1.0) > 1e-10)
    throw InvalidStateError("electronic state is not normalized");
  std::vector<cplx> amps(2 * electronic.dim());
  const std::size_t offset = photon_occ ? electronic.dim() : 0;
  std::copy(electronic.amps().begin(), electronic.amps().end(),
            amps.begin() + static_cast<std::ptrdiff_t>(offset));
  return StateVector::from_amplitudes(std::move(amps));
}

void apply_pauli(StateVector &state, const PauliString &p) {
  require_size(state, p.size());
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const cplx pre = p.coeff() * i_power(p.y_count());
  auto amps = state.amps();
  if (x == 0) {
    for (std::size_t i = 0; i < amps.size(); ++i)
      amps[i] *= pre * parity_sign(i & z);
    return;
  }
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::size_t j = i ^ x;
    if (j < i)
      continue;
    const cplx ai = amps[i], aj = amps[j];
    amps[j] = pre * parity_sign(i & z) * ai;
    amps[i] = pre * parity_sign(j & z) * aj;
  }
}

void apply_pauli_rotation(StateVector &state, const PauliString &p,
                          double theta) {
  require_size(state, p.size());
  if (std::abs(p.coeff().imag()) > 1e-14)
    throw InvalidStateError("rotation generator must have a real coefficient");
  theta *= p.coeff().real();
  const std::uint64_t x = p.x_mask(), z = p.z_mask();
  const cplx ph = i_power(p.y_count());
  const double c = std::cos(theta), s = std::sin(theta);
  const cplx mis{0.0, -s};
  auto amps = state.amps();
  if (x == 0) {
    // Diagonal: exp(-i theta (+-1)).
    const cplx plus{c, -s}, minus{c, s};
    for (std::size_t i = 0; i < amps.size(); ++i)
      amps[i] *= parity_sign(i & z) > 0 ? plus : minus;
    return;
  }
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const std::size_t j = i ^ x;
    if (j < i)
      continue;
    const cplx ai = amps[i], aj = amps[j];
    // P|i> = ph * sign(i) |j>
    amps[j] = c * aj + mis * ph * parity_sign(i & z) * ai;
    amps[i] = c * ai + mis * ph * parity_sign(j & z) * aj;
  }
}

cplx expectation(const StateVector &state, const PauliSum &op) {
  require_size(state, op.n_qubits());
  const auto amps = state.amps();
  cplx total = 0.0;
  for (const auto &[ops, coeff] : op.terms()) {
    const PauliString s(ops, coeff);
    const std::uint64_t x = s.x_mask(), z = s.z_mask();
    cplx acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i)
      acc += std::conj(amps[i ^ x]) * parity_sign(i & z) * amps[i];
    total += coeff * i_power(s.y_count()) * acc;
  }
  return total;
}

double fidelity(const StateVector &a, const StateVector &b) {
  return std::norm(a.inner(b));
}

double outcome_probability(const StateVector &state, std::size_t qubit,
                           int outcome) {
  if (qubit >= state.n_qubits())
    throw StructureError("qubit index out of range");
  if (outcome != 0 && outcome != 1)
    throw StructureError("outcome must be 0 or 1");
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  const auto amps = state.amps();
  double p = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i)
    if (((i & bit) != 0) == (outcome == 1))
      p += std::norm(amps[i]);
  return p;
}

std::pair<StateVector, double> project_qubit(const StateVector &state,
                                             std::size_t qubit, int outcome) {
  const double p = outcome_probability(state, qubit, outcome);
  if (p < 1e-14)
    throw ProjectionError("projection of qubit " + std::to_string(qubit) +
                              " onto |" + std::to_string(outcome) +
                              "> has zero probability",
                          p);
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  StateVector out = state;
  auto amps = out.amps();
  const double scale = 1.0 / std::sqrt(p);
  for (std::size_t i = 0; i < amps.size(); ++i)
    amps[i] = (((i & bit) != 0) == (outcome == 1)) ? amps[i] * scale : 0.0;
  return {std::move(out), p};
}

// ---------------------------------------------------------------------------

CompiledOperator::CompiledOperator(const PauliSum &op)
    : n_qubits_(op.n_qubits()) {
  if (n_qubits_ > 30)
    throw StructureError("register too large for dense statevector");
  std::map<std::uint64_t, std::size_t> index;
  const std::size_t n = dim();
  for (const auto &[ops, coeff] : op.terms()) {
    const PauliString s(ops, coeff);
    const std::uint64_t x = s.x_mask(), z = s.z_mask();
    auto [it, inserted] = index.try_emplace(x, groups_.size());
    if (inserted)
      groups_.push_back({x, std::vector<cplx>(n)});
    auto &diag = groups_[it->second].diag;
    const cplx pre = coeff * i_power(s.y_count());
    for (std::size_t i = 0; i < n; ++i)
      diag[i] += pre * parity_sign(i & z);
    norm_bound_ += std::abs(coeff);
  }
}

CompiledOperator CompiledOperator::linear_combination(
    std::span<const std::pair<double, const CompiledOperator *>> terms) {
  CompiledOperator out;
  if (terms.empty())
    return out;
  out.n_qubits_ = terms.front().second->n_qubits_;
  std::map<std::uint64_t, std::size_t> index;
  for (const auto &[w, op] : terms) {
    if (op->n_qubits_ != out.n_qubits_)
      throw StructureError("register size mismatch in linear combination");
    if (w == 0.0)
      continue;
    out.norm_bound_ += std::abs(w) * op->norm_bound_;
    for (const auto &g : op->groups_) {
      auto [it, inserted] = index.try_emplace(g.flip, out.groups_.size());
      if (inserted)
        out.groups_.push_back({g.flip, std::vector<cplx>(out.dim())});
      auto &d = out.groups_[it->second].diag;
      for (std::size_t i = 0; i < d.size(); ++i)
        d[i] += w * g.diag[i];
    }
  }
  return out;
}

void CompiledOperator::apply(std::span<const cplx> in,
                             std::span<cplx> out) const {
  std::fill(out.begin(), out.end(), cplx{0.0, 0.0});
  for (const auto &g : groups_) {
    const cplx *d = g.diag.data();
    if (g.flip == 0) {
      for (std::size_t i = 0; i < in.size(); ++i)
        out[i] += d[i] * in[i];
    } else {
      for (std::size_t j = 0; j < in.size(); ++j) {
        const std::size_t i = j ^ g.flip;
        out[j] += d[i] * in[i];
      }
    }
  }
}

StateVector CompiledOperator::apply(const StateVector &in) const {
  require_size(in, n_qubits_);
  std::vector<cplx> out(in.dim());
  apply(in.amps(), out);
  return StateVector::from_amplitudes(std::move(out));
}

cplx CompiledOperator::expectation(const StateVector &state) const {
  require_size(state, n_qubits_);
  const auto amps = state.amps();
  cplx total = 0.0;
  for (const auto &g : groups_)
    for (std::size_t i = 0; i < amps.size(); ++i)
      total += std::conj(amps[i ^ g.flip]) * g.diag[i] * amps[i];
  return total;
}

void CompiledOperator::add_identity(double c) {
  if (c == 0.0)
    return;
  auto it = std::find_if(groups_.begin(), groups_.end(),
                         [](const Group &g) { return g.flip == 0; });
  if (it == groups_.end()) {
    groups_.push_back({0, std::vector<cplx>(dim())});
    it = std::prev(groups_.end());
  }
  for (auto &d : it->diag)
    d += c;
  norm_bound_ += std::abs(c);
}

// ---------------------------------------------------------------------------

namespace {

struct LanczosResult {
  bool converged = false;
  double residual = 0.0;
  std::size_t matvecs = 0;
};

// One attempt at exp(-i dt H) v with at most opts.max_dim Lanczos vectors.
// On success `v` holds the result.
LanczosResult lanczos_exp(std::vector<cplx> &v, const CompiledOperator &h,
                          double dt, const KrylovOptions &opts) {
  LanczosResult res;
  const std::size_t n = v.size();
  double beta0 = 0.0;
  for (const auto &a : v)
    beta0 += std::norm(a);
  beta0 = std::sqrt(beta0);
  if (beta0 == 0.0 || dt == 0.0) {
    res.converged = true;
    return res;
  }

  std::vector<std::vector<cplx>> basis;
  basis.reserve(opts.max_dim);
  basis.emplace_back(n);
  for (std::size_t i = 0; i < n; ++i)
    basis[0][i] = v[i] / beta0;

  std::vector<double> alpha, beta;
  std::vector<cplx> w(n);
  Eigen::VectorXcd coeffs;

  auto small_exp = [&](std::size_t m) {
    Eigen::VectorXd d(m), e(m > 1 ? m - 1 : 0);
    for (std::size_t k = 0; k < m; ++k)
      d[static_cast<Eigen::Index>(k)] = alpha[k];
    for (std::size_t k = 0; k + 1 < m; ++k)
      e[static_cast<Eigen::Index>(k)] = beta[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const auto &vecs = es.eigenvectors();
    Eigen::VectorXcd phase(m);
    for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k)
      phase[k] = std::exp(cplx{0.0, -dt * es.eigenvalues()[k]}) * vecs(0, k);
    coeffs = vecs.cast<cplx>() * phase;
  };

  for (std::size_t j = 0; j < opts.max_dim; ++j) {
    h.apply(basis[j], w);
    ++res.matvecs;
    cplx a = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      a += std::conj(basis[j][i]) * w[i];
    alpha.push_back(a.real());
    for (std::size_t i = 0; i < n; ++i)
      w[i] -= alpha[j] * basis[j][i];
    if (j > 0)
      for (std::size_t i = 0; i < n; ++i)
        w[i] -= beta[j - 1] * basis[j - 1][i];
    // One pass of full reorthogonalization keeps the basis usable at the
    // 1e-12 level over long runs.
    for (std::size_t k = 0; k <= j; ++k) {
      cplx ov = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        ov += std::conj(basis[k][i]) * w[i];
      for (std::size_t i = 0; i < n; ++i)
        w[i] -= ov * basis[k][i];
    }
    double b = 0.0;
    for (const auto &x : w)
      b += std::norm(x);
    b = std::sqrt(b);

    const std::size_t m = j + 1;
    small_exp(m);
    const double scale = std::max(1.0, h.norm_bound());
    if (b < 1e-14 * scale) {
      res.converged = true;
      res.residual = 0.0;
    } else {
      res.residual = b * std::abs(coeffs[static_cast<Eigen::Index>(m - 1)]);
      res.converged = res.residual < opts.tolerance;
    }
    if (res.converged) {
      std::fill(v.begin(), v.end(), cplx{0.0, 0.0});
      for (std::size_t k = 0; k < m; ++k) {
        const cplx c = beta0 * coeffs[static_cast<Eigen::Index>(k)];
        for (std::size_t i = 0; i < n; ++i)
          v[i] += c * basis[k][i];
      }
      return res;
    }
    beta.push_back(b);
    if (m < opts.max_dim) {
      basis.emplace_back(n);
      for (std::size_t i = 0; i < n; ++i)
        basis[m][i] = w[i] / b;
    }
  }
  return res;
}

KrylovStats evolve_recursive(std::vector<cplx> &v, const CompiledOperator &h,
                             double dt, const KrylovOptions &opts, int depth) {
  auto backup = v;
  auto r = lanczos_exp(v, h, dt, opts);
  KrylovStats stats{r.matvecs, 1, r.residual};
  if (r.converged)
    return stats;
  if (depth >= opts.max_substep_depth)
  {
    std::ostringstream msg;
    msg << "Krylov exponential did not converge (residual "
        << std::scientific << std::setprecision(3) << r.residual << ")";
    throw KrylovError(msg.str(), r.residual);
  }
  v = std::move(backup);
  auto a = evolve_recursive(v, h, dt / 2, opts, depth + 1);
  auto b = evolve_recursive(v, h, dt / 2, opts, depth + 1);
  return {stats.matvecs + a.matvecs + b.matvecs, a.substeps + b.substeps,
          std::max(a.residual, b.residual)};
}

} // namespace

KrylovStats evolve_exact_step(StateVector &state, const CompiledOperator &h,
                              double dt, const KrylovOptions &opts) {
  require_size(state, h.n_qubits());
  std::vector<cplx> v(state.amps().begin(), state.amps().end());
  auto stats = evolve_recursive(v, h, dt, opts, 0);
  std::copy(v.begin(), v.end(), state.amps().begin());
  return stats;
}

KrylovStats evolve_exact_step(StateVector &state, const PauliSum &h, double dt,
                              const KrylovOptions &opts) {
  if (!h.is_hermitian())
    throw InvalidStateError("time evolution requires a hermitian Hamiltonian");
  return evolve_exact_step(state, CompiledOperator(h), dt, opts);
}

// ---------------------------------------------------------------------------

void write_binary(std::ostream &os, const StateVector &state) {
  const auto n = static_cast<std::int32_t>(state.n_qubits());
  unsigned char buf[8];
  std::memcpy(buf, &n, 4);
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(buf, buf + 4);
  os.write(reinterpret_cast<const char *>(buf), 4);
  for (const auto &a : state.amps()) {
    for (double part : {a.real(), a.imag()}) {
      std::memcpy(buf, &part, 8);
      if constexpr (std::endian::native == std::endian::big)
        std::reverse(buf, buf + 8);
      os.write(reinterpret_cast<const char *>(buf), 8);
    }
  }
}

StateVector read_binary(std::istream &is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char *>(buf), 4))
    throw StructureError("truncated statevector dump");
  if constexpr (std::endian::native == std::endian::big)
    std::reverse(buf, buf + 4);
  std::int32_t n = 0;
  std::memcpy(&n, buf, 4);
  if (n < 0 || n > 30)
    throw StructureError("invalid qubit count in statevector dump");
  std::vector<cplx> amps(std::size_t{1} << n);
  for (auto &a : amps) {
    double parts[2];
    for (double &part : parts) {
      if (!is.read(reinterpret_cast<char *>(buf), 8))
        throw StructureError("truncated statevector dump");
      if constexpr (std::endian::native == std::endian::big)
        std::reverse(buf, buf + 8);
      std::memcpy(&part, buf, 8);
    }
    a = {parts[0], parts[1]};
  }
  return StateVector::from_amplitudes(std::move(amps));
}

} // namespace exasp
