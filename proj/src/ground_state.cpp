/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/ground_state.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>
#include <tuple>

#include "exasp/dense.hpp"

namespace exasp {

GeneratorPair singlet_generators(std::size_t n_orbitals, std::size_t p,
                                 std::size_t q) {
  if (p >= n_orbitals || q >= n_orbitals || p == q)
    throw StructureError("invalid orbital pair for singlet generator");
  const std::size_t n = 2 * n_orbitals;
  auto e = [&](std::size_t a, std::size_t b) {
    return jordan_wigner(std::vector<FermionOp>{FermionOp::hop(2 * a, 2 * b),
                                                FermionOp::hop(2 * a + 1,
                                                               2 * b + 1)},
                         n);
  };
  const PauliSum epq = e(p, q), eqp = e(q, p);
  return {epq - eqp, epq * epq - eqp * eqp};
}

namespace {

using Mat16 = Eigen::Matrix<double, 16, 16>;

// Local 4-qubit picture of a tile: bits 0,1 are the alpha/beta modes of the
// lower orbital, bits 2,3 those of the upper one. Generators conserve the
// alpha and beta counts, so only 36 of the 256 entries can be non-zero.
struct LocalGenerators {
  // exp(theta kappa) = P0 + sum_w cos(w theta) C_w + sin(w theta) S_w over the
  // positive eigenvalues w of i kappa.
  struct Spectral {
    Mat16 p0 = Mat16::Zero();
    std::vector<std::tuple<double, Mat16, Mat16>> terms;
  };

  std::array<Mat16, 2> kappa;
  std::array<Spectral, 2> spectral;
  std::vector<std::pair<int, int>> pattern;

  LocalGenerators() {
    const auto g = singlet_generators(2, 1, 0);
    const PauliSum *ops[2] = {&g.kappa1, &g.kappa2};
    for (int k = 0; k < 2; ++k) {
      const Eigen::MatrixXcd m = dense::matrix(*ops[k]);
      kappa[k] = m.real();
      const Eigen::MatrixXcd herm = cplx(0.0, 1.0) * m;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
      const auto &vals = es.eigenvalues();
      const auto &vecs = es.eigenvectors();
      auto projector = [&](double w) {
        Eigen::Matrix<cplx, 16, 16> p = Eigen::Matrix<cplx, 16, 16>::Zero();
        for (int i = 0; i < 16; ++i)
          if (std::abs(vals[i] - w) < 1e-8)
            p += vecs.col(i) * vecs.col(i).adjoint();
        return p;
      };
      spectral[k].p0 = projector(0.0).real();
      std::vector<double> freqs;
      for (int i = 0; i < 16; ++i)
        if (vals[i] > 1e-8 &&
            std::none_of(freqs.begin(), freqs.end(),
                         [&](double f) { return std::abs(f - vals[i]) < 1e-8; }))
          freqs.push_back(vals[i]);
      for (double w : freqs) {
        const auto plus = projector(w), minus = projector(-w);
        // e^{-i w t} P_w + e^{i w t} P_{-w}
        spectral[k].terms.emplace_back(w, (plus + minus).real(),
                                       (cplx(0.0, -1.0) * (plus - minus)).real());
      }
    }
    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b) {
        const int na_a = (a & 1) + ((a >> 2) & 1), nb_a = ((a >> 1) & 1) + (a >> 3);
        const int na_b = (b & 1) + ((b >> 2) & 1), nb_b = ((b >> 1) & 1) + (b >> 3);
        if (na_a == na_b && nb_a == nb_b)
          pattern.emplace_back(a, b);
      }
  }

  Mat16 exp(int generator, double theta) const {
    const auto &sp = spectral[generator - 1];
    Mat16 out = sp.p0;
    for (const auto &[w, c, s] : sp.terms)
      out += std::cos(w * theta) * c + std::sin(w * theta) * s;
    return out;
  }
};

const LocalGenerators &local() {
  static const LocalGenerators g;
  return g;
}

// psi <- M psi (or M^T psi) on qubits [shift, shift + 4).
void apply_local(const Mat16 &m, std::size_t shift, std::vector<double> &psi,
                 bool transpose) {
  const auto &pat = local().pattern;
  const std::size_t low = std::size_t{1} << shift;
  const std::size_t high = psi.size() >> (shift + 4);
  double v[16], w[16];
  for (std::size_t h = 0; h < high; ++h) {
    for (std::size_t l = 0; l < low; ++l) {
      const std::size_t base = (h << (shift + 4)) | l;
      for (std::size_t a = 0; a < 16; ++a) {
        v[a] = psi[base | (a << shift)];
        w[a] = 0.0;
      }
      if (transpose)
        for (const auto &[a, b] : pat)
          w[b] += m(a, b) * v[a];
      else
        for (const auto &[a, b] : pat)
          w[a] += m(a, b) * v[b];
      for (std::size_t a = 0; a < 16; ++a)
        psi[base | (a << shift)] = w[a];
    }
  }
}

std::vector<double> to_real(const StateVector &s) {
  std::vector<double> out(s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (std::abs(s[i].imag()) > 1e-12)
      throw InvalidStateError("ansatz works on real amplitudes only");
    out[i] = s[i].real();
  }
  return out;
}

StateVector from_real(const std::vector<double> &v) {
  std::vector<cplx> amps(v.begin(), v.end());
  return StateVector::from_amplitudes(std::move(amps));
}

void check_params(const TupsAnsatz &a, std::span<const double> params) {
  if (params.size() != a.n_params())
    throw std::invalid_argument("ansatz expects " +
                                std::to_string(a.n_params()) +
                                " parameters, got " +
                                std::to_string(params.size()));
}

} // namespace

TupsAnsatz::TupsAnsatz(std::size_t n_orbitals, std::size_t n_layers,
                       std::size_t n_electrons)
    : n_orbitals_(n_orbitals), n_layers_(n_layers),
      n_electrons_(n_electrons == 0 ? n_orbitals : n_electrons) {
  if (n_orbitals_ < 2)
    throw StructureError("tUPS needs at least two orbitals");
  if (n_orbitals_ > 15)
    throw StructureError("tUPS register too large");
  if (n_electrons_ % 2 != 0)
    throw StructureError("perfect-pairing reference needs an even electron count");
  if (n_electrons_ / 2 > (n_orbitals_ + 1) / 2)
    throw StructureError("too many electron pairs for the perfect-pairing reference");

  std::vector<std::size_t> tiles;
  for (std::size_t k = 0; k + 1 < n_orbitals_; k += 2)
    tiles.push_back(k);
  for (std::size_t k = 1; k + 1 < n_orbitals_; k += 2)
    tiles.push_back(k);

  std::size_t p = 0;
  for (std::size_t m = 0; m < n_layers_; ++m)
    for (auto k : tiles) {
      gates_.push_back({k, 1, p + 2});
      gates_.push_back({k, 2, p + 1});
      gates_.push_back({k, 1, p});
      p += 3;
    }
  for (std::size_t m = 0; m < (n_orbitals_ + 1) / 2; ++m)
    for (auto k : tiles)
      gates_.push_back({k, 1, p++});
  n_params_ = p;
  if (n_params_ != parameter_count(n_orbitals_, n_layers_))
    throw std::logic_error("tUPS tiling does not match the parameter count");
}

std::size_t TupsAnsatz::parameter_count(std::size_t n_orbitals,
                                        std::size_t n_layers) {
  if (n_orbitals < 2)
    throw StructureError("tUPS needs at least two orbitals");
  return 3 * n_layers * (n_orbitals - 1) +
         ((n_orbitals + 1) / 2) * (n_orbitals - 1);
}

std::uint64_t TupsAnsatz::reference_bits() const {
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < n_electrons_ / 2; ++k)
    bits |= std::uint64_t{3} << (4 * k);
  return bits;
}

StateVector TupsAnsatz::reference() const {
  return StateVector::basis(n_qubits(), reference_bits());
}

StateVector apply_ansatz(const TupsAnsatz &a, std::span<const double> params,
                         const StateVector &reference) {
  check_params(a, params);
  if (reference.n_qubits() != a.n_qubits())
    throw StructureError("reference does not match the ansatz register");
  std::vector<double> psi = to_real(reference);
  for (const auto &g : a.gates())
    apply_local(local().exp(g.generator, params[g.param]), 2 * g.lower, psi,
                false);
  return from_real(psi);
}

StateVector apply_ansatz(const TupsAnsatz &a, std::span<const double> params) {
  return apply_ansatz(a, params, a.reference());
}

namespace {

// Local configurations of a tile grouped by (n_alpha, n_beta) = (t / 3, t % 3).
const std::array<std::vector<int>, 9> &local_sectors() {
  static const auto sectors = [] {
    std::array<std::vector<int>, 9> out;
    for (int l = 0; l < 16; ++l) {
      const int na = (l & 1) + ((l >> 2) & 1), nb = ((l >> 1) & 1) + (l >> 3);
      out[static_cast<std::size_t>(na * 3 + nb)].push_back(l);
    }
    return out;
  }();
  return sectors;
}

template <class Body>
void for_each_block(const std::array<detail::TileSectorBlocks, 9> &tile, const Mat16 &m,
                    Body &&body) {
  const auto &sectors = local_sectors();
  double sub[16];
  for (std::size_t t = 0; t < 9; ++t) {
    const auto &b = tile[t];
    const std::size_t w = b.width;
    if (b.index.empty())
      continue;
    const auto &cfg = sectors[t];
    for (std::size_t i = 0; i < w; ++i)
      for (std::size_t j = 0; j < w; ++j)
        sub[i * w + j] = m(cfg[i], cfg[j]);
    for (std::size_t off = 0; off < b.index.size(); off += w)
      body(sub, w, &b.index[off]);
  }
}

void apply_blocks(const Mat16 &m, const std::array<detail::TileSectorBlocks, 9> &tile,
                  std::vector<double> &psi, bool transpose) {
  for_each_block(tile, m, [&](const double *sub, std::size_t w,
                              const std::uint32_t *idx) {
    double v[4], out[4];
    for (std::size_t i = 0; i < w; ++i)
      v[i] = psi[idx[i]];
    for (std::size_t i = 0; i < w; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < w; ++j)
        acc += (transpose ? sub[j * w + i] : sub[i * w + j]) * v[j];
      out[i] = acc;
    }
    for (std::size_t i = 0; i < w; ++i)
      psi[idx[i]] = out[i];
  });
}

double bilinear_blocks(const Mat16 &m, const std::array<detail::TileSectorBlocks, 9> &tile,
                       const std::vector<double> &x,
                       const std::vector<double> &y) {
  double acc = 0.0;
  for_each_block(tile, m, [&](const double *sub, std::size_t w,
                              const std::uint32_t *idx) {
    for (std::size_t i = 0; i < w; ++i)
      for (std::size_t j = 0; j < w; ++j)
        acc += x[idx[i]] * sub[i * w + j] * y[idx[j]];
  });
  return acc;
}

} // namespace

TupsEnergy::TupsEnergy(const TupsAnsatz &a, const PauliSum &h) : ansatz_(a) {
  if (h.n_qubits() != a.n_qubits())
    throw StructureError("Hamiltonian does not match the ansatz register");
  basis_ = sector_basis(a.n_qubits(), a.n_qubits(),
                        Sector{a.n_electrons(), 0});
  auto find = [&](std::uint64_t bits) -> std::int64_t {
    const auto it = std::lower_bound(basis_.begin(), basis_.end(), bits);
    if (it == basis_.end() || *it != bits)
      return -1;
    return it - basis_.begin();
  };
  const std::int64_t ref = find(a.reference_bits());
  if (ref < 0)
    throw std::logic_error("reference outside its own sector");
  reference_index_ = static_cast<std::size_t>(ref);

  blocks_.resize(a.n_orbitals() - 1);
  const auto &sectors = local_sectors();
  for (std::size_t k = 0; k + 1 < a.n_orbitals(); ++k) {
    const std::size_t shift = 2 * k;
    const std::uint64_t mask = std::uint64_t{15} << shift;
    auto &tile = blocks_[k];
    for (std::size_t t = 0; t < 9; ++t)
      tile[t].width = sectors[t].size();
    for (auto bits : basis_) {
      const std::uint64_t l = (bits & mask) >> shift;
      const auto &cfg = sectors[static_cast<std::size_t>(
          ((l & 1) + ((l >> 2) & 1)) * 3 + ((l >> 1) & 1) + (l >> 3))];
      // Visit each outer setting once, from its first local configuration.
      if (static_cast<int>(l) != cfg.front())
        continue;
      auto &dst = blocks_[k][static_cast<std::size_t>(
          ((l & 1) + ((l >> 2) & 1)) * 3 + ((l >> 1) & 1) + (l >> 3))];
      for (int c : cfg) {
        const std::int64_t idx =
            find((bits & ~mask) | (static_cast<std::uint64_t>(c) << shift));
        if (idx < 0)
          throw std::logic_error("tile maps out of the sector");
        dst.index.push_back(static_cast<std::uint32_t>(idx));
      }
    }
  }

  const CompiledOperator c(h);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(basis_.size());
  for (const auto &g : c.groups())
    for (std::size_t col = 0; col < basis_.size(); ++col) {
      const cplx d = g.diag[basis_[col]];
      if (std::abs(d) < 1e-15)
        continue;
      if (std::abs(d.imag()) > 1e-12)
        throw InvalidStateError("Hamiltonian is not real in the computational basis");
      const std::int64_t row = find(basis_[col] ^ g.flip);
      if (row < 0)
        throw InvalidStateError("Hamiltonian does not conserve the ansatz sector");
      rows[static_cast<std::size_t>(row)].emplace_back(
          static_cast<std::uint32_t>(col), d.real());
    }
  row_start_.push_back(0);
  for (auto &r : rows) {
    std::sort(r.begin(), r.end());
    for (const auto &[cidx, v] : r) {
      col_.push_back(cidx);
      val_.push_back(v);
    }
    row_start_.push_back(col_.size());
  }
}

void TupsEnergy::apply_h(const std::vector<double> &in,
                         std::vector<double> &out) const {
  for (std::size_t r = 0; r + 1 < row_start_.size(); ++r) {
    double acc = 0.0;
    for (std::size_t e = row_start_[r]; e < row_start_[r + 1]; ++e)
      acc += val_[e] * in[col_[e]];
    out[r] = acc;
  }
}

std::vector<double> TupsEnergy::forward(std::span<const double> params) const {
  check_params(ansatz_, params);
  std::vector<double> psi(basis_.size(), 0.0);
  psi[reference_index_] = 1.0;
  for (const auto &g : ansatz_.gates())
    apply_blocks(local().exp(g.generator, params[g.param]), blocks_[g.lower],
                 psi, false);
  return psi;
}

StateVector TupsEnergy::state(std::span<const double> params) const {
  const auto psi = forward(params);
  StateVector out(ansatz_.n_qubits());
  out[0] = 0.0;
  for (std::size_t i = 0; i < basis_.size(); ++i)
    out[basis_[i]] = psi[i];
  return out;
}

double TupsEnergy::energy(std::span<const double> params) const {
  const auto psi = forward(params);
  std::vector<double> hpsi(psi.size());
  apply_h(psi, hpsi);
  double e = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    e += psi[i] * hpsi[i];
  return e;
}

double TupsEnergy::energy_and_gradient(std::span<const double> params,
                                       std::span<double> gradient) const {
  check_params(ansatz_, params);
  if (gradient.size() != params.size())
    throw std::invalid_argument("gradient buffer has the wrong length");
  const auto &gates = ansatz_.gates();
  std::vector<Mat16> mats;
  mats.reserve(gates.size());
  std::vector<double> psi(basis_.size(), 0.0);
  psi[reference_index_] = 1.0;
  for (const auto &g : gates) {
    mats.push_back(local().exp(g.generator, params[g.param]));
    apply_blocks(mats.back(), blocks_[g.lower], psi, false);
  }
  std::vector<double> lam(psi.size());
  apply_h(psi, lam);
  double e = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    e += psi[i] * lam[i];

  std::fill(gradient.begin(), gradient.end(), 0.0);
  for (std::size_t k = gates.size(); k-- > 0;) {
    const auto &g = gates[k];
    const auto &blocks = blocks_[g.lower];
    gradient[g.param] +=
        2.0 * bilinear_blocks(local().kappa[g.generator - 1], blocks, lam, psi);
    apply_blocks(mats[k], blocks, psi, true);
    apply_blocks(mats[k], blocks, lam, true);
  }
  return e;
}

double energy_and_gradient(const TupsAnsatz &a, std::span<const double> params,
                           const PauliSum &h, std::vector<double> &gradient) {
  gradient.assign(params.size(), 0.0);
  return TupsEnergy(a, h).energy_and_gradient(params, gradient);
}

namespace {

class CeresObjective final : public ceres::FirstOrderFunction {
public:
  explicit CeresObjective(const TupsEnergy &f) : f_(f) {}
  bool Evaluate(const double *x, double *cost, double *grad) const override {
    const std::span<const double> p(x, f_.ansatz().n_params());
    if (grad)
      *cost = f_.energy_and_gradient(p, {grad, p.size()});
    else
      *cost = f_.energy(p);
    return std::isfinite(*cost);
  }
  int NumParameters() const override {
    return static_cast<int>(f_.ansatz().n_params());
  }

private:
  const TupsEnergy &f_;
};

double rms(const std::vector<double> &g) {
  double s = 0.0;
  for (double v : g)
    s += v * v;
  return g.empty() ? 0.0 : std::sqrt(s / static_cast<double>(g.size()));
}

} // namespace

LocalMinimum minimize_lbfgs(const TupsEnergy &f, std::vector<double> start,
                            std::size_t max_iterations, double rms_tol) {
  LocalMinimum out;
  out.params = std::move(start);
  std::vector<double> grad(out.params.size());
  if (!out.params.empty()) {
    ceres::GradientProblem problem(new CeresObjective(f));
    ceres::GradientProblemSolver::Options o;
    o.line_search_direction_type = ceres::LBFGS;
    o.max_num_iterations = static_cast<int>(max_iterations);
    // Max-norm below rms_tol implies the RMS criterion.
    o.gradient_tolerance = rms_tol;
    o.function_tolerance = 1e-16;
    o.parameter_tolerance = 1e-16;
    o.logging_type = ceres::SILENT;
    o.minimizer_progress_to_stdout = false;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(o, problem, out.params.data(), &summary);
    out.iterations = summary.iterations.size();
  }
  out.energy = f.energy_and_gradient(out.params, grad);
  out.rms_gradient = rms(grad);
  out.converged = out.rms_gradient < rms_tol;
  return out;
}

std::vector<double> BHPTConfig::temperatures() const {
  if (n_replicas == 0)
    throw std::invalid_argument("BHPT needs at least one replica");
  if (!(t_min > 0.0) || !(t_max >= t_min))
    throw std::invalid_argument("BHPT temperatures must satisfy 0 < t_min <= t_max");
  std::vector<double> t(n_replicas);
  for (std::size_t r = 0; r < n_replicas; ++r) {
    const double f = n_replicas == 1
                         ? 0.0
                         : static_cast<double>(r) /
                               static_cast<double>(n_replicas - 1);
    t[r] = t_min * std::pow(t_max / t_min, f);
  }
  return t;
}

namespace {

struct Replica {
  std::vector<double> x;
  double e = std::numeric_limits<double>::infinity();
  double rms = 0.0;
  std::mt19937_64 rng;
};

template <class Fn>
void for_each_replica(std::size_t n, std::size_t threads, Fn &&fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t r = 0; r < n; ++r)
      fn(r);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(threads, n); ++t)
    pool.emplace_back([&] {
      for (std::size_t r; (r = next.fetch_add(1)) < n;)
        fn(r);
    });
}

} // namespace

BHPTResult optimize(const TupsAnsatz &a, const PauliSum &h,
                    const BHPTConfig &cfg,
                    const std::optional<StateVector> &exact_ground) {
  const auto temps = cfg.temperatures();
  if (cfg.kick < 0.0)
    throw std::invalid_argument("BHPT kick must be non-negative");
  if (cfg.swap_probability < 0.0 || cfg.swap_probability > 1.0)
    throw std::invalid_argument("BHPT swap probability must lie in [0, 1]");
  const std::size_t threads =
      cfg.n_threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                         : cfg.n_threads;

  const TupsEnergy f(a, h);
  const std::size_t n_rep = temps.size();
  std::vector<Replica> reps(n_rep);
  std::vector<std::size_t> non_converged(n_rep, 0);
  BHPTResult res;

  auto kicked = [&](Replica &rep, const std::vector<double> &from) {
    std::uniform_real_distribution<double> u(-cfg.kick, cfg.kick);
    std::vector<double> x = from;
    for (auto &v : x)
      v += u(rep.rng);
    return x;
  };

  for_each_replica(n_rep, threads, [&](std::size_t r) {
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(r), std::uint64_t{1}};
    reps[r].rng.seed(seq);
    auto m = minimize_lbfgs(f, kicked(reps[r], std::vector<double>(a.n_params())),
                            cfg.max_iterations, cfg.rms_tolerance);
    non_converged[r] += m.converged ? 0 : 1;
    reps[r].x = std::move(m.params);
    reps[r].e = m.energy;
    reps[r].rms = m.rms_gradient;
  });
  res.local_minimizations += n_rep;

  auto track_best = [&] {
    for (const auto &rep : reps)
      if (res.params.empty() || rep.e < res.energy) {
        res.params = rep.x;
        res.energy = rep.e;
        res.rms_gradient = rep.rms;
      }
  };
  track_best();

  std::seed_seq xseq{cfg.seed, std::uint64_t{0x5eed}};
  std::mt19937_64 xrng(xseq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t step = 0; step < cfg.n_steps; ++step) {
    for_each_replica(n_rep, threads, [&](std::size_t r) {
      auto &rep = reps[r];
      auto m = minimize_lbfgs(f, kicked(rep, rep.x), cfg.max_iterations,
                              cfg.rms_tolerance);
      non_converged[r] += m.converged ? 0 : 1;
      const double draw = std::uniform_real_distribution<double>(0.0, 1.0)(rep.rng);
      const double de = m.energy - rep.e;
      if (std::isfinite(m.energy) &&
          (de <= 0.0 || draw < std::exp(-de / temps[r]))) {
        rep.x = std::move(m.params);
        rep.e = m.energy;
        rep.rms = m.rms_gradient;
      }
    });
    res.local_minimizations += n_rep;
    track_best();

    for (std::size_t r = 0; r + 1 < n_rep; ++r) {
      if (unit(xrng) >= cfg.swap_probability)
        continue;
      ++res.swaps_attempted;
      const double delta =
          (1.0 / temps[r] - 1.0 / temps[r + 1]) * (reps[r].e - reps[r + 1].e);
      if (delta >= 0.0 || unit(xrng) < std::exp(delta)) {
        std::swap(reps[r].x, reps[r + 1].x);
        std::swap(reps[r].e, reps[r + 1].e);
        std::swap(reps[r].rms, reps[r + 1].rms);
        ++res.swaps_accepted;
      }
    }
  }
  for (auto c : non_converged)
    res.non_converged += c;

  if (exact_ground) {
    res.exact_energy = expectation(*exact_ground, h).real();
    res.fidelity = fidelity(*exact_ground, apply_ansatz(a, res.params));
  }
  return res;
}

BHPTResult optimize(const TupsAnsatz &a, const ElectronicSystem &sys,
                    const BHPTConfig &cfg) {
  std::optional<StateVector> ground;
  const auto spec = exact_diagonalize(sys, sys.sector, 1);
  if (spec.size() > 0)
    ground = spec.states[0];
  return optimize(a, sys.h_e, cfg, ground);
}

void write_checkpoint(std::ostream &os, const TupsCheckpoint &c) {
  os << "# pp-tUPS parameters\n"
     << "n_orbitals " << c.n_orbitals << '\n'
     << "n_layers " << c.n_layers << '\n'
     << "n_electrons " << c.n_electrons << '\n'
     << "seed " << c.seed << '\n'
     << std::setprecision(17) << "energy " << c.energy << '\n'
     << "params " << c.params.size() << '\n';
  for (double v : c.params)
    os << v << '\n';
}

TupsCheckpoint read_checkpoint(std::istream &is, const std::string &name) {
  TupsCheckpoint c;
  std::string line;
  std::size_t lineno = 0;
  bool have[4] = {false, false, false, false};
  std::optional<std::size_t> count;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key))
      continue;
    if (count) {
      // Parameter block: every token is a value.
      std::istringstream vs(line);
      double v;
      while (vs >> v)
        c.params.push_back(v);
      if (!vs.eof())
        throw ParseError(name, lineno, "malformed parameter value");
      continue;
    }
    auto read_value = [&](auto &dst) {
      if (!(ls >> dst))
        throw ParseError(name, lineno, "missing or malformed value for '" + key + "'");
    };
    if (key == "n_orbitals") {
      read_value(c.n_orbitals);
      have[0] = true;
    } else if (key == "n_layers") {
      read_value(c.n_layers);
      have[1] = true;
    } else if (key == "n_electrons") {
      read_value(c.n_electrons);
      have[2] = true;
    } else if (key == "seed") {
      read_value(c.seed);
    } else if (key == "energy") {
      read_value(c.energy);
    } else if (key == "params") {
      std::size_t n;
      read_value(n);
      count = n;
      have[3] = true;
    } else {
      throw ParseError(name, lineno, "unknown key '" + key + "'");
    }
  }
  if (!(have[0] && have[1] && have[2] && have[3]))
    throw ParseError(name, lineno,
                     "checkpoint needs n_orbitals, n_layers, n_electrons and params");
  if (c.params.size() != *count)
    throw ParseError(name, lineno,
                     "expected " + std::to_string(*count) + " parameters, found " +
                         std::to_string(c.params.size()));
  if (c.params.size() != TupsAnsatz::parameter_count(c.n_orbitals, c.n_layers))
    throw ParseError(name, lineno, "parameter count does not match the ansatz shape");
  return c;
}

TupsCheckpoint read_checkpoint_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw ParseError(path.string(), 0, "cannot open file");
  return read_checkpoint(is, path.string());
}

} // namespace exasp
