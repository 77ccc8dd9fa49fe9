/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/models.hpp"

#include "exasp/dense.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace exasp {

namespace {

constexpr std::uint64_t kAlphaBits = 0x5555555555555555ULL;
constexpr std::uint64_t kBetaBits = 0xAAAAAAAAAAAAAAAAULL;

std::size_t spin_orbital(std::size_t spatial, int spin) {
  return 2 * spatial + static_cast<std::size_t>(spin);
}

} // namespace

ElectronicSystem build_two_level(const TwoLevelParams &p) {
  if (!(p.epsilon > 0.0))
    throw std::invalid_argument("two-level epsilon must be positive");
  ElectronicSystem sys;
  sys.kind = ModelKind::two_level;
  sys.n_qubits = 1;
  sys.h_e = PauliSum(1);
  sys.h_e.add_term(PauliString::from_label("Z", -p.epsilon));
  sys.h_e.add_term(PauliString::from_label("X", p.g));
  sys.dipole = {PauliSum(1), PauliSum(1), PauliSum(1)};
  sys.dipole[2].add_term(PauliString::from_label("X", p.mu));
  return sys;
}

ElectronicSystem build_hubbard(const HubbardParams &p) {
  const std::size_t L = p.n_sites;
  if (L == 0)
    throw std::invalid_argument("Hubbard chain needs at least one site");
  const std::size_t n_el = p.n_electrons == 0 ? L : p.n_electrons;
  if (n_el > 2 * L)
    throw std::invalid_argument("too many electrons for the Hubbard chain");
  std::vector<double> x = p.site_positions;
  if (x.empty()) {
    x.resize(L);
    for (std::size_t s = 0; s < L; ++s)
      x[s] = static_cast<double>(s) - (static_cast<double>(L) - 1.0) / 2.0;
  } else if (x.size() != L) {
    throw std::invalid_argument("site_positions length must equal n_sites");
  }

  const std::size_t n_modes = 2 * L;
  std::vector<FermionOp> h_ops;
  for (std::size_t s = 0; s + 1 < L; ++s) {
    for (int spin = 0; spin < 2; ++spin) {
      const auto a = spin_orbital(s, spin), b = spin_orbital(s + 1, spin);
      h_ops.push_back(FermionOp::hop(a, b, -p.t));
      h_ops.push_back(FermionOp::hop(b, a, -p.t));
    }
  }
  for (std::size_t s = 0; s < L; ++s) {
    const auto up = spin_orbital(s, 0), dn = spin_orbital(s, 1);
    h_ops.push_back({{{up, true}, {up, false}, {dn, true}, {dn, false}}, p.u});
  }

  std::vector<FermionOp> mu_ops;
  for (std::size_t s = 0; s < L; ++s)
    for (int spin = 0; spin < 2; ++spin)
      mu_ops.push_back(FermionOp::number(spin_orbital(s, spin), x[s]));

  ElectronicSystem sys;
  sys.kind = ModelKind::hubbard;
  sys.n_qubits = n_modes;
  sys.h_e = jordan_wigner(h_ops, n_modes);
  sys.dipole = {PauliSum(n_modes), PauliSum(n_modes),
                jordan_wigner(mu_ops, n_modes)};
  const auto n_alpha = (n_el + 1) / 2;
  sys.sector = Sector{n_el, static_cast<int>(n_alpha) -
                                static_cast<int>(n_el - n_alpha)};
  return sys;
}

ElectronicSystem build_molecular(const MolecularIntegrals &m) {
  const std::size_t n = m.n_orbitals;
  const std::size_t n_modes = 2 * n;
  constexpr double kSkip = 1e-14;

  std::vector<FermionOp> h_ops;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      const double v = m.one_body(p, q);
      if (std::abs(v) < kSkip)
        continue;
      for (int s = 0; s < 2; ++s)
        h_ops.push_back(FermionOp::hop(spin_orbital(p, s), spin_orbital(q, s), v));
    }
  // 1/2 sum <pq|rs> a+_p a+_q a_s a_r with <pq|rs> = (pr|qs).
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const double v = m.two_body(p, r, q, s);
          if (std::abs(v) < kSkip)
            continue;
          for (int sa = 0; sa < 2; ++sa)
            for (int sb = 0; sb < 2; ++sb) {
              const auto P = spin_orbital(p, sa), Q = spin_orbital(q, sb);
              const auto R = spin_orbital(r, sa), S = spin_orbital(s, sb);
              if (P == Q || R == S)
                continue;
              h_ops.push_back(
                  {{{P, true}, {Q, true}, {S, false}, {R, false}}, 0.5 * v});
            }
        }

  ElectronicSystem sys;
  sys.kind = ModelKind::molecule;
  sys.n_qubits = n_modes;
  sys.h_e = jordan_wigner(h_ops, n_modes);
  if (m.core_energy != 0.0)
    sys.h_e.add_term(PauliString(n_modes, m.core_energy));
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<FermionOp> ops;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        const double v = m.dipole_element(c, p, q);
        if (std::abs(v) < kSkip)
          continue;
        for (int s = 0; s < 2; ++s)
          ops.push_back(FermionOp::hop(spin_orbital(p, s), spin_orbital(q, s), v));
      }
    sys.dipole[c] = jordan_wigner(ops, n_modes);
    if (m.dipole_core[c] != 0.0)
      sys.dipole[c].add_term(PauliString(n_modes, m.dipole_core[c]));
  }
  sys.sector = Sector{m.n_electrons, m.ms2};
  return sys;
}

// ---------------------------------------------------------------------------
// Integrals files

namespace {

struct Header {
  std::map<std::string, std::vector<std::string>> values;
  std::size_t lines_consumed = 0;
};

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Reads a namelist header "&NAME KEY=v,..., &END" (or "/" terminator).
Header read_header(std::istream &is, const std::string &file,
                   std::size_t &line_no) {
  Header h;
  std::string line;
  bool started = false;
  std::string current;
  while (std::getline(is, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty())
      continue;
    std::string u = upper(t);
    if (!started) {
      if (u.empty() || u[0] != '&')
        throw ParseError(file, line_no, "expected namelist header starting with '&'");
      started = true;
      const auto sp = u.find_first_of(" \t,");
      u = sp == std::string::npos ? std::string{} : u.substr(sp);
    }
    bool done = false;
    for (const std::string end : {"&END", "/"}) {
      const auto pos = u.find(end);
      if (pos != std::string::npos) {
        u = u.substr(0, pos);
        done = true;
      }
    }
    for (char &c : u)
      if (c == ',')
        c = ' ';
    std::istringstream ts(u);
    std::string tok;
    while (ts >> tok) {
      const auto eq = tok.find('=');
      if (eq != std::string::npos) {
        current = tok.substr(0, eq);
        if (current.empty())
          throw ParseError(file, line_no, "empty key in header");
        h.values[current];
        const auto rest = tok.substr(eq + 1);
        if (!rest.empty())
          h.values[current].push_back(rest);
      } else if (tok == "=") {
        continue;
      } else {
        if (current.empty())
          throw ParseError(file, line_no, "value '" + tok + "' without key");
        h.values[current].push_back(tok);
      }
    }
    if (done)
      return h;
  }
  throw ParseError(file, line_no, "unterminated namelist header");
}

long header_int(const Header &h, const std::string &key, const std::string &file,
                std::size_t line_no, std::optional<long> fallback = std::nullopt) {
  auto it = h.values.find(key);
  if (it == h.values.end() || it->second.empty()) {
    if (fallback)
      return *fallback;
    throw ParseError(file, line_no, "missing header key " + key);
  }
  try {
    std::size_t used = 0;
    long v = std::stol(it->second.front(), &used);
    if (used != it->second.front().size())
      throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception &) {
    throw ParseError(file, line_no, "non-numeric value for " + key);
  }
}

double parse_double(const std::string &tok, const std::string &file,
                    std::size_t line_no) {
  std::string t = tok;
  // Fortran-style exponent.
  for (char &c : t)
    if (c == 'D' || c == 'd')
      c = 'E';
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size())
      throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception &) {
    throw ParseError(file, line_no, "non-numeric field '" + tok + "'");
  }
}

long parse_index(const std::string &tok, const std::string &file,
                 std::size_t line_no) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(file, line_no, "non-integer index '" + tok + "'");
  return v;
}

struct Record {
  double value;
  long i, j, k, l;
};

std::optional<Record> parse_record(const std::string &line,
                                   const std::string &file,
                                   std::size_t line_no) {
  std::istringstream ts(line);
  std::vector<std::string> f;
  std::string tok;
  while (ts >> tok)
    f.push_back(tok);
  if (f.empty())
    return std::nullopt;
  if (f.size() != 5)
    throw ParseError(file, line_no,
                     "expected 5 fields (value i j k l), got " +
                         std::to_string(f.size()));
  return Record{parse_double(f[0], file, line_no), parse_index(f[1], file, line_no),
                parse_index(f[2], file, line_no), parse_index(f[3], file, line_no),
                parse_index(f[4], file, line_no)};
}

void set_checked(double &slot, bool &seen, double v, const std::string &file,
                 std::size_t line_no) {
  if (seen && std::abs(slot - v) > 1e-8)
    throw ParseError(file, line_no,
                     "inconsistent symmetry-equivalent integral");
  slot = v;
  seen = true;
}

} // namespace

MolecularIntegrals parse_integrals(std::istream &integrals,
                                   std::istream &dipoles,
                                   const std::string &name) {
  MolecularIntegrals m;
  std::size_t line_no = 0;
  const std::string file = name;
  Header h = read_header(integrals, file, line_no);
  const long norb = header_int(h, "NORB", file, line_no);
  const long nelec = header_int(h, "NELEC", file, line_no);
  const long ms2 = header_int(h, "MS2", file, line_no, 0L);
  if (norb <= 0 || norb > 32)
    throw ParseError(file, line_no, "NORB out of range");
  if (nelec < 0 || nelec > 2 * norb)
    throw ParseError(file, line_no, "NELEC out of range");
  m.n_orbitals = static_cast<std::size_t>(norb);
  m.n_electrons = static_cast<std::size_t>(nelec);
  m.ms2 = static_cast<int>(ms2);
  if (auto it = h.values.find("ORBSYM"); it != h.values.end())
    for (const auto &v : it->second)
      m.orbsym.push_back(static_cast<int>(parse_index(v, file, line_no)));

  const std::size_t n = m.n_orbitals;
  m.h.assign(n * n, 0.0);
  m.eri.assign(n * n * n * n, 0.0);
  std::vector<bool> h_seen(n * n, false), eri_seen(n * n * n * n, false);

  auto in_range = [&](long idx) { return idx >= 1 && idx <= norb; };

  std::string line;
  while (std::getline(integrals, line)) {
    ++line_no;
    auto rec = parse_record(line, file, line_no);
    if (!rec)
      continue;
    const auto [v, i, j, k, l] = *rec;
    if (i == 0 && j == 0 && k == 0 && l == 0) {
      m.core_energy = v;
    } else if (k == 0 && l == 0) {
      if (!in_range(i) || !in_range(j))
        throw ParseError(file, line_no, "orbital index out of range");
      const std::size_t p = static_cast<std::size_t>(i - 1),
                        q = static_cast<std::size_t>(j - 1);
      bool a = h_seen[p * n + q], b = h_seen[q * n + p];
      set_checked(m.h[p * n + q], a, v, file, line_no);
      set_checked(m.h[q * n + p], b, v, file, line_no);
      h_seen[p * n + q] = h_seen[q * n + p] = true;
    } else {
      if (!in_range(i) || !in_range(j) || !in_range(k) || !in_range(l))
        throw ParseError(file, line_no, "orbital index out of range");
      const std::size_t p = static_cast<std::size_t>(i - 1),
                        q = static_cast<std::size_t>(j - 1),
                        r = static_cast<std::size_t>(k - 1),
                        s = static_cast<std::size_t>(l - 1);
      const std::array<std::array<std::size_t, 4>, 8> perms{{{p, q, r, s},
                                                             {q, p, r, s},
                                                             {p, q, s, r},
                                                             {q, p, s, r},
                                                             {r, s, p, q},
                                                             {s, r, p, q},
                                                             {r, s, q, p},
                                                             {s, r, q, p}}};
      // Only equivalents of this exact record may disagree with a prior one.
      std::vector<std::size_t> slots;
      for (const auto &pm : perms)
        slots.push_back(((pm[0] * n + pm[1]) * n + pm[2]) * n + pm[3]);
      std::sort(slots.begin(), slots.end());
      slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
      for (auto idx : slots) {
        bool seen = eri_seen[idx];
        set_checked(m.eri[idx], seen, v, file, line_no);
        eri_seen[idx] = true;
      }
    }
  }

  // Dipole companion.
  std::size_t dline = 0;
  const std::string dfile = name + " (dipoles)";
  Header dh = read_header(dipoles, dfile, dline);
  const long dnorb = header_int(dh, "NORB", dfile, dline);
  if (dnorb != norb)
    throw ParseError(dfile, dline, "NORB does not match integrals file");
  for (auto &d : m.dipole)
    d.assign(n * n, 0.0);
  int component = -1;
  std::vector<std::vector<bool>> d_seen(3, std::vector<bool>(n * n, false));
  while (std::getline(dipoles, line)) {
    ++dline;
    const std::string t = upper(trim(line));
    if (t.empty())
      continue;
    if (t == "X" || t == "Y" || t == "Z") {
      component = t[0] - 'X';
      continue;
    }
    auto rec = parse_record(line, dfile, dline);
    if (component < 0)
      throw ParseError(dfile, dline, "record before component tag line");
    const auto [v, i, j, k, l] = *rec;
    const auto c = static_cast<std::size_t>(component);
    if (k != 0 || l != 0)
      throw ParseError(dfile, dline, "dipole records must have k = l = 0");
    if (i == 0 && j == 0) {
      m.dipole_core[c] = v;
      continue;
    }
    if (!in_range(i) || !in_range(j))
      throw ParseError(dfile, dline, "orbital index out of range");
    const std::size_t p = static_cast<std::size_t>(i - 1),
                      q = static_cast<std::size_t>(j - 1);
    bool a = d_seen[c][p * n + q], b = d_seen[c][q * n + p];
    set_checked(m.dipole[c][p * n + q], a, v, dfile, dline);
    set_checked(m.dipole[c][q * n + p], b, v, dfile, dline);
    d_seen[c][p * n + q] = d_seen[c][q * n + p] = true;
  }
  return m;
}

MolecularIntegrals parse_integrals_file(const std::filesystem::path &integrals,
                                        const std::filesystem::path &dipoles) {
  std::ifstream fi(integrals), fd(dipoles);
  if (!fi)
    throw ParseError(integrals.string(), 0, "cannot open file");
  if (!fd)
    throw ParseError(dipoles.string(), 0, "cannot open file");
  return parse_integrals(fi, fd, integrals.string());
}

void write_integrals(std::ostream &os, std::ostream &ds,
                     const MolecularIntegrals &m) {
  const std::size_t n = m.n_orbitals;
  os << " &FCI NORB=" << n << ",NELEC=" << m.n_electrons << ",MS2=" << m.ms2
     << ",\n  ORBSYM=";
  for (std::size_t p = 0; p < n; ++p)
    os << (p < m.orbsym.size() ? m.orbsym[p] : 1) << ",";
  os << "\n  ISYM=1,\n &END\n";
  os << std::setprecision(17) << std::scientific;
  auto rec = [](std::ostream &o, double v, std::size_t i, std::size_t j,
                std::size_t k, std::size_t l) {
    o << std::setw(25) << v << " " << i << " " << j << " " << k << " " << l
      << "\n";
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l <= k; ++l) {
          if (i * (i + 1) / 2 + j < k * (k + 1) / 2 + l)
            continue;
          const double v = m.two_body(i, j, k, l);
          if (v != 0.0)
            rec(os, v, i + 1, j + 1, k + 1, l + 1);
        }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (m.one_body(i, j) != 0.0)
        rec(os, m.one_body(i, j), i + 1, j + 1, 0, 0);
  rec(os, m.core_energy, 0, 0, 0, 0);

  ds << " &DIPOLE NORB=" << n << ",\n &END\n";
  ds << std::setprecision(17) << std::scientific;
  for (std::size_t c = 0; c < 3; ++c) {
    ds << static_cast<char>('X' + c) << "\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j)
        if (m.dipole_element(c, i, j) != 0.0)
          rec(ds, m.dipole_element(c, i, j), i + 1, j + 1, 0, 0);
    if (m.dipole_core[c] != 0.0)
      rec(ds, m.dipole_core[c], 0, 0, 0, 0);
  }
}

// ---------------------------------------------------------------------------

PauliSum number_operator(std::size_t n_modes) {
  std::vector<FermionOp> ops;
  for (std::size_t p = 0; p < n_modes; ++p)
    ops.push_back(FermionOp::number(p));
  return jordan_wigner(ops, n_modes);
}

PauliSum sz_operator(std::size_t n_modes) {
  std::vector<FermionOp> ops;
  for (std::size_t p = 0; p < n_modes; ++p)
    ops.push_back(FermionOp::number(p, p % 2 == 0 ? 0.5 : -0.5));
  return jordan_wigner(ops, n_modes);
}

std::vector<std::uint64_t> sector_basis(std::size_t n_qubits,
                                        std::size_t n_modes,
                                        const std::optional<Sector> &sector) {
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  const std::uint64_t mode_mask =
      n_modes >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_modes) - 1;
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < dim; ++i) {
    if (sector) {
      const std::uint64_t low = i & mode_mask;
      const int na = std::popcount(low & kAlphaBits);
      const int nb = std::popcount(low & kBetaBits);
      if (static_cast<std::size_t>(na + nb) != sector->n_electrons ||
          na - nb != sector->two_ms)
        continue;
    }
    out.push_back(i);
  }
  return out;
}

Spectrum diagonalize_in_basis(const CompiledOperator &h,
                              const std::vector<std::uint64_t> &basis,
                              std::size_t max_states) {
  if (basis.empty())
    throw SpectrumError("symmetry sector is empty");
  if (basis.size() > kMaxSectorDim)
    throw SpectrumError("sector dimension " + std::to_string(basis.size()) +
                        " exceeds dense diagonalization limit");
  const Eigen::MatrixXcd m = dense::sector_matrix(h, basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  if (es.info() != Eigen::Success)
    throw SpectrumError("eigensolver failed");
  const std::size_t count =
      max_states == 0 ? basis.size() : std::min(max_states, basis.size());
  Spectrum out;
  out.energies.reserve(count);
  out.states.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    out.energies.push_back(es.eigenvalues()[kk]);
    std::vector<cplx> amps(h.dim());
    for (std::size_t b = 0; b < basis.size(); ++b)
      amps[basis[b]] = es.eigenvectors()(static_cast<Eigen::Index>(b), kk);
    out.states.push_back(StateVector::from_amplitudes(std::move(amps)));
  }
  return out;
}

Spectrum exact_diagonalize(const ElectronicSystem &sys,
                           const std::optional<Sector> &sector,
                           std::size_t max_states) {
  if (sys.n_qubits > 14)
    throw SpectrumError("register too large for exact diagonalization");
  const auto basis = sector_basis(sys.n_qubits, sys.n_qubits, sector);
  return diagonalize_in_basis(CompiledOperator(sys.h_e), basis, max_states);
}

Spectrum exact_diagonalize(const ElectronicSystem &sys) {
  return exact_diagonalize(sys, sys.sector);
}

BrightState find_first_bright_state(const Spectrum &spectrum,
                                    const PauliSum &dipole, double threshold) {
  if (!(threshold > 0.0))
    throw std::invalid_argument("bright-state threshold must be positive");
  if (spectrum.size() < 2)
    throw SpectrumError("spectrum has no excited states");
  const CompiledOperator mu(dipole);
  const StateVector mu0 = mu.apply(spectrum.states[0]);
  for (std::size_t k = 1; k < spectrum.size(); ++k) {
    const double tdm = std::abs(spectrum.states[k].inner(mu0));
    if (tdm > threshold)
      return {k, spectrum.energies[k] - spectrum.energies[0], tdm};
  }
  throw SpectrumError("no bright state found in the computed spectrum");
}

PauliSum project_dipole(const ElectronicSystem &sys,
                        const std::array<double, 3> &e) {
  PauliSum out(sys.n_qubits);
  for (std::size_t c = 0; c < 3; ++c) {
    if (e[c] == 0.0)
      continue;
    if (sys.dipole[c].n_qubits() != sys.n_qubits) {
      if (!sys.dipole[c].empty())
        throw StructureError("dipole register size mismatch");
      continue;
    }
    out += sys.dipole[c] * cplx{e[c], 0.0};
  }
  return out;
}

} // namespace exasp
