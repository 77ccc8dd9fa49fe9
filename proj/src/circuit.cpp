/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/circuit.hpp"

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "exasp/models.hpp"
#include "exasp/propagator.hpp"

namespace exasp {

std::string_view gate_name(GateKind k) {
  switch (k) {
  case GateKind::rx:
    return "rx";
  case GateKind::ry:
    return "ry";
  case GateKind::rz:
    return "rz";
  case GateKind::h:
    return "h";
  case GateKind::s:
    return "s";
  case GateKind::sdg:
    return "sdg";
  case GateKind::cx:
    return "cx";
  case GateKind::x:
    return "x";
  }
  return "?";
}

bool is_rotation(GateKind k) {
  return k == GateKind::rx || k == GateKind::ry || k == GateKind::rz;
}

void GateList::validate() const {
  for (const auto &g : gates) {
    if (g.q0 >= n_qubits || (g.kind == GateKind::cx && g.q1 >= n_qubits))
      throw StructureError("gate " + std::string(gate_name(g.kind)) +
                           " addresses a qubit outside the register");
    if (g.kind == GateKind::cx && g.q0 == g.q1)
      throw StructureError("cx control equals target");
    if (!std::isfinite(g.angle))
      throw StructureError("non-finite rotation angle");
  }
}

std::size_t GateList::cx_count() const {
  std::size_t n = 0;
  for (const auto &g : gates)
    n += g.kind == GateKind::cx;
  return n;
}

void append_pauli_rotation(GateList &g, const PauliString &p, double theta) {
  if (p.size() != g.n_qubits)
    throw StructureError("Pauli string does not match the circuit register");
  std::vector<std::size_t> active;
  for (std::size_t q = 0; q < p.size(); ++q)
    if (p.op(q) != Pauli::I)
      active.push_back(q);
  if (active.empty())
    return;
  for (auto q : active) {
    if (p.op(q) == Pauli::X) {
      g.h(q);
    } else if (p.op(q) == Pauli::Y) {
      g.sdg(q);
      g.h(q);
    }
  }
  for (std::size_t k = 0; k + 1 < active.size(); ++k)
    g.cx(active[k], active[k + 1]);
  g.rz(active.back(), 2.0 * theta);
  for (std::size_t k = active.size() - 1; k-- > 0;)
    g.cx(active[k], active[k + 1]);
  for (auto q : active) {
    if (p.op(q) == Pauli::X) {
      g.h(q);
    } else if (p.op(q) == Pauli::Y) {
      g.h(q);
      g.s(q);
    }
  }
}

GateList two_level_ground_prep(double epsilon, double g) {
  GateList out;
  out.n_qubits = 2;
  out.ry(0, std::atan(-g / epsilon));
  out.x(1);
  return out;
}

GateList photon_prep(const CoupledSystem &cs) {
  GateList out;
  out.n_qubits = cs.n_qubits();
  out.x(cs.photon_qubit());
  return out;
}

GateList emit_trotter_circuit(const CoupledSystem &cs,
                              const PathwaySchedule &sched,
                              const GateList &ground_prep) {
  if (ground_prep.n_qubits != cs.n_qubits())
    throw StructureError("ground-state circuit does not match the coupled register");
  GateList out = ground_prep;
  out.n_steps = sched.n_steps();
  std::ostringstream src;
  src << std::setprecision(17) << "trotter omega_max=" << sched.omega_max()
      << " lambda_max=" << sched.lambda_max() << " T=" << sched.total_time()
      << " N=" << sched.n_steps();
  out.source = src.str();

  const TrotterTerms terms(cs);
  const double dt = sched.dt();
  for (std::size_t k = 0; k < sched.n_steps(); ++k) {
    const double s = sched.grid_point(k);
    const auto w = TermWeights::at(sched.omega(s), sched.lambda(s));
    for (const auto &e : terms.entries()) {
      if (e.string.is_identity())
        continue;
      const cplx c = e.string.coeff() * w[e.family];
      if (std::abs(c.imag()) > 1e-12)
        throw std::invalid_argument("Trotter term " + e.string.label() +
                                    " has a non-real coefficient");
      PauliString unit = e.string;
      unit.set_coeff(1.0);
      append_pauli_rotation(out, unit, c.real() * dt);
    }
  }
  return out;
}

namespace {

bool cancels(GateKind a, GateKind b) {
  using K = GateKind;
  return (a == K::h && b == K::h) || (a == K::x && b == K::x) ||
         (a == K::s && b == K::sdg) || (a == K::sdg && b == K::s);
}

// One sweep; returns true when something changed.
bool peephole_pass(std::vector<Gate> &gates, std::size_t n_qubits) {
  constexpr double kZero = 1e-12;
  std::vector<Gate> out;
  std::vector<bool> alive;
  std::vector<std::vector<std::size_t>> wire(n_qubits);
  bool changed = false;

  auto top = [&](std::size_t q) -> std::optional<std::size_t> {
    if (wire[q].empty())
      return std::nullopt;
    return wire[q].back();
  };
  auto kill = [&](std::size_t idx) {
    alive[idx] = false;
    wire[out[idx].q0].pop_back();
    if (out[idx].kind == GateKind::cx)
      wire[out[idx].q1].pop_back();
  };

  for (const auto &g : gates) {
    if (is_rotation(g.kind) && std::abs(g.angle) < kZero) {
      changed = true;
      continue;
    }
    if (g.kind == GateKind::cx) {
      const auto a = top(g.q0), b = top(g.q1);
      if (a && b && *a == *b && out[*a] == g) {
        kill(*a);
        changed = true;
        continue;
      }
    } else if (const auto t = top(g.q0)) {
      Gate &prev = out[*t];
      if (is_rotation(g.kind) && prev.kind == g.kind) {
        prev.angle += g.angle;
        if (std::abs(prev.angle) < kZero)
          kill(*t);
        changed = true;
        continue;
      }
      if (cancels(prev.kind, g.kind)) {
        kill(*t);
        changed = true;
        continue;
      }
    }
    out.push_back(g);
    alive.push_back(true);
    wire[g.q0].push_back(out.size() - 1);
    if (g.kind == GateKind::cx)
      wire[g.q1].push_back(out.size() - 1);
  }
  gates.clear();
  for (std::size_t i = 0; i < out.size(); ++i)
    if (alive[i])
      gates.push_back(out[i]);
  return changed;
}

} // namespace

GateList peephole_optimize(const GateList &g) {
  g.validate();
  GateList out = g;
  while (peephole_pass(out.gates, out.n_qubits)) {
  }
  return out;
}

void apply_gate(StateVector &state, const Gate &g) {
  const std::size_t n = state.n_qubits();
  if (g.q0 >= n || (g.kind == GateKind::cx && g.q1 >= n))
    throw StructureError("gate addresses a qubit outside the register");
  const std::uint64_t bit = std::uint64_t{1} << g.q0;
  auto amps = state.amps();
  const double r = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
  case GateKind::rx:
    apply_pauli_rotation(state, PauliString::single(n, g.q0, Pauli::X), g.angle / 2);
    return;
  case GateKind::ry:
    apply_pauli_rotation(state, PauliString::single(n, g.q0, Pauli::Y), g.angle / 2);
    return;
  case GateKind::rz:
    apply_pauli_rotation(state, PauliString::single(n, g.q0, Pauli::Z), g.angle / 2);
    return;
  case GateKind::h:
    for (std::size_t i = 0; i < amps.size(); ++i)
      if (!(i & bit)) {
        const cplx a = amps[i], b = amps[i | bit];
        amps[i] = r * (a + b);
        amps[i | bit] = r * (a - b);
      }
    return;
  case GateKind::s:
  case GateKind::sdg: {
    const cplx ph = g.kind == GateKind::s ? cplx(0, 1) : cplx(0, -1);
    for (std::size_t i = 0; i < amps.size(); ++i)
      if (i & bit)
        amps[i] *= ph;
    return;
  }
  case GateKind::x:
    for (std::size_t i = 0; i < amps.size(); ++i)
      if (!(i & bit))
        std::swap(amps[i], amps[i | bit]);
    return;
  case GateKind::cx: {
    if (g.q0 == g.q1)
      throw StructureError("cx control equals target");
    const std::uint64_t t = std::uint64_t{1} << g.q1;
    for (std::size_t i = 0; i < amps.size(); ++i)
      if ((i & bit) && !(i & t))
        std::swap(amps[i], amps[i | t]);
    return;
  }
  }
}

void simulate(StateVector &state, const GateList &g) {
  if (state.n_qubits() != g.n_qubits)
    throw StructureError("state does not match the circuit register");
  for (const auto &gate : g.gates)
    apply_gate(state, gate);
}

Eigen::MatrixXcd circuit_unitary(const GateList &g) {
  if (g.n_qubits > 10)
    throw StructureError("circuit unitary requested for a large register");
  const std::size_t dim = std::size_t{1} << g.n_qubits;
  Eigen::MatrixXcd u(dim, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    StateVector s = StateVector::basis(g.n_qubits, c);
    simulate(s, g);
    for (std::size_t r = 0; r < dim; ++r)
      u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s[r];
  }
  return u;
}

void write_qasm(std::ostream &os, const GateList &g) {
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (g.n_steps)
    os << "// steps " << g.n_steps << '\n';
  if (!g.source.empty())
    os << "// source " << g.source << '\n';
  os << "qreg q[" << g.n_qubits << "];\n";
  os << std::setprecision(17);
  for (const auto &gate : g.gates) {
    os << gate_name(gate.kind);
    if (is_rotation(gate.kind))
      os << '(' << gate.angle << ')';
    os << " q[" << gate.q0 << ']';
    if (gate.kind == GateKind::cx)
      os << ",q[" << gate.q1 << ']';
    os << ";\n";
  }
}

std::string write_qasm(const GateList &g) {
  std::ostringstream os;
  write_qasm(os, g);
  return os.str();
}

GateList parse_qasm(std::string_view text, const std::string &name) {
  static const std::regex header(R"(^OPENQASM\s+2\.0\s*;$)");
  static const std::regex include(R"(^include\s+"qelib1\.inc"\s*;$)");
  static const std::regex qreg(R"(^qreg\s+q\s*\[\s*(\d+)\s*\]\s*;$)");
  static const std::regex gate(
      R"(^([a-z]+)\s*(?:\(\s*([^)]+?)\s*\))?\s+q\s*\[\s*(\d+)\s*\]\s*(?:,\s*q\s*\[\s*(\d+)\s*\])?\s*;$)");

  GateList g;
  bool seen_header = false, seen_qreg = false;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty())
      continue;
    if (line.rfind("//", 0) == 0) {
      const std::string body = trim(line.substr(2));
      if (body.rfind("steps ", 0) == 0)
        g.n_steps = std::stoull(body.substr(6));
      else if (body.rfind("source ", 0) == 0)
        g.source = body.substr(7);
      continue;
    }
    std::smatch m;
    if (!seen_header) {
      if (!std::regex_match(line, header))
        throw ParseError(name, lineno, "expected 'OPENQASM 2.0;'");
      seen_header = true;
      continue;
    }
    if (std::regex_match(line, include))
      continue;
    if (std::regex_match(line, m, qreg)) {
      if (seen_qreg)
        throw ParseError(name, lineno, "only one register is supported");
      g.n_qubits = std::stoull(m[1]);
      seen_qreg = true;
      continue;
    }
    if (!std::regex_match(line, m, gate))
      throw ParseError(name, lineno, "unrecognized statement '" + line + "'");
    if (!seen_qreg)
      throw ParseError(name, lineno, "gate before register declaration");
    const std::string op = m[1];
    Gate gt;
    bool found = false;
    for (auto k : {GateKind::rx, GateKind::ry, GateKind::rz, GateKind::h,
                   GateKind::s, GateKind::sdg, GateKind::cx, GateKind::x})
      if (gate_name(k) == op) {
        gt.kind = k;
        found = true;
      }
    if (!found)
      throw ParseError(name, lineno, "unsupported gate '" + op + "'");
    if (is_rotation(gt.kind) != m[2].matched)
      throw ParseError(name, lineno, "angle mismatch for gate '" + op + "'");
    if ((gt.kind == GateKind::cx) != m[4].matched)
      throw ParseError(name, lineno, "operand count mismatch for gate '" + op + "'");
    if (m[2].matched) {
      try {
        std::size_t used = 0;
        const std::string a = m[2];
        gt.angle = std::stod(a, &used);
        if (used != a.size())
          throw std::invalid_argument(a);
      } catch (const std::exception &) {
        throw ParseError(name, lineno, "malformed angle");
      }
    }
    gt.q0 = std::stoull(m[3]);
    if (m[4].matched)
      gt.q1 = std::stoull(m[4]);
    if (gt.q0 >= g.n_qubits || (gt.kind == GateKind::cx && gt.q1 >= g.n_qubits))
      throw ParseError(name, lineno, "qubit index outside the register");
    g.gates.push_back(gt);
  }
  if (!seen_header)
    throw ParseError(name, lineno, "missing OPENQASM header");
  if (!seen_qreg)
    throw ParseError(name, lineno, "missing register declaration");
  try {
    g.validate();
  } catch (const StructureError &e) {
    throw ParseError(name, lineno, e.what());
  }
  return g;
}

} // namespace exasp
