/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#include "exasp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "exasp/analysis.hpp"
#include "exasp/circuit.hpp"
#include "exasp/pathway.hpp"

namespace exasp::cli {

namespace {

using json = nlohmann::ordered_json;

const std::vector<KeySpec> kKeys = {
    {"model", "twolevel", "twolevel, hubbard or molecule"},
    {"epsilon", "1", "two-level splitting"},
    {"g", "0", "two-level off-diagonal coupling"},
    {"mu", "1", "two-level transition dipole"},
    {"sites", "4", "Hubbard chain length"},
    {"t", "1", "Hubbard hopping"},
    {"u", "4", "Hubbard on-site repulsion"},
    {"electrons", "0", "Hubbard electron count (0: half filling)"},
    {"integrals", "", "FCIDUMP-style integrals file"},
    {"dipoles", "", "dipole integrals file"},
    {"polarization", "0,0,1", "cavity polarization vector"},
    {"omega_max", "auto", "final photon frequency, or auto for twice the bright gap"},
    {"lambda_max", "1", "peak coupling strength"},
    {"T", "10", "total evolution time"},
    {"dt", "0.1", "time step"},
    {"method", "exact", "exact or trotter"},
    {"record_every", "0", "trace stride (0: automatic)"},
    {"target", "bright", "target eigenstate index, or bright"},
    {"initial", "exact", "initial electronic state: exact or tups"},
    {"checkpoint", "", "pp-tUPS checkpoint file"},
    {"layers", "1", "pp-tUPS layers"},
    {"seed", "0", "random seed"},
    {"replicas", "8", "BHPT replicas"},
    {"bh_steps", "250", "basin-hopping steps per replica"},
    {"t_min", "1e-4", "lowest replica temperature"},
    {"t_max", "1e-2", "highest replica temperature"},
    {"kick", "0.3", "basin-hopping perturbation half-width"},
    {"swap_probability", "0.1", "replica exchange probability per step"},
    {"max_iterations", "2000", "L-BFGS iteration cap"},
    {"rms_tolerance", "1e-5", "L-BFGS RMS gradient tolerance"},
    {"krylov_tol", "1e-12", "Krylov residual tolerance"},
    {"time_bound", "auto", "adiabatic time bound in the summary: auto, on or off"},
    {"n_states", "8", "eigenvalues per spectrum point"},
    {"n_points", "101", "spectrum grid size"},
    {"optimize", "true", "peephole-optimize emitted circuits"},
    {"threads", "0", "sweep workers (0: hardware concurrency)"},
    {"output", "", "primary output file (- for stdout)"},
    {"summary", "", "summary JSON file (- for stdout)"},
    {"sweep1", "", "first sweep axis, key=v1,v2,..."},
    {"sweep2", "", "second sweep axis"},
};

const KeySpec *find_key(std::string_view key) {
  for (const auto &k : kKeys)
    if (k.key == key)
      return &k;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json num(double v) {
  if (std::isfinite(v))
    return v;
  return fmt(v);
}

} // namespace

const std::vector<KeySpec> &known_keys() { return kKeys; }

std::string flag_name(std::string_view key) {
  std::string s(key);
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

std::string env_name(std::string_view key) {
  std::string s = "EXASP_";
  for (char ch : key)
    s += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

Config Config::from_text(std::string_view text, const std::string &name) {
  Config c;
  std::istringstream is{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
      line.erase(hash);
    const std::string t = trim(line);
    if (t.empty())
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(name, lineno, "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (!find_key(key))
      throw ParseError(name, lineno, "unknown key '" + key + "'");
    c.values_[key] = trim(t.substr(eq + 1));
  }
  return c;
}

Config Config::from_file(const std::filesystem::path &path) {
  std::ifstream is(path);
  if (!is)
    throw std::runtime_error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return from_text(ss.str(), path.string());
}

void Config::set(const std::string &key, const std::string &value) {
  if (!find_key(key))
    throw ConfigError(key, "unknown key");
  values_[key] = value;
}

bool Config::has(const std::string &key) const { return values_.count(key) > 0; }

void Config::apply_environment() {
  for (const auto &k : kKeys)
    if (const char *v = std::getenv(env_name(k.key).c_str()))
      values_[std::string(k.key)] = v;
}

std::string Config::str(const std::string &key) const {
  if (auto it = values_.find(key); it != values_.end())
    return it->second;
  if (const auto *k = find_key(key))
    return std::string(k->default_value);
  throw ConfigError(key, "unknown key");
}

double Config::real(const std::string &key) const {
  const std::string v = str(key);
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size() && std::isfinite(d))
      return d;
  } catch (const std::exception &) {
  }
  throw ConfigError(key, "expected a finite number, got '" + v + "'");
}

std::size_t Config::count(const std::string &key) const {
  return static_cast<std::size_t>(u64(key));
}

std::uint64_t Config::u64(const std::string &key) const {
  const std::string v = str(key);
  if (!v.empty() && std::all_of(v.begin(), v.end(),
                                [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
    try {
      return std::stoull(v);
    } catch (const std::exception &) {
    }
  }
  throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
}

bool Config::flag(const std::string &key) const {
  const std::string v = str(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on")
    return true;
  if (v == "false" || v == "0" || v == "no" || v == "off")
    return false;
  throw ConfigError(key, "expected a boolean, got '" + v + "'");
}

std::array<double, 3> Config::vec3(const std::string &key) const {
  const std::string v = str(key);
  std::array<double, 3> out{};
  std::istringstream is(v);
  std::string part;
  std::size_t i = 0;
  while (std::getline(is, part, ',')) {
    if (i >= 3)
      throw ConfigError(key, "expected three comma-separated numbers");
    try {
      std::size_t used = 0;
      const std::string t = trim(part);
      out[i] = std::stod(t, &used);
      if (used != t.size())
        throw std::invalid_argument(t);
    } catch (const std::exception &) {
      throw ConfigError(key, "malformed component '" + part + "'");
    }
    ++i;
  }
  if (i != 3)
    throw ConfigError(key, "expected three comma-separated numbers");
  return out;
}

// ---------------------------------------------------------------------------

ElectronicSystem build_system(const Config &c) {
  const std::string model = c.str("model");
  if (model == "twolevel") {
    return build_two_level({c.real("epsilon"), c.real("g"), c.real("mu")});
  }
  if (model == "hubbard") {
    HubbardParams p;
    p.n_sites = c.count("sites");
    p.t = c.real("t");
    p.u = c.real("u");
    p.n_electrons = c.count("electrons");
    return build_hubbard(p);
  }
  if (model == "molecule") {
    const std::string ints = c.str("integrals"), dips = c.str("dipoles");
    if (ints.empty())
      throw ConfigError("integrals", "required for model molecule");
    if (dips.empty())
      throw ConfigError("dipoles", "required for model molecule");
    return build_molecular(parse_integrals_file(ints, dips));
  }
  throw ConfigError("model", "expected twolevel, hubbard or molecule, got '" +
                                 model + "'");
}

std::array<double, 3> polarization(const Config &c) {
  const auto e = c.vec3("polarization");
  if (e[0] == 0.0 && e[1] == 0.0 && e[2] == 0.0)
    throw ConfigError("polarization", "must be non-zero");
  return e;
}

namespace {

Method method_of(const Config &c) {
  try {
    return parse_method(c.str("method"));
  } catch (const std::invalid_argument &e) {
    throw ConfigError("method", e.what());
  }
}

double omega_max_of(const Config &c, const ElectronicSystem &sys,
                    const std::array<double, 3> &e) {
  if (c.str("omega_max") == "auto")
    return estimate_omega_max(sys, e);
  const double w = c.real("omega_max");
  if (!(w > 0.0))
    throw ConfigError("omega_max", "must be positive");
  return w;
}

PathwaySchedule schedule_of(const Config &c, double omega_max) {
  const double T = c.real("T"), dt = c.real("dt");
  if (!(T > 0.0))
    throw ConfigError("T", "must be positive");
  if (!(dt > 0.0))
    throw ConfigError("dt", "must be positive");
  return PathwaySchedule::from_time_step(omega_max, c.real("lambda_max"), T, dt);
}

std::size_t target_of(const Config &c, const ElectronicSystem &sys,
                      const Spectrum &spec, const std::array<double, 3> &e) {
  const std::string t = c.str("target");
  if (t == "bright")
    return find_first_bright_state(spec, project_dipole(sys, e)).index;
  const std::size_t j = c.count("target");
  if (j >= spec.size())
    throw ConfigError("target", "index outside the spectrum");
  return j;
}

BHPTConfig bhpt_of(const Config &c) {
  BHPTConfig b;
  b.n_replicas = c.count("replicas");
  b.n_steps = c.count("bh_steps");
  b.t_min = c.real("t_min");
  b.t_max = c.real("t_max");
  b.kick = c.real("kick");
  b.swap_probability = c.real("swap_probability");
  b.max_iterations = c.count("max_iterations");
  b.rms_tolerance = c.real("rms_tolerance");
  b.seed = c.u64("seed");
  b.n_threads = 1;
  return b;
}

TupsAnsatz ansatz_of(const Config &c, const ElectronicSystem &sys) {
  if (sys.kind == ModelKind::two_level)
    throw ConfigError("model", "pp-tUPS needs a fermionic model");
  const std::size_t ne = sys.sector ? sys.sector->n_electrons : 0;
  return TupsAnsatz(sys.n_qubits / 2, c.count("layers"), ne);
}

} // namespace

RunOutcome run(const Config &c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sys = build_system(c);
  const auto e = polarization(c);
  const auto cs = couple(sys, e);
  const auto el = exact_diagonalize(sys);
  const Method method = method_of(c);

  RunOutcome out;
  out.omega_max = omega_max_of(c, sys, e);
  out.target_index = target_of(c, sys, el, e);
  out.target_energy = el.energies[out.target_index];
  const auto sched = schedule_of(c, out.omega_max);

  StateVector exact_ground =
      sys.kind == ModelKind::two_level
          ? two_level_ground_state(c.real("epsilon"), c.real("g"))
          : el.states[0];
  StateVector ground = exact_ground;
  const std::string initial = c.str("initial");
  json tups;
  if (initial == "tups") {
    const auto a = ansatz_of(c, sys);
    std::vector<double> params;
    if (const auto path = c.str("checkpoint"); !path.empty()) {
      const auto chk = read_checkpoint_file(path);
      if (chk.n_orbitals != a.n_orbitals() || chk.n_electrons != a.n_electrons())
        throw ConfigError("checkpoint", "ansatz shape does not match the model");
      params = chk.params;
      tups["layers"] = chk.n_layers;
      tups["checkpoint"] = path;
      ground = apply_ansatz(TupsAnsatz(chk.n_orbitals, chk.n_layers, chk.n_electrons),
                            params);
    } else {
      const auto r = optimize(a, sys.h_e, bhpt_of(c), exact_ground);
      tups["layers"] = a.n_layers();
      tups["energy"] = num(r.energy);
      tups["rms_gradient"] = num(r.rms_gradient);
      tups["non_converged"] = r.non_converged;
      ground = apply_ansatz(a, r.params);
    }
  } else if (initial != "exact") {
    throw ConfigError("initial", "expected exact or tups, got '" + initial + "'");
  }
  out.eps_initial = initial_error(exact_ground, ground);

  EvolveOptions opts;
  opts.method = method;
  opts.record_every = c.count("record_every");
  opts.target = el.states[out.target_index];
  opts.krylov.tolerance = c.real("krylov_tol");
  const auto res = evolve(cs, sched, prepare_initial(cs, ground), opts);
  out.trace = res.trace;

  const auto rep = fidelity_report(res.final_state, cs, el.states[out.target_index]);
  out.fid_raw = rep.fid_raw;
  out.fid_post = rep.fid_postselected;
  out.p0 = rep.p0;
  out.eps_final = rep.eps_final;
  out.eps_final_post = rep.eps_final_post;

  const std::string tb = c.str("time_bound");
  if (tb != "auto" && tb != "on" && tb != "off")
    throw ConfigError("time_bound", "expected auto, on or off");
  if (tb == "on" || (tb == "auto" && cs.sector_basis().size() <= 256)) {
    out.time_bound = adiabatic_time_bound(cs, sched).value;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto &last = out.trace.rows.back();
  json j;
  j["model"] = c.str("model");
  j["method"] = std::string(to_string(method));
  json params;
  for (const auto &[k, v] : c.values())
    params[k] = v;
  j["config"] = params;
  j["seed"] = c.u64("seed");
  j["omega_max"] = num(out.omega_max);
  j["lambda_max"] = num(sched.lambda_max());
  j["T"] = num(sched.total_time());
  j["dt"] = num(sched.dt());
  j["n_steps"] = sched.n_steps();
  j["polarization"] = cs.polarization();
  j["target_index"] = out.target_index;
  j["target_energy"] = num(out.target_energy);
  j["ground_energy"] = num(el.energies[0]);
  j["initial"] = initial;
  if (!tups.empty())
    j["tups"] = tups;
  j["eps_initial"] = num(out.eps_initial);
  j["final"] = {{"e_total", num(last.e_total)},
                {"e_electronic", num(last.e_electronic)},
                {"e_postselected", num(last.e_postselected)},
                {"p_photon0", num(rep.p0)},
                {"fid_raw", num(rep.fid_raw)},
                {"fid_postselected", num(rep.fid_postselected)},
                {"eps_final", num(rep.eps_final)},
                {"eps_final_post", num(rep.eps_final_post)}};
  j["global_phase"] = num(res.global_phase);
  if (out.time_bound)
    j["adiabatic_time_bound"] = num(*out.time_bound);
  j["wall_time_s"] = wall;
  out.summary_json = j.dump(2);
  return out;
}

void write_trace_csv(std::ostream &os, const PropagationTrace &trace) {
  os << "step,s,omega,lambda,e_total,e_electronic,e_postselected,p_photon0,"
        "fid_target_raw,fid_target_post,fid_initial\n";
  for (const auto &r : trace.rows)
    os << r.step << ',' << fmt(r.s) << ',' << fmt(r.omega) << ','
       << fmt(r.lambda) << ',' << fmt(r.e_total) << ',' << fmt(r.e_electronic)
       << ',' << fmt(r.e_postselected) << ',' << fmt(r.p_photon0) << ','
       << fmt(r.fid_target_raw) << ',' << fmt(r.fid_target_post) << ','
       << fmt(r.fid_initial) << '\n';
}

SweepAxis parse_sweep_axis(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("sweep", "expected key=values, got '" + std::string(text) + "'");
  SweepAxis a;
  a.key = trim(text.substr(0, eq));
  if (!find_key(a.key) || a.key.rfind("sweep", 0) == 0)
    throw ConfigError("sweep", "cannot sweep key '" + a.key + "'");
  const std::string rhs = trim(text.substr(eq + 1));
  const auto colon = std::count(rhs.begin(), rhs.end(), ':');
  if (colon == 2) {
    double v[3];
    std::istringstream is(rhs);
    std::string part;
    for (double &x : v) {
      std::getline(is, part, ':');
      try {
        x = std::stod(trim(part));
      } catch (const std::exception &) {
        throw ConfigError(a.key, "malformed range '" + rhs + "'");
      }
    }
    if (!(v[2] > 0.0))
      throw ConfigError(a.key, "range step must be positive");
    const std::size_t n =
        v[1] < v[0] ? 0
                    : static_cast<std::size_t>(std::floor((v[1] - v[0]) / v[2] + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i)
      a.values.push_back(fmt(v[0] + static_cast<double>(i) * v[2]));
  } else {
    std::istringstream is(rhs);
    std::string part;
    while (std::getline(is, part, ','))
      if (auto t = trim(part); !t.empty())
        a.values.push_back(t);
  }
  if (a.values.empty())
    throw ConfigError(a.key, "empty sweep range");
  return a;
}

void sweep(const Config &c, const std::vector<SweepAxis> &axes,
           std::ostream &csv) {
  if (axes.empty() || axes.size() > 2)
    throw ConfigError("sweep", "expected one or two sweep axes");
  if (axes.size() == 2 && axes[0].key == axes[1].key)
    throw ConfigError("sweep", "axes must sweep different keys");
  std::vector<Config> runs;
  const std::size_t n1 = axes[0].values.size();
  const std::size_t n2 = axes.size() > 1 ? axes[1].values.size() : 1;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n2; ++k) {
      Config r = c;
      r.set(axes[0].key, axes[0].values[i]);
      if (axes.size() > 1)
        r.set(axes[1].key, axes[1].values[k]);
      runs.push_back(std::move(r));
    }

  std::vector<std::optional<RunOutcome>> results(runs.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::size_t workers = c.count("threads");
  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, runs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < runs.size();) {
      try {
        results[i] = run(runs[i]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure)
          failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  if (failure)
    std::rethrow_exception(failure);

  csv << "run";
  for (const auto &a : axes)
    csv << ',' << a.key;
  csv << ",T,dt,n_steps,omega_max,lambda_max,method,initial,layers,target_index,"
         "target_energy,eps_initial,e_total,e_electronic,e_postselected,"
         "p_photon0,fid_raw,fid_post,eps_final,eps_final_post,time_bound\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto &r = runs[i];
    const auto &o = *results[i];
    const auto &last = o.trace.rows.back();
    csv << i;
    for (const auto &a : axes)
      csv << ',' << r.str(a.key);
    const double T = r.real("T");
    const auto sched = PathwaySchedule::from_time_step(o.omega_max, r.real("lambda_max"),
                                                       T, r.real("dt"));
    csv << ',' << fmt(T) << ',' << fmt(sched.dt()) << ',' << sched.n_steps() << ','
        << fmt(o.omega_max) << ',' << fmt(sched.lambda_max()) << ','
        << r.str("method") << ',' << r.str("initial") << ',' << r.str("layers")
        << ',' << o.target_index << ',' << fmt(o.target_energy) << ','
        << fmt(o.eps_initial) << ',' << fmt(last.e_total) << ','
        << fmt(last.e_electronic) << ',' << fmt(last.e_postselected) << ','
        << fmt(o.p0) << ',' << fmt(o.fid_raw) << ',' << fmt(o.fid_post) << ','
        << fmt(o.eps_final) << ',' << fmt(o.eps_final_post) << ','
        << (o.time_bound ? fmt(*o.time_bound) : std::string("nan")) << '\n';
  }
}

void spectrum(const Config &c, std::ostream &csv) {
  const auto sys = build_system(c);
  const auto e = polarization(c);
  const auto cs = couple(sys, e);
  const auto sched = schedule_of(c, omega_max_of(c, sys, e));
  const std::size_t n_states = c.count("n_states");
  const auto pts = pathway_spectrum(cs, sched, c.count("n_points"), n_states);
  const std::size_t n_e = pts.front().energies.size();
  const std::size_t n_w = pts.front().diabatic_weights.size() / 2;
  csv << "s,omega,lambda,followed_index,followed_energy";
  for (std::size_t k = 0; k < n_e; ++k)
    csv << ",e" << k;
  for (std::size_t k = 0; k < n_w; ++k)
    csv << ",w" << k << "_0,w" << k << "_1";
  csv << '\n';
  for (const auto &p : pts) {
    csv << fmt(p.s) << ',' << fmt(p.omega) << ',' << fmt(p.lambda) << ','
        << p.followed_index << ',' << fmt(p.followed_energy);
    for (double v : p.energies)
      csv << ',' << fmt(v);
    for (double v : p.diabatic_weights)
      csv << ',' << fmt(v);
    csv << '\n';
  }
}

std::pair<TupsCheckpoint, std::string> ground_state(const Config &c) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sys = build_system(c);
  const auto a = ansatz_of(c, sys);
  const auto cfg = bhpt_of(c);
  const auto r = optimize(a, sys, cfg);

  TupsCheckpoint chk;
  chk.n_orbitals = a.n_orbitals();
  chk.n_layers = a.n_layers();
  chk.n_electrons = a.n_electrons();
  chk.energy = r.energy;
  chk.seed = cfg.seed;
  chk.params = r.params;

  json j;
  j["model"] = c.str("model");
  j["n_orbitals"] = a.n_orbitals();
  j["layers"] = a.n_layers();
  j["n_params"] = a.n_params();
  j["seed"] = cfg.seed;
  j["replicas"] = cfg.n_replicas;
  j["bh_steps"] = cfg.n_steps;
  j["energy"] = num(r.energy);
  j["rms_gradient"] = num(r.rms_gradient);
  if (r.exact_energy)
    j["exact_energy"] = num(*r.exact_energy);
  if (r.fidelity) {
    j["fidelity"] = num(*r.fidelity);
    j["eps_initial"] = num(1.0 - *r.fidelity);
  }
  j["local_minimizations"] = r.local_minimizations;
  j["non_converged"] = r.non_converged;
  j["swaps_attempted"] = r.swaps_attempted;
  j["swaps_accepted"] = r.swaps_accepted;
  j["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {chk, j.dump(2)};
}

std::string emit_circuit(const Config &c) {
  const auto sys = build_system(c);
  const auto e = polarization(c);
  const auto cs = couple(sys, e);
  const auto sched = schedule_of(c, omega_max_of(c, sys, e));
  const GateList prep = sys.kind == ModelKind::two_level
                            ? two_level_ground_prep(c.real("epsilon"), c.real("g"))
                            : photon_prep(cs);
  GateList g = emit_trotter_circuit(cs, sched, prep);
  if (c.flag("optimize"))
    g = peephole_optimize(g);
  return write_qasm(g);
}

// ---------------------------------------------------------------------------

namespace {

template <class Fn> void write_to(const std::string &path, Fn &&fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os)
    throw std::runtime_error("cannot write " + path);
  fn(os);
  if (!os)
    throw std::runtime_error("error while writing " + path);
}

std::string or_default(const Config &c, const std::string &key,
                       const std::string &fallback) {
  const std::string v = c.str(key);
  return v.empty() ? fallback : v;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Excited adiabatic state preparation simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> flags;
  std::vector<std::string> sweep_axes;
  std::vector<std::pair<CLI::App *, std::vector<CLI::Option *>>> subs;

  const std::pair<const char *, const char *> names[] = {
      {"run", "propagate one configuration and write trace and summary"},
      {"sweep", "cross-product parameter sweep, one CSV row per run"},
      {"spectrum", "eigenvalues along the pathway"},
      {"ground-state", "optimize a pp-tUPS ground state"},
      {"emit-circuit", "write the Trotter circuit as OpenQASM"},
  };
  for (const auto &[name, help] : names) {
    auto *sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value configuration file");
    std::vector<CLI::Option *> opts;
    for (const auto &k : kKeys) {
      if (k.key.rfind("sweep", 0) == 0)
        continue;
      std::string help_text(k.help);
      if (!k.default_value.empty())
        help_text += " [" + std::string(k.default_value) + "]";
      opts.push_back(sub->add_option("--" + flag_name(k.key),
                                     flags[std::string(k.key)], help_text));
    }
    if (std::string_view(name) == "sweep")
      sub->add_option("--sweep", sweep_axes, "swept axis key=v1,v2,... (at most two)");
    subs.emplace_back(sub, std::move(opts));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  }

  try {
    Config c = config_path.empty() ? Config{} : Config::from_file(config_path);
    c.apply_environment();
    for (const auto &[sub, opts] : subs)
      if (sub->parsed())
        for (auto *o : opts)
          if (o->count() > 0) {
            std::string key = o->get_name().substr(2);
            std::replace(key.begin(), key.end(), '-', '_');
            c.set(key, flags[key]);
          }

    const auto *sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "run") {
      const auto out = run(c);
      write_to(or_default(c, "output", "trace.csv"),
               [&](std::ostream &os) { write_trace_csv(os, out.trace); });
      write_to(or_default(c, "summary", "summary.json"),
               [&](std::ostream &os) { os << out.summary_json << '\n'; });
    } else if (name == "sweep") {
      std::vector<SweepAxis> axes;
      for (const auto &s : sweep_axes)
        axes.push_back(parse_sweep_axis(s));
      if (axes.empty())
        for (const char *k : {"sweep1", "sweep2"})
          if (!c.str(k).empty())
            axes.push_back(parse_sweep_axis(c.str(k)));
      write_to(or_default(c, "output", "sweep.csv"),
               [&](std::ostream &os) { sweep(c, axes, os); });
    } else if (name == "spectrum") {
      write_to(or_default(c, "output", "spectrum.csv"),
               [&](std::ostream &os) { spectrum(c, os); });
    } else if (name == "ground-state") {
      const auto [chk, summary] = ground_state(c);
      write_to(or_default(c, "checkpoint", "tups.chk"),
               [&](std::ostream &os) { write_checkpoint(os, chk); });
      write_to(or_default(c, "summary", "-"),
               [&](std::ostream &os) { os << summary << '\n'; });
    } else if (name == "emit-circuit") {
      const std::string text = emit_circuit(c);
      write_to(or_default(c, "output", "-"),
               [&](std::ostream &os) { os << text; });
    }
  } catch (const ConfigError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

} // namespace exasp::cli
