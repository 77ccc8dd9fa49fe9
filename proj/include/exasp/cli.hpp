/*******************************************************************************
 * Copyright (c) 2026 The exasp-sim Authors.                                   *
 * All rights reserved.                                                        *
 *                                                                             *
 * This source code and the accompanying materials are made available under    *
 * the terms of the Apache License 2.0 which accompanies this distribution.    *
 ******************************************************************************/
#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "exasp/ground_state.hpp"
#include "exasp/models.hpp"
#include "exasp/pathway.hpp"
#include "exasp/pauli_fierz.hpp"
#include "exasp/propagator.hpp"
#include "exasp/schedule.hpp"

namespace exasp::cli {

/// Bad or missing configuration value; the message names the key.
class ConfigError : public std::runtime_error {
public:
  ConfigError(const std::string &key, const std::string &msg)
      : std::runtime_error("config key '" + key + "': " + msg), key_(key) {}
  const std::string &key() const { return key_; }

private:
  std::string key_;
};

struct KeySpec {
  std::string_view key;
  std::string_view default_value;
  std::string_view help;
};

/// Every recognised configuration key with its default.
const std::vector<KeySpec> &known_keys();
/// "omega_max" -> "omega-max".
std::string flag_name(std::string_view key);
/// "omega_max" -> "EXASP_OMEGA_MAX".
std::string env_name(std::string_view key);

/// Flat key = value configuration. Later layers win: defaults, file,
/// environment, command-line flags.
class Config {
public:
  static Config from_text(std::string_view text, const std::string &name = "<config>");
  static Config from_file(const std::filesystem::path &path);

  void set(const std::string &key, const std::string &value);
  bool has(const std::string &key) const;
  /// Reads EXASP_<KEY> for every known key.
  void apply_environment();

  std::string str(const std::string &key) const;
  double real(const std::string &key) const;
  std::size_t count(const std::string &key) const;
  std::uint64_t u64(const std::string &key) const;
  bool flag(const std::string &key) const;
  std::array<double, 3> vec3(const std::string &key) const;

  const std::map<std::string, std::string> &values() const { return values_; }

private:
  std::map<std::string, std::string> values_;
};

// ---------------------------------------------------------------------------

ElectronicSystem build_system(const Config &c);
std::array<double, 3> polarization(const Config &c);

struct RunOutcome {
  PropagationTrace trace;
  std::size_t target_index = 0;
  double target_energy = 0.0;
  double omega_max = 0.0;
  double eps_initial = 0.0;
  double fid_raw = 0.0;
  double fid_post = 0.0;
  double p0 = 0.0;
  double eps_final = 0.0;
  double eps_final_post = 0.0;
  std::optional<double> time_bound;
  /// Serialized summary object.
  std::string summary_json;
};

/// One propagation as configured. Does not touch the filesystem except to
/// read inputs named by the config.
RunOutcome run(const Config &c);

/// Trace CSV with a header row and 17 significant digits.
void write_trace_csv(std::ostream &os, const PropagationTrace &trace);

struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};
/// "T=5,10,50" or "T=5:50:5" (inclusive numeric range).
SweepAxis parse_sweep_axis(std::string_view text);

/// Cross product of up to two axes, one CSV row per run in axis order.
void sweep(const Config &c, const std::vector<SweepAxis> &axes,
           std::ostream &csv);

/// Eigenvalue scan along the pathway as CSV.
void spectrum(const Config &c, std::ostream &csv);

/// BHPT optimization of the configured pp-tUPS ansatz; returns the
/// checkpoint and a JSON summary.
std::pair<TupsCheckpoint, std::string> ground_state(const Config &c);

/// QASM text for the configured Trotter evolution.
std::string emit_circuit(const Config &c);

/// Entry point behind the exasp executable.
int main(int argc, char **argv);

} // namespace exasp::cli
