// Copyright 2026 The cqed-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CQED_CONFIG_H_
#define CQED_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqed/params.h"

namespace cqed {

// Invalid configuration: unknown key, malformed value or violated
// constraint. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Fully resolved run configuration. Rates are in units of g and times in
// units of 1/g; the readout block uses kappa units (kappa = 1).
struct Config {
  std::string experiment;

  // [system]
  double g = 1.0;
  std::optional<double> delta_xi;
  std::optional<double> t2_star;  // g T2*
  double kappa = 0.0;
  double omega_q = kInfinity;

  // [schedule]
  int n_p = 100;
  double tau = 0.0;         // 0 selects pi/(g n_p)
  double tau_prime = -1.0;  // negative means tau
  double sigma_f = kInfinity;
  double t_p = 0.0;
  double g_off = 0.0;
  PhasePattern phase_pattern = PhasePattern::kFixed;

  // [readout]
  double g_over_kappa = 0.1;
  double kappa_tau = 0.2;
  double kappa_t_f = 0.0;  // 0 selects the optimal time

  // [ensemble]
  int n_qubits = 1000;
  double coupling_spread = 0.2;

  // [numerics]
  double quadrature_tol = 1e-9;
  int quadrature_nodes = 64;
  int max_quadrature_nodes = 4096;
  int fock_dim = 0;  // 0 selects the module default
  double step_tol = 1e-8;
  int max_halvings = 12;
  int n_traj = 100000;
  int threads = 0;

  // [run]
  std::uint64_t seed = 1;
  std::string output_dir;
  std::vector<double> grid;    // overrides the experiment's default grid
  std::vector<double> series;  // overrides the experiment's default series

  // Throws ConfigError naming the offending key.
  void validate() const;
  SystemParams system() const;
  PulseSchedule schedule() const;

  // Flat INI text with sections; parse_config_text(to_ini()) reproduces the
  // same Config exactly.
  std::string to_ini() const;
  nlohmann::json to_json() const;

  bool operator==(const Config&) const = default;
};

// Setting name "section.key" to raw value text, as read from a file or flags.
using Settings = std::map<std::string, std::string>;

// Every recognized "section.key".
const std::vector<std::string>& config_keys();

// INI text to settings; unknown sections or keys throw ConfigError.
Settings read_settings(const std::string& ini_text);
Settings read_settings_file(const std::string& path);

// Builds and validates a Config. Values accept unit suffixes: frequencies
// Hz, kHz, MHz, GHz (cycles, converted with 2 pi) or rad/s, times s, ms, us,
// ns. Once g carries a unit every suffixed value is converted to units of g;
// a suffix without a dimensionful g is an error. A bare t2_star is g T2*.
Config build_config(const Settings& settings);
Config parse_config_text(const std::string& ini_text);

// Quantity text to (value, dimension); dimension 0 = none, 1 = rate in
// rad/s, -1 = time in s.
struct Quantity {
  double value = 0.0;
  int dimension = 0;
};
Quantity parse_quantity(const std::string& text);

// Resolved configuration plus tool identification, written next to results.
nlohmann::json manifest(const Config& config, const std::string& command);

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace cqed

#endif  // CQED_CONFIG_H_
