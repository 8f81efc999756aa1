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

#include "cqed/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

namespace cqed {
namespace {

enum class Kind { kRate, kTime, kNumber, kInteger, kText, kList };

struct KeyInfo {
  const char* name;
  Kind kind;
};

const std::vector<KeyInfo>& key_table() {
  static const std::vector<KeyInfo> table = {
      {"system.g", Kind::kRate},
      {"system.delta_xi", Kind::kRate},
      {"system.t2_star", Kind::kTime},
      {"system.kappa", Kind::kRate},
      {"system.omega_q", Kind::kRate},
      {"schedule.n_p", Kind::kInteger},
      {"schedule.tau", Kind::kTime},
      {"schedule.tau_prime", Kind::kTime},
      {"schedule.sigma_f", Kind::kRate},
      {"schedule.t_p", Kind::kTime},
      {"schedule.g_off", Kind::kRate},
      {"schedule.phase_pattern", Kind::kText},
      {"readout.g_over_kappa", Kind::kNumber},
      {"readout.kappa_tau", Kind::kNumber},
      {"readout.kappa_t_f", Kind::kNumber},
      {"ensemble.n_qubits", Kind::kInteger},
      {"ensemble.coupling_spread", Kind::kNumber},
      {"numerics.quadrature_tol", Kind::kNumber},
      {"numerics.quadrature_nodes", Kind::kInteger},
      {"numerics.max_quadrature_nodes", Kind::kInteger},
      {"numerics.fock_dim", Kind::kInteger},
      {"numerics.step_tol", Kind::kNumber},
      {"numerics.max_halvings", Kind::kInteger},
      {"numerics.n_traj", Kind::kInteger},
      {"numerics.threads", Kind::kInteger},
      {"run.experiment", Kind::kText},
      {"run.seed", Kind::kInteger},
      {"run.output_dir", Kind::kText},
      {"run.grid", Kind::kList},
      {"run.series", Kind::kList},
  };
  return table;
}

const KeyInfo* find_key(const std::string& name) {
  for (const KeyInfo& k : key_table()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& key, const std::string& text) {
  Quantity q;
  try {
    q = parse_quantity(text);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
  if (q.dimension != 0) throw ConfigError(key + ": expected a dimensionless number, got '" + text + "'");
  return q.value;
}

long long parse_integer(const std::string& key, const std::string& text) {
  std::string t = trim(text);
  long long v = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::string cell;
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream in(s);
  while (in >> cell) out.push_back(parse_number(key, cell));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key + ": " + what);
}

}  // namespace

Quantity parse_quantity(const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw ConfigError("empty value");
  std::string l = lower(t);
  if (l == "inf" || l == "infinity" || l == "+inf") return {kInfinity, 0};
  const char* begin = t.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin) throw ConfigError("malformed number '" + text + "'");
  std::string unit = trim(std::string(end));
  static const std::map<std::string, Quantity> units = {
      {"", {1.0, 0}},
      {"Hz", {2.0 * std::numbers::pi, 1}},
      {"kHz", {2.0 * std::numbers::pi * 1e3, 1}},
      {"MHz", {2.0 * std::numbers::pi * 1e6, 1}},
      {"GHz", {2.0 * std::numbers::pi * 1e9, 1}},
      {"rad/s", {1.0, 1}},
      {"s", {1.0, -1}},
      {"ms", {1e-3, -1}},
      {"us", {1e-6, -1}},
      {"ns", {1e-9, -1}},
  };
  auto it = units.find(unit);
  if (it == units.end()) throw ConfigError("unknown unit '" + unit + "' in '" + text + "'");
  if (!std::isfinite(v)) throw ConfigError("non-finite value '" + text + "'");
  return {v * it->second.value, it->second.dimension};
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const KeyInfo& k : key_table()) out.emplace_back(k.name);
    return out;
  }();
  return keys;
}

Settings read_settings(const std::string& ini_text) {
  std::istringstream in(ini_text);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Settings out;
  for (const CLI::ConfigItem& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::string key;
    for (const std::string& p : item.parents) key += p + ".";
    key += item.name;
    if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
    std::string value;
    for (std::size_t i = 0; i < item.inputs.size(); ++i) value += (i ? " " : "") + item.inputs[i];
    out[key] = value;
  }
  return out;
}

Settings read_settings_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return read_settings(buf.str());
}

Config build_config(const Settings& settings) {
  for (const auto& [key, value] : settings) {
    if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
  }
  if (settings.count("system.delta_xi") && settings.count("system.t2_star")) {
    throw ConfigError("system.delta_xi and system.t2_star are mutually exclusive; set only one");
  }
  Config c;
  // Rates in rad/s per unit of g; zero while g is dimensionless.
  double g_scale = 0.0;
  if (auto it = settings.find("system.g"); it != settings.end()) {
    Quantity q;
    try {
      q = parse_quantity(it->second);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("system.g: ") + e.what());
    }
    require(q.dimension >= 0, "system.g", "must be a rate");
    if (q.dimension == 1) {
      require(q.value > 0.0, "system.g", "must be positive");
      g_scale = q.value;
      c.g = 1.0;
    } else {
      c.g = q.value;
    }
  }
  auto resolve = [&](const std::string& key, const std::string& text, Kind kind) {
    Quantity q;
    try {
      q = parse_quantity(text);
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
    if (q.dimension == 0) return q.value;
    bool ok = (kind == Kind::kRate && q.dimension == 1) || (kind == Kind::kTime && q.dimension == -1);
    require(ok, key, "unit has the wrong dimension");
    require(g_scale > 0.0, key, "a unit suffix needs system.g with a unit");
    return q.dimension == 1 ? q.value / g_scale : q.value * g_scale;
  };
  for (const auto& [key, text] : settings) {
    const KeyInfo& info = *find_key(key);
    if (key == "system.g") continue;
    double v = 0.0;
    long long n = 0;
    if (info.kind == Kind::kRate || info.kind == Kind::kTime) v = resolve(key, text, info.kind);
    if (info.kind == Kind::kNumber) v = parse_number(key, text);
    if (info.kind == Kind::kInteger) n = parse_integer(key, text);
    if (key == "system.delta_xi") c.delta_xi = v;
    else if (key == "system.t2_star") c.t2_star = v;
    else if (key == "system.kappa") c.kappa = v;
    else if (key == "system.omega_q") c.omega_q = v;
    else if (key == "schedule.n_p") c.n_p = static_cast<int>(n);
    else if (key == "schedule.tau") c.tau = v;
    else if (key == "schedule.tau_prime") c.tau_prime = v;
    else if (key == "schedule.sigma_f") c.sigma_f = v;
    else if (key == "schedule.t_p") c.t_p = v;
    else if (key == "schedule.g_off") c.g_off = v;
    else if (key == "schedule.phase_pattern") {
      try {
        c.phase_pattern = phase_pattern_from_string(trim(text));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(key + ": " + e.what());
      }
    } else if (key == "readout.g_over_kappa") c.g_over_kappa = v;
    else if (key == "readout.kappa_tau") c.kappa_tau = v;
    else if (key == "readout.kappa_t_f") c.kappa_t_f = v;
    else if (key == "ensemble.n_qubits") c.n_qubits = static_cast<int>(n);
    else if (key == "ensemble.coupling_spread") c.coupling_spread = v;
    else if (key == "numerics.quadrature_tol") c.quadrature_tol = v;
    else if (key == "numerics.quadrature_nodes") c.quadrature_nodes = static_cast<int>(n);
    else if (key == "numerics.max_quadrature_nodes") c.max_quadrature_nodes = static_cast<int>(n);
    else if (key == "numerics.fock_dim") c.fock_dim = static_cast<int>(n);
    else if (key == "numerics.step_tol") c.step_tol = v;
    else if (key == "numerics.max_halvings") c.max_halvings = static_cast<int>(n);
    else if (key == "numerics.n_traj") c.n_traj = static_cast<int>(n);
    else if (key == "numerics.threads") c.threads = static_cast<int>(n);
    else if (key == "run.experiment") c.experiment = trim(text);
    else if (key == "run.seed") {
      require(n >= 0, key, "must be >= 0");
      c.seed = static_cast<std::uint64_t>(n);
    } else if (key == "run.output_dir") c.output_dir = trim(text);
    else if (key == "run.grid") c.grid = parse_list(key, text);
    else if (key == "run.series") c.series = parse_list(key, text);
  }
  c.validate();
  return c;
}

Config parse_config_text(const std::string& ini_text) { return build_config(read_settings(ini_text)); }

void Config::validate() const {
  require(g > 0.0 && std::isfinite(g), "system.g", "must be positive");
  if (delta_xi && t2_star) {
    throw ConfigError("system.delta_xi and system.t2_star are mutually exclusive; set only one");
  }
  if (delta_xi) require(*delta_xi >= 0.0, "system.delta_xi", "must be >= 0");
  if (t2_star) require(*t2_star > 0.0, "system.t2_star", "must be positive");
  require(kappa >= 0.0, "system.kappa", "must be >= 0");
  require(omega_q > 0.0, "system.omega_q", "must be positive");
  require(n_p >= 2 && n_p % 2 == 0, "schedule.n_p", "must be an even integer >= 2");
  require(tau >= 0.0, "schedule.tau", "must be >= 0");
  require(tau_prime < 0.0 || tau == 0.0 || tau_prime <= tau, "schedule.tau_prime",
          "must not exceed schedule.tau");
  require(sigma_f > 0.0, "schedule.sigma_f", "must be positive");
  require(t_p >= 0.0, "schedule.t_p", "must be >= 0");
  require(g_off >= 0.0, "schedule.g_off", "must be >= 0");
  require(g_over_kappa > 0.0, "readout.g_over_kappa", "must be positive");
  require(kappa_tau > 0.0, "readout.kappa_tau", "must be positive");
  require(kappa_t_f >= 0.0, "readout.kappa_t_f", "must be >= 0");
  require(n_qubits >= 4, "ensemble.n_qubits", "must be >= 4");
  require(coupling_spread >= 0.0, "ensemble.coupling_spread", "must be >= 0");
  require(quadrature_tol > 0.0, "numerics.quadrature_tol", "must be positive");
  require(quadrature_nodes >= 2, "numerics.quadrature_nodes", "must be >= 2");
  require(max_quadrature_nodes >= quadrature_nodes, "numerics.max_quadrature_nodes",
          "must be >= numerics.quadrature_nodes");
  require(fock_dim == 0 || fock_dim >= 2, "numerics.fock_dim", "must be 0 (automatic) or >= 2");
  require(step_tol > 0.0, "numerics.step_tol", "must be positive");
  require(max_halvings >= 1, "numerics.max_halvings", "must be >= 1");
  require(n_traj >= 1, "numerics.n_traj", "must be >= 1");
  require(threads >= 0, "numerics.threads", "must be >= 0");
  for (double x : grid) require(std::isfinite(x), "run.grid", "values must be finite");
  for (double x : series) require(std::isfinite(x), "run.series", "values must be finite");
}

SystemParams Config::system() const {
  if (!delta_xi && !t2_star) {
    throw ConfigError("one of system.delta_xi or system.t2_star is required");
  }
  SystemParams p;
  p.g = g;
  p.delta_xi = delta_xi ? *delta_xi : SystemParams::delta_xi_from_t2_star(*t2_star);
  p.kappa = kappa;
  p.omega_q = omega_q;
  return p;
}

PulseSchedule Config::schedule() const {
  PulseSchedule s;
  s.n_p = n_p;
  s.tau = tau > 0.0 ? tau : std::numbers::pi / (g * n_p);
  s.tau_prime = tau_prime;
  s.sigma_f = sigma_f;
  s.t_p = t_p;
  s.g_off = g_off;
  s.pattern = phase_pattern;
  return s;
}

std::string Config::to_ini() const {
  std::ostringstream out;
  out << "[system]\n";
  out << "g = " << format_double(g) << "\n";
  if (delta_xi) out << "delta_xi = " << format_double(*delta_xi) << "\n";
  if (t2_star) out << "t2_star = " << format_double(*t2_star) << "\n";
  out << "kappa = " << format_double(kappa) << "\n";
  out << "omega_q = " << format_double(omega_q) << "\n";
  out << "\n[schedule]\n";
  out << "n_p = " << n_p << "\n";
  out << "tau = " << format_double(tau) << "\n";
  out << "tau_prime = " << format_double(tau_prime) << "\n";
  out << "sigma_f = " << format_double(sigma_f) << "\n";
  out << "t_p = " << format_double(t_p) << "\n";
  out << "g_off = " << format_double(g_off) << "\n";
  out << "phase_pattern = " << to_string(phase_pattern) << "\n";
  out << "\n[readout]\n";
  out << "g_over_kappa = " << format_double(g_over_kappa) << "\n";
  out << "kappa_tau = " << format_double(kappa_tau) << "\n";
  out << "kappa_t_f = " << format_double(kappa_t_f) << "\n";
  out << "\n[ensemble]\n";
  out << "n_qubits = " << n_qubits << "\n";
  out << "coupling_spread = " << format_double(coupling_spread) << "\n";
  out << "\n[numerics]\n";
  out << "quadrature_tol = " << format_double(quadrature_tol) << "\n";
  out << "quadrature_nodes = " << quadrature_nodes << "\n";
  out << "max_quadrature_nodes = " << max_quadrature_nodes << "\n";
  out << "fock_dim = " << fock_dim << "\n";
  out << "step_tol = " << format_double(step_tol) << "\n";
  out << "max_halvings = " << max_halvings << "\n";
  out << "n_traj = " << n_traj << "\n";
  out << "threads = " << threads << "\n";
  out << "\n[run]\n";
  if (!experiment.empty()) out << "experiment = " << experiment << "\n";
  out << "seed = " << seed << "\n";
  if (!output_dir.empty()) out << "output_dir = \"" << output_dir << "\"\n";
  if (!grid.empty()) out << "grid = " << join(grid) << "\n";
  if (!series.empty()) out << "series = " << join(series) << "\n";
  return out.str();
}

nlohmann::json Config::to_json() const {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(format_double(v)); };
  nlohmann::json j;
  j["system"] = {{"g", g}, {"kappa", kappa}, {"omega_q", num(omega_q)}};
  if (delta_xi) j["system"]["delta_xi"] = *delta_xi;
  if (t2_star) j["system"]["t2_star"] = *t2_star;
  j["schedule"] = {{"n_p", n_p},         {"tau", tau},     {"tau_prime", tau_prime},
                   {"sigma_f", num(sigma_f)}, {"t_p", t_p}, {"g_off", g_off},
                   {"phase_pattern", to_string(phase_pattern)}};
  j["readout"] = {{"g_over_kappa", g_over_kappa}, {"kappa_tau", kappa_tau}, {"kappa_t_f", kappa_t_f}};
  j["ensemble"] = {{"n_qubits", n_qubits}, {"coupling_spread", coupling_spread}};
  j["numerics"] = {{"quadrature_tol", quadrature_tol},
                   {"quadrature_nodes", quadrature_nodes},
                   {"max_quadrature_nodes", max_quadrature_nodes},
                   {"fock_dim", fock_dim},
                   {"step_tol", step_tol},
                   {"max_halvings", max_halvings},
                   {"n_traj", n_traj},
                   {"threads", threads}};
  j["run"] = {{"experiment", experiment}, {"seed", seed}, {"output_dir", output_dir},
              {"grid", grid},             {"series", series}};
  return j;
}

nlohmann::json manifest(const Config& config, const std::string& command) {
  nlohmann::json j;
  j["tool"] = "cqed-sim";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["config"] = config.to_json();
  j["config_ini"] = config.to_ini();
  return j;
}

}  // namespace cqed
