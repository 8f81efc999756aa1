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

// Command-line entry point: parses configuration, dispatches to the
// simulation modules and writes results plus a manifest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cqed/config.h"
#include "cqed/ensemble.h"
#include "cqed/experiments.h"
#include "cqed/lindblad.h"
#include "cqed/pulses.h"
#include "cqed/readout.h"
#include "cqed/transfer.h"

namespace {

using cqed::Config;
using cqed::ConfigError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

constexpr const char* kOutputDirEnv = "CQED_SIM_OUTPUT_DIR";

std::string flag_name(const std::string& key) {
  std::string name = key.substr(key.find('.') + 1);
  for (char& c : name) c = c == '_' ? '-' : c;
  return "--" + name;
}

std::filesystem::path output_dir(const Config& config) {
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "cqed_out";
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_manifest(const std::filesystem::path& dir, const Config& config, const std::string& command) {
  write_text(dir / "manifest.json", cqed::manifest(config, command).dump(2) + "\n");
}

std::filesystem::path prepare(const Config& config, const std::string& command) {
  std::filesystem::path dir = output_dir(config);
  std::filesystem::create_directories(dir);
  write_manifest(dir, config, command);
  return dir;
}

cqed::MasterOptions master_options(const Config& c) {
  cqed::MasterOptions o;
  o.fock_dim = c.fock_dim;
  o.quadrature.tol = c.quadrature_tol;
  o.quadrature.start_nodes = c.quadrature_nodes;
  o.quadrature.max_nodes = c.max_quadrature_nodes;
  o.steps.tol = c.step_tol;
  o.steps.max_halvings = c.max_halvings;
  return o;
}

cqed::QuadraturePolicy quadrature(const Config& c) {
  cqed::QuadraturePolicy q;
  q.tol = c.quadrature_tol;
  q.start_nodes = c.quadrature_nodes;
  q.max_nodes = c.max_quadrature_nodes;
  return q;
}

cqed::HamiltonianVariant schedule_variant(const Config& c) {
  if (c.t_p > 0.0) return cqed::HamiltonianVariant::kFiniteDuration;
  if (std::isfinite(c.sigma_f) || std::isfinite(c.omega_q)) return cqed::HamiltonianVariant::kCounterRotating;
  return cqed::HamiltonianVariant::kIdeal;
}

json master_json(const cqed::MasterResult& r) {
  return {{"fidelity", r.fidelity}, {"error", 1.0 - r.fidelity}, {"nodes", r.nodes},
          {"fock_dim", r.fock_dim}, {"converged", r.converged}};
}

int emit(const std::filesystem::path& dir, const std::string& name, const json& result) {
  write_text(dir / (name + ".json"), result.dump(2) + "\n");
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_transfer(const Config& c, const std::string& method, const std::string& variant_name) {
  cqed::SystemParams params = c.system();
  cqed::PulseSchedule sched = c.schedule();
  sched.validate();
  auto dir = prepare(c, "transfer");
  json out;
  out["n_p"] = sched.n_p;
  out["tau"] = sched.tau;
  if (method == "exact" || method == "all") {
    auto r = cqed::transfer_fidelity_exact(params, sched.n_p, sched.tau, quadrature(c));
    out["exact"] = {{"fidelity", r.fidelity}, {"error", 1.0 - r.fidelity}, {"nodes", r.nodes},
                    {"converged", r.converged}};
  }
  if (method == "asymptotic" || method == "all") {
    out["asymptotic"] = {{"error", cqed::transfer_error_asymptotic(params, sched.n_p)},
                         {"saturation_error", cqed::saturation_error(params)}};
  }
  if (method == "master" || method == "all") {
    auto variant = variant_name.empty() ? schedule_variant(c) : cqed::variant_from_string(variant_name);
    out["master"] = master_json(cqed::transfer_fidelity_master(params, sched, variant, master_options(c)));
    out["master"]["variant"] = cqed::to_string(variant);
  }
  return emit(dir, "transfer", out);
}

int cmd_ensemble(const Config& c) {
  cqed::SystemParams params = c.system();
  cqed::PulseSchedule sched = c.schedule();
  const int n = c.n_qubits;
  auto dir = prepare(c, "ensemble");
  cqed::EnsembleSpec ens =
      cqed::sample_ensemble(n, params.g / std::sqrt(double(n)), params.delta_xi, c.coupling_spread, c.seed);
  cqed::CollectiveOverlaps ov = cqed::collective_overlaps(ens);
  cqed::FourModeModel model = cqed::four_mode_model(ens, sched.tau);
  cqed::DoubletEnergies e = cqed::doublet_energies(model);
  json out;
  out["n_qubits"] = n;
  out["g_ens"] = ens.g_ens();
  out["tau"] = sched.tau;
  out["overlap_s"] = ov.s;
  out["doublets"] = {{"bright_plus", e.bright_plus}, {"bright_minus", e.bright_minus},
                     {"dark_plus", e.dark_plus},     {"dark_minus", e.dark_minus}};
  out["couplings"] = {{"omega_plus", model.omega_plus}, {"omega_minus", model.omega_minus},
                      {"omega_prime_plus", model.omega_prime_plus},
                      {"omega_prime_minus", model.omega_prime_minus}};
  out["transfer_error_formula"] = cqed::ensemble_transfer_error(ens.g_ens(), params.delta_xi, sched.n_p);
  out["transfer_error_four_mode"] = 1.0 - cqed::ensemble_transfer_fidelity_numeric(model, sched.n_p);
  {
    std::ofstream rec(dir / "ensemble.txt");
    ens.write(rec);
  }
  return emit(dir, "ensemble", out);
}

int cmd_controls(const Config& c, double epsilon) {
  cqed::SystemParams params = c.system();
  cqed::PulseSchedule sched = c.schedule();
  auto dir = prepare(c, "controls");
  json out;
  if (std::isfinite(sched.sigma_f)) {
    if (c.tau == 0.0) {
      sched.tau = cqed::solve_filtered_tau(params.g, sched.n_p, sched.sigma_f, sched.t_p);
    }
    if (sched.tau_prime < 0.0) sched.tau_prime = sched.tau - cqed::rise_time(sched.sigma_f);
    out["rise_time"] = cqed::rise_time(sched.sigma_f);
    out["mean_coupling"] = cqed::mean_coupling(params.g, sched.tau, sched.tau_prime, sched.sigma_f);
  }
  sched.validate();
  out["tau"] = sched.tau;
  out["tau_prime"] = sched.width();
  out["pulse_error_constant"] = cqed::pulse_error_constant();
  if (epsilon != 0.0) out["pulse_error_correction"] = cqed::pulse_error_correction(epsilon, params);
  auto variant = schedule_variant(c);
  out["master"] = master_json(cqed::transfer_fidelity_master(params, sched, variant, master_options(c)));
  out["master"]["variant"] = cqed::to_string(variant);
  out["ideal_exact_error"] =
      1.0 - cqed::transfer_fidelity_exact(params, sched.n_p, cqed::optimal_tau(params.g, sched.n_p),
                                          quadrature(c))
                .fidelity;
  return emit(dir, "controls", out);
}

json readout_json(const cqed::ReadoutResult& r) {
  return {{"t_f", r.t_f}, {"X", r.X}, {"Xi", r.Xi}, {"snr", r.snr}, {"method", cqed::to_string(r.method)}};
}

int cmd_readout(const Config& c, bool monte_carlo) {
  cqed::ReadoutConfig cfg;
  cfg.kappa = 1.0;
  cfg.g = c.g_over_kappa;
  cfg.tau = c.kappa_tau;
  cfg.t_f = c.kappa_t_f > 0.0 ? c.kappa_t_f : 1.0;
  cfg.validate();
  auto dir = prepare(c, "readout");
  const bool analytic = cfg.in_convergence_domain();
  if (!analytic) {
    std::cerr << "warning: kappa tau = " << cfg.tau
              << " exceeds the convergence domain kappa tau <= pi/2 of the averaged generator;"
                 " running numeric paths only\n";
  }
  cqed::NumericReadoutOptions options;
  if (c.fock_dim > 0) options.fock_dim = c.fock_dim;
  json out;
  out["g_over_kappa"] = cfg.g;
  out["kappa_tau"] = cfg.tau;
  if (c.kappa_t_f == 0.0) {
    cqed::ReadoutResult best = cqed::max_snr_numeric(cfg, options);
    cfg.t_f = best.t_opt;
    out["max_snr_numeric"] = readout_json(best);
  }
  out["numeric"] = readout_json(cqed::signal_noise_numeric(cfg, options));
  if (analytic) {
    const double gamma = cqed::gamma_switching(cfg);
    cqed::OptimalSnr opt = cqed::optimal_snr(cfg, gamma);
    out["gamma"] = gamma;
    out["analytic"] = readout_json(cqed::signal_noise_analytic(cfg, gamma));
    out["simplified"] = readout_json(cqed::signal_noise_simplified(cfg, gamma));
    out["optimal"] = {{"t_opt", opt.t_opt}, {"snr", opt.snr}};
    out["snr_weak_coupling"] = cqed::optimal_snr_weak_coupling(cfg.tau);
    out["fidelity_asymptotic"] = cqed::single_shot_fidelity_asymptotic(cfg.tau);
  }
  if (monte_carlo) {
    cqed::MonteCarloOptions mc;
    mc.n_traj = c.n_traj;
    mc.seed = c.seed;
    mc.threads = c.threads;
    cqed::MonteCarloResult r = cqed::single_shot_fidelity_monte_carlo(cfg, mc);
    out["monte_carlo"] = {{"fidelity", r.fidelity}, {"standard_error", r.standard_error},
                          {"threshold", r.threshold}, {"n_traj", r.n_traj}, {"gamma", r.gamma}};
    r.histogram.write_csv((dir / "readout_histogram.csv").string());
  }
  return emit(dir, "readout", out);
}

cqed::SweepSpec sweep_spec(const std::string& name, const Config& c, const cqed::Settings& set) {
  cqed::SweepSpec spec = cqed::SweepSpec::defaults(cqed::experiment_from_string(name));
  auto has = [&](const char* key) { return set.count(key) > 0; };
  if (!c.grid.empty()) spec.grid = c.grid;
  if (!c.series.empty()) spec.series = c.series;
  if (has("system.g")) spec.params.g = c.g;
  if (has("system.delta_xi") || has("system.t2_star")) spec.params.delta_xi = c.system().delta_xi;
  if (has("system.kappa")) spec.params.kappa = c.kappa;
  if (has("system.omega_q")) spec.params.omega_q = c.omega_q;
  if (has("schedule.n_p")) spec.n_p = c.n_p;
  if (has("readout.g_over_kappa")) spec.g_over_kappa = c.g_over_kappa;
  if (has("readout.kappa_tau")) spec.kappa_tau = c.kappa_tau;
  if (has("ensemble.n_qubits")) spec.ensemble_size = c.n_qubits;
  if (has("ensemble.coupling_spread")) spec.coupling_spread = c.coupling_spread;
  if (has("numerics.n_traj")) spec.n_traj = c.n_traj;
  if (has("numerics.quadrature_tol")) spec.quadrature_tol = c.quadrature_tol;
  spec.seed = c.seed;
  spec.threads = c.threads;
  return spec;
}

int cmd_reproduce(const std::string& name, Config c, const cqed::Settings& set) {
  cqed::SweepSpec spec = sweep_spec(name, c, set);
  spec.validate();
  c.experiment = cqed::to_string(spec.experiment);
  auto dir = prepare(c, "reproduce-figure");
  cqed::SweepOutput result = cqed::run(spec);
  const std::string stem = cqed::to_string(spec.experiment);
  result.table.write_csv((dir / (stem + ".csv")).string());
  json summary = result.summary();
  summary["spec"] = spec.to_json();
  write_text(dir / (stem + "_summary.json"), summary.dump(2) + "\n");
  for (const cqed::CheckResult& check : result.checks) {
    std::cout << (check.pass ? "PASS " : "FAIL ") << check.name << ": " << check.value << " in ["
              << check.lower << ", " << check.upper << "]\n";
  }
  std::cout << "wrote " << (dir / (stem + ".csv")).string() << "\n";
  return kExitOk;
}

int cmd_verify(const std::string& result_path, const std::string& golden_path, double rel, double abs) {
  cqed::ResultTable result = cqed::ResultTable::read_csv(result_path);
  cqed::ResultTable golden = cqed::ResultTable::read_csv(golden_path);
  cqed::GoldenReport report = cqed::compare_golden(result, golden, {}, {rel, abs});
  for (const std::string& f : report.failures) std::cout << "FAIL " << f << "\n";
  std::cout << (report.pass ? "PASS" : "FAIL") << " " << result_path << " vs " << golden_path << "\n";
  return report.pass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-QED Hamiltonian-engineering simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Do not log defaulted keys");
  std::map<std::string, std::string> flag_values;
  for (const std::string& key : cqed::config_keys()) {
    app.add_option(flag_name(key), flag_values[key], "Overrides " + key);
  }

  std::string method = "all", variant;
  auto* transfer = app.add_subcommand("transfer", "State-transfer fidelity (exact, asymptotic, master)");
  transfer->add_option("--method", method)->check(CLI::IsMember({"exact", "asymptotic", "master", "all"}));
  transfer->add_option("--variant", variant)
      ->check(CLI::IsMember({"ideal", "counter_rotating", "finite_duration"}));
  app.add_subcommand("ensemble", "Collective-mode model of a qubit ensemble");
  double epsilon = 0.0;
  auto* controls = app.add_subcommand("controls", "Filtered, finite-duration and imperfect pulses");
  controls->add_option("--epsilon", epsilon, "Relative pi-pulse over-rotation");
  bool monte_carlo = false;
  auto* readout = app.add_subcommand("readout", "Longitudinal readout signal, noise and fidelity");
  readout->add_flag("--monte-carlo", monte_carlo, "Also run the single-shot Monte Carlo");
  std::string figure;
  auto* reproduce = app.add_subcommand("reproduce-figure", "Run a figure sweep and write CSV and JSON");
  reproduce->add_option("experiment", figure, "fig2, fig3, fig4b, fig4c, fig5a, fig5b or nanotube");
  std::string result_path, golden_path;
  double rel = 1e-9, abs = 1e-12;
  auto* verify = app.add_subcommand("verify-golden", "Compare a result CSV against a golden CSV");
  verify->add_option("result", result_path)->required()->check(CLI::ExistingFile);
  verify->add_option("golden", golden_path)->required()->check(CLI::ExistingFile);
  verify->add_option("--rel", rel, "Relative tolerance");
  verify->add_option("--abs", abs, "Absolute tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    cqed::Settings settings = config_path.empty() ? cqed::Settings{} : cqed::read_settings_file(config_path);
    for (const std::string& key : cqed::config_keys()) {
      if (app.count(flag_name(key)) > 0) settings[key] = flag_values[key];
    }
    if (*reproduce) {
      if (figure.empty() && settings.count("run.experiment")) figure = settings["run.experiment"];
      if (figure.empty()) {
        std::cerr << "error: reproduce-figure needs an experiment name\n" << reproduce->help();
        return kExitConfig;
      }
    }
    Config config = cqed::build_config(settings);
    if (!quiet) {
      std::string defaulted;
      for (const std::string& key : cqed::config_keys()) {
        if (!settings.count(key)) defaulted += (defaulted.empty() ? "" : ", ") + key;
      }
      std::cerr << "defaults used for: " << defaulted << "\n";
    }
    if (*transfer) return cmd_transfer(config, method, variant);
    if (app.got_subcommand("ensemble")) return cmd_ensemble(config);
    if (*controls) return cmd_controls(config, epsilon);
    if (*readout) return cmd_readout(config, monte_carlo);
    if (*reproduce) return cmd_reproduce(figure, config, settings);
    if (*verify) return cmd_verify(result_path, golden_path, rel, abs);
  } catch (const cqed::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
