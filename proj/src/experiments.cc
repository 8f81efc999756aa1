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

#include "cqed/experiments.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "cqed/ensemble.h"
#include "cqed/lindblad.h"
#include "cqed/parallel.h"
#include "cqed/pulses.h"
#include "cqed/readout.h"
#include "cqed/transfer.h"

namespace cqed {
namespace {

using Row = std::vector<double>;

struct Layout {
  std::vector<std::string> columns;
};

// Grid point of a sweep: the primary value and, where used, the series value.
struct Point {
  double x = 0.0;
  double series = 0.0;
};

std::vector<Point> points(const SweepSpec& spec) {
  std::vector<Point> out;
  bool uses_series = spec.experiment == Experiment::kFig2ErrorVsNp ||
                     spec.experiment == Experiment::kFig4cPulseDuration;
  if (uses_series) {
    for (double s : spec.series) {
      for (double x : spec.grid) out.push_back({x, s});
    }
  } else {
    for (double x : spec.grid) out.push_back({x, 0.0});
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Short form for check labels.
std::string label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

MasterOptions master_options(const SweepSpec& spec) {
  MasterOptions o;
  o.quadrature.tol = spec.quadrature_tol;
  return o;
}

std::vector<std::string> columns_for(Experiment e) {
  switch (e) {
    case Experiment::kFig2ErrorVsNp:
      return {"n_p", "kappa_over_g", "tau", "error_exact", "error_asymptotic", "error_master",
              "plateau", "nodes", "fock_dim", "converged"};
    case Experiment::kFig3Spectrum:
      return {"delta_xi_tau", "overlap_s", "bright_plus", "bright_minus", "dark_plus",
              "dark_minus", "exact_max", "exact_min", "exact_second_max", "exact_second_min",
              "max_deviation", "threshold", "dark_count", "n_qubits", "converged"};
    case Experiment::kFig4bBandwidth:
      return {"sigma_f", "tau", "tau_prime", "mean_coupling", "error_filtered", "error_square",
              "error_ideal", "nodes", "fock_dim", "converged"};
    case Experiment::kFig4cPulseDuration:
      return {"g_t_p_over_2pi", "pattern", "t_p", "tau", "error", "nodes", "fock_dim", "converged"};
    case Experiment::kFig5aSignalNoise:
      return {"kappa_t_f", "X_numeric", "Xi_numeric", "snr_numeric", "X_analytic", "Xi_analytic",
              "X_simplified", "Xi_simplified", "Xi_shot_noise", "fock_dim", "converged"};
    case Experiment::kFig5bSnrVsKappaTau:
      return {"kappa_tau", "snr_max_numeric", "snr_formula", "snr_ratio", "t_opt_numeric",
              "t_opt_closed", "gamma", "gamma_simulated", "fidelity_mc", "fidelity_mc_se",
              "fidelity_asymptotic", "fock_dim", "converged"};
    case Experiment::kNanotube:
      return {"n_p", "g", "kappa", "t2_star", "error_no_pulse", "error_dephasing", "error_total",
              "nodes", "converged"};
  }
  throw std::invalid_argument("unknown experiment");
}

Row fig2_row(const SweepSpec& spec, const Point& p) {
  const int n_p = static_cast<int>(std::lround(p.x));
  SystemParams params = spec.params;
  params.kappa = p.series * params.g;
  const double tau = optimal_tau(params.g, n_p);
  QuadraturePolicy quad;
  quad.tol = spec.quadrature_tol;
  FidelityEstimate exact = transfer_fidelity_exact(params, n_p, tau, quad);
  PulseSchedule sched;
  sched.tau = tau;
  sched.n_p = n_p;
  MasterResult master = transfer_fidelity_master(params, sched, HamiltonianVariant::kIdeal,
                                                 master_options(spec));
  return {double(n_p),
          p.series,
          tau,
          1.0 - exact.fidelity,
          transfer_error_asymptotic(params, n_p),
          1.0 - master.fidelity,
          saturation_error(params),
          double(master.nodes),
          double(master.fock_dim),
          (exact.converged && master.converged) ? 1.0 : 0.0};
}

struct Fig3Context {
  EnsembleSpec ensemble;
};

Row fig3_row(const SweepSpec& spec, const Fig3Context& ctx, const Point& p) {
  const EnsembleSpec& ens = ctx.ensemble;
  const int n = ens.size();
  const double g_ens = ens.g_ens();
  const double tau = p.x;  // delta_xi = 1
  FourModeModel model = four_mode_model(ens, tau, XiAverage::kRealized);
  DoubletEnergies d = doublet_energies(model);
  RealVector exact = exact_spectrum(ens, tau);
  std::vector<double> e(exact.data(), exact.data() + exact.size());
  std::sort(e.begin(), e.end());
  std::vector<double> predicted(n + 1, 0.0);
  predicted[0] = d.bright_minus;
  predicted[1] = d.dark_minus;
  predicted[n - 1] = d.dark_plus;
  predicted[n] = d.bright_plus;
  std::sort(predicted.begin(), predicted.end());
  double deviation = 0.0;
  for (int i = 0; i <= n; ++i) deviation = std::max(deviation, std::abs(e[i] - predicted[i]));
  const double threshold = 10.0 / std::sqrt(double(n)) * g_ens;
  int dark = 0;
  for (double v : e) dark += std::abs(v) <= threshold ? 1 : 0;
  (void)spec;
  return {p.x,
          model.s,
          d.bright_plus / g_ens,
          d.bright_minus / g_ens,
          d.dark_plus / g_ens,
          d.dark_minus / g_ens,
          e[n] / g_ens,
          e[0] / g_ens,
          e[n - 1] / g_ens,
          e[1] / g_ens,
          deviation / g_ens,
          threshold / g_ens,
          double(dark),
          double(n),
          1.0};
}

Row fig4b_row(const SweepSpec& spec, const Point& p) {
  const SystemParams& params = spec.params;
  const double sigma_f = p.x * params.g;
  if (rise_time(sigma_f) >= optimal_tau(params.g, spec.n_p)) {
    throw std::invalid_argument("filter rise time exceeds the ideal pulse interval");
  }
  PulseSchedule filtered;
  filtered.n_p = spec.n_p;
  filtered.sigma_f = sigma_f;
  filtered.tau = solve_filtered_tau(params.g, spec.n_p, sigma_f);
  filtered.tau_prime = filtered.tau - rise_time(sigma_f);
  MasterResult f = transfer_fidelity_master(params, filtered, HamiltonianVariant::kCounterRotating,
                                            master_options(spec));
  PulseSchedule square = filtered;
  square.sigma_f = kInfinity;
  SystemParams ideal_params = params;
  ideal_params.omega_q = kInfinity;
  MasterResult sq = transfer_fidelity_master(ideal_params, square, HamiltonianVariant::kIdeal,
                                             master_options(spec));
  QuadraturePolicy quad;
  quad.tol = spec.quadrature_tol;
  FidelityEstimate ideal =
      transfer_fidelity_exact(params, spec.n_p, optimal_tau(params.g, spec.n_p), quad);
  return {p.x,
          filtered.tau,
          filtered.tau_prime,
          mean_coupling(params.g, filtered.tau, filtered.tau_prime, sigma_f),
          1.0 - f.fidelity,
          1.0 - sq.fidelity,
          1.0 - ideal.fidelity,
          double(f.nodes),
          double(f.fock_dim),
          (f.converged && sq.converged && ideal.converged) ? 1.0 : 0.0};
}

Row fig4c_row(const SweepSpec& spec, const Point& p) {
  const SystemParams& params = spec.params;
  PulseSchedule sched;
  sched.n_p = spec.n_p;
  sched.tau = optimal_tau(params.g, spec.n_p);
  sched.t_p = p.x * 2.0 * std::numbers::pi / params.g;
  sched.pattern = static_cast<PhasePattern>(static_cast<int>(std::lround(p.series)));
  MasterResult r = transfer_fidelity_master(params, sched, HamiltonianVariant::kFiniteDuration,
                                            master_options(spec));
  return {p.x,         p.series,         sched.t_p,          sched.tau, 1.0 - r.fidelity,
          double(r.nodes), double(r.fock_dim), r.converged ? 1.0 : 0.0};
}

ReadoutConfig readout_config(const SweepSpec& spec, double kappa_tau, double kappa_t_f) {
  ReadoutConfig cfg;
  cfg.kappa = 1.0;
  cfg.g = spec.g_over_kappa;
  cfg.tau = kappa_tau;
  cfg.t_f = kappa_t_f;
  return cfg;
}

Row fig5a_row(const SweepSpec& spec, const Point& p) {
  ReadoutConfig cfg = readout_config(spec, spec.kappa_tau, p.x);
  NumericReadoutOptions options;
  ReadoutResult num = signal_noise_numeric(cfg, options);
  cfg.t_f = num.t_f;  // whole periods
  const double gamma = gamma_switching(cfg);
  ReadoutResult an = signal_noise_analytic(cfg, gamma);
  ReadoutResult simple = signal_noise_simplified(cfg, gamma);
  return {num.t_f,  num.X,    num.Xi,  num.snr, an.X, an.Xi, simple.X, simple.Xi,
          std::sqrt(2.0 * cfg.kappa * num.t_f), double(options.fock_dim), 1.0};
}

Row fig5b_row(const SweepSpec& spec, const Point& p) {
  ReadoutConfig cfg = readout_config(spec, p.x, 0.0);
  NumericReadoutOptions options;
  ReadoutResult best = max_snr_numeric(cfg, options);
  const double gamma = gamma_switching(cfg);
  const double formula = optimal_snr_weak_coupling(p.x);
  const double simulated = gamma_from_simulation(cfg, 40.0, options);
  cfg.t_f = best.t_opt;
  MonteCarloOptions mc;
  mc.n_traj = spec.n_traj;
  mc.seed = spec.seed;
  mc.threads = 1;  // rows already run in parallel
  MonteCarloResult fid = single_shot_fidelity_monte_carlo(cfg, mc);
  return {p.x,
          best.snr,
          formula,
          best.snr / formula,
          best.t_opt,
          optimal_snr(cfg, gamma).t_opt,
          gamma,
          simulated,
          fid.fidelity,
          fid.standard_error,
          single_shot_fidelity_asymptotic(p.x),
          double(options.fock_dim),
          1.0};
}

Row nanotube_row(const SweepSpec& spec, const Point& p) {
  const int n_p = static_cast<int>(std::lround(p.x));
  SystemParams params = spec.params;
  SystemParams no_damping = params;
  no_damping.kappa = 0.0;
  PulseSchedule sched;
  sched.n_p = n_p;
  sched.tau = optimal_tau(params.g, n_p);
  MasterOptions options = master_options(spec);
  MasterResult total = transfer_fidelity_master(params, sched, HamiltonianVariant::kIdeal, options);
  MasterResult dephasing =
      transfer_fidelity_master(no_damping, sched, HamiltonianVariant::kIdeal, options);
  FidelityEstimate free = transfer_fidelity_free(no_damping, 0.5 * std::numbers::pi / params.g,
                                                 options.quadrature);
  return {double(n_p),
          params.g,
          params.kappa,
          params.t2_star(),
          1.0 - free.fidelity,
          1.0 - dephasing.fidelity,
          1.0 - total.fidelity,
          double(total.nodes),
          (total.converged && dephasing.converged && free.converged) ? 1.0 : 0.0};
}

std::string coordinates(const SweepSpec& spec, const Point& p) {
  std::ostringstream msg;
  msg << to_string(spec.experiment) << " at grid value " << p.x;
  if (spec.experiment == Experiment::kFig2ErrorVsNp ||
      spec.experiment == Experiment::kFig4cPulseDuration) {
    msg << ", series " << p.series;
  }
  return msg.str();
}

CheckResult band(const std::string& name, double value, double lower, double upper) {
  return {name, value, lower, upper, value >= lower && value <= upper};
}

// Least-squares slope of log y against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<CheckResult> checks_for(const SweepSpec& spec, const ResultTable& t) {
  std::vector<CheckResult> out;
  auto col = [&](const std::string& name) { return t.column_index(name); };
  switch (spec.experiment) {
    case Experiment::kFig2ErrorVsNp: {
      int np = col("n_p"), kg = col("kappa_over_g"), ex = col("error_exact"),
          ms = col("error_master");
      std::map<double, std::pair<double, double>> last;  // kappa/g -> (n_p, error)
      std::vector<double> xs, ys;
      for (const Row& r : t.rows) {
        if (!last.count(r[kg]) || r[np] > last[r[kg]].first) last[r[kg]] = {r[np], r[ms]};
        if (r[kg] == 0.0 && r[np] == 40.0) out.push_back(band("exact error at n_p = 40", r[ex], 0.0, 0.01));
        if (r[kg] == 0.0 && r[np] >= 100.0 && r[np] <= 512.0) {
          xs.push_back(r[np]);
          ys.push_back(r[ex]);
        }
      }
      if (xs.size() >= 2) out.push_back(band("log-log slope over n_p in [100, 512]", log_slope(xs, ys), -4.2, -3.8));
      for (const auto& [k, v] : last) {
        if (k == 0.0) continue;
        double plateau = std::numbers::pi * k / 6.0;
        if (k <= 0.1) {
          out.push_back(band("plateau / (pi kappa / 6g) at kappa/g = " + label(k),
                             v.second / plateau, 0.85, 1.15));
        } else {
          out.push_back(band("plateau / (kappa/g) at kappa/g = " + label(k), v.second / k,
                             0.1, 1.0));
        }
      }
      break;
    }
    case Experiment::kFig3Spectrum: {
      int dev = col("max_deviation"), thr = col("threshold"), dark = col("dark_count"),
          nq = col("n_qubits");
      double worst = 0.0, threshold = 0.0, min_dark = kInfinity, n = 0.0;
      for (const Row& r : t.rows) {
        worst = std::max(worst, r[dev]);
        threshold = r[thr];
        min_dark = std::min(min_dark, r[dark]);
        n = r[nq];
      }
      out.push_back(band("max doublet deviation / g_ens", worst, 0.0, threshold));
      out.push_back(band("dark eigenvalues", min_dark, n - 3.0, n + 1.0));
      break;
    }
    case Experiment::kFig4bBandwidth: {
      int sf = col("sigma_f"), ef = col("error_filtered"), ei = col("error_ideal");
      std::vector<std::pair<double, double>> wide;  // (sigma_f, filtered / ideal)
      for (const Row& r : t.rows) {
        if (r[sf] == 100.0) out.push_back(band("filtered error at sigma_f = 100 g", r[ef], 5e-4, 2e-3));
        if (r[sf] >= 500.0) wide.emplace_back(r[sf], r[ef] / r[ei]);
      }
      std::sort(wide.begin(), wide.end());
      if (wide.size() >= 2) {
        double worst_rise = -kInfinity;
        for (std::size_t i = 1; i < wide.size(); ++i) {
          worst_rise = std::max(worst_rise, wide[i].second - wide[i - 1].second);
        }
        out.push_back(band("largest rise of filtered / ideal error over sigma_f >= 500 g", worst_rise,
                           -kInfinity, 0.0));
      }
      if (!wide.empty()) {
        out.push_back(band("filtered / ideal error at sigma_f = " + label(wide.back().first) + " g",
                           wide.back().second, 0.8, 1.25));
      }
      break;
    }
    case Experiment::kFig4cPulseDuration: {
      int tp = col("g_t_p_over_2pi"), pat = col("pattern"), er = col("error");
      for (const Row& r : t.rows) {
        if (std::abs(r[tp] - 1e-3) > 1e-12) continue;
        auto pattern = static_cast<PhasePattern>(static_cast<int>(r[pat]));
        if (pattern == PhasePattern::kAlternatePairs) {
          out.push_back(band("alternate-pairs error at g t_p / 2pi = 1e-3", r[er], 0.0, 0.01));
        } else if (pattern == PhasePattern::kFixed) {
          out.push_back(band("fixed-phase error at g t_p / 2pi = 1e-3", r[er], 0.01, 1.0));
        }
      }
      break;
    }
    case Experiment::kFig5aSignalNoise: {
      int xi = col("Xi_numeric"), kt = col("kappa_t_f");
      double worst = kInfinity;
      for (const Row& r : t.rows) worst = std::min(worst, r[xi] * r[xi] / r[kt]);
      out.push_back(band("min Xi^2 / (kappa t_f)", worst, 1.0, kInfinity));
      break;
    }
    case Experiment::kFig5bSnrVsKappaTau: {
      int kt = col("kappa_tau"), ratio = col("snr_ratio"), g = col("gamma"),
          gs = col("gamma_simulated");
      for (const Row& r : t.rows) {
        if (r[kt] >= 0.05 && r[kt] <= 1.0) {
          out.push_back(band("max SNR / formula at kappa tau = " + label(r[kt]), r[ratio], 0.85, 1.15));
        }
        if (r[kt] <= 0.3) {
          out.push_back(band("simulated / closed-form gamma at kappa tau = " + label(r[kt]),
                             r[gs] / r[g], 0.9, 1.1));
        }
      }
      break;
    }
    case Experiment::kNanotube: {
      int np = col("n_p");
      for (const Row& r : t.rows) {
        if (r[np] != 10.0) continue;
        out.push_back(band("no-pulse error", r[col("error_no_pulse")], 0.39, 0.45));
        out.push_back(band("dephasing-only error at n_p = 10", r[col("error_dephasing")], 0.003, 0.005));
        out.push_back(band("total error at n_p = 10", r[col("error_total")], 0.16, 0.20));
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::string to_string(Experiment experiment) {
  switch (experiment) {
    case Experiment::kFig2ErrorVsNp: return "fig2_error_vs_np";
    case Experiment::kFig3Spectrum: return "fig3_spectrum";
    case Experiment::kFig4bBandwidth: return "fig4b_bandwidth";
    case Experiment::kFig4cPulseDuration: return "fig4c_pulse_duration";
    case Experiment::kFig5aSignalNoise: return "fig5a_signal_noise";
    case Experiment::kFig5bSnrVsKappaTau: return "fig5b_snr_vs_kappatau";
    case Experiment::kNanotube: return "nanotube_example";
  }
  return "unknown";
}

Experiment experiment_from_string(const std::string& name) {
  static const std::map<std::string, Experiment> names = {
      {"fig2", Experiment::kFig2ErrorVsNp},
      {"fig3", Experiment::kFig3Spectrum},
      {"fig4b", Experiment::kFig4bBandwidth},
      {"fig4c", Experiment::kFig4cPulseDuration},
      {"fig5a", Experiment::kFig5aSignalNoise},
      {"fig5b", Experiment::kFig5bSnrVsKappaTau},
      {"nanotube", Experiment::kNanotube},
  };
  if (auto it = names.find(name); it != names.end()) return it->second;
  for (Experiment e : all_experiments()) {
    if (to_string(e) == name) return e;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::vector<Experiment> all_experiments() {
  return {Experiment::kFig2ErrorVsNp,      Experiment::kFig3Spectrum,
          Experiment::kFig4bBandwidth,     Experiment::kFig4cPulseDuration,
          Experiment::kFig5aSignalNoise,   Experiment::kFig5bSnrVsKappaTau,
          Experiment::kNanotube};
}

void SweepSpec::validate() const {
  if (grid.empty()) throw std::invalid_argument("sweep: grid must not be empty");
  for (double x : grid) {
    if (!std::isfinite(x) || !(x > 0.0)) throw std::invalid_argument("sweep: grid values must be positive and finite");
  }
  if (!(quadrature_tol > 0.0)) throw std::invalid_argument("sweep: quadrature_tol must be positive");
  switch (experiment) {
    case Experiment::kFig2ErrorVsNp:
    case Experiment::kNanotube:
      for (double x : grid) {
        long n = std::lround(x);
        if (std::abs(x - n) > 1e-9 || n < 2 || n % 2 != 0) {
          throw std::invalid_argument("sweep: n_p values must be even integers >= 2");
        }
      }
      if (experiment == Experiment::kFig2ErrorVsNp) {
        if (series.empty()) throw std::invalid_argument("sweep: fig2 needs kappa/g series values");
        for (double k : series) {
          if (!(k >= 0.0) || !std::isfinite(k)) throw std::invalid_argument("sweep: kappa/g must be >= 0");
        }
      }
      params.validate();
      break;
    case Experiment::kFig3Spectrum:
      if (ensemble_size < 4) throw std::invalid_argument("sweep: ensemble_size must be >= 4");
      if (!(coupling_spread >= 0.0)) throw std::invalid_argument("sweep: coupling_spread must be >= 0");
      break;
    case Experiment::kFig4bBandwidth:
    case Experiment::kFig4cPulseDuration:
      params.validate();
      if (n_p < 2 || n_p % 2 != 0) throw std::invalid_argument("sweep: n_p must be even");
      if (experiment == Experiment::kFig4bBandwidth && !std::isfinite(params.omega_q)) {
        throw std::invalid_argument("sweep: fig4b needs a finite omega_q");
      }
      if (experiment == Experiment::kFig4cPulseDuration) {
        if (series.empty()) throw std::invalid_argument("sweep: fig4c needs phase-pattern series values");
        for (double s : series) {
          long v = std::lround(s);
          if (std::abs(s - v) > 1e-9 || v < 0 || v > 2) {
            throw std::invalid_argument("sweep: fig4c series values must be phase-pattern indices 0, 1, 2");
          }
        }
      }
      break;
    case Experiment::kFig5aSignalNoise:
    case Experiment::kFig5bSnrVsKappaTau:
      if (!(g_over_kappa > 0.0)) throw std::invalid_argument("sweep: g_over_kappa must be positive");
      if (!(kappa_tau > 0.0)) throw std::invalid_argument("sweep: kappa_tau must be positive");
      if (n_traj < 1) throw std::invalid_argument("sweep: n_traj must be positive");
      break;
  }
}

SweepSpec SweepSpec::defaults(Experiment experiment) {
  SweepSpec s;
  s.experiment = experiment;
  s.params.g = 1.0;
  s.params.delta_xi = SystemParams::delta_xi_from_t2_star(0.1);
  switch (experiment) {
    case Experiment::kFig2ErrorVsNp:
      s.grid = {2, 4, 6, 8, 10, 12, 16, 20, 24, 32, 40, 50, 64, 80, 100, 128, 160, 200, 256, 320,
                400, 512};
      s.series = {0.0, 1.0, 0.01};
      break;
    case Experiment::kFig3Spectrum:
      for (int i = 1; i <= 40; ++i) s.grid.push_back(0.025 * i);
      break;
    case Experiment::kFig4bBandwidth:
      s.params.omega_q = 2000.0;
      s.grid = {100, 200, 500, 1000, 2000};
      break;
    case Experiment::kFig4cPulseDuration:
      s.grid = {1e-4, 3e-4, 1e-3, 3e-3};
      s.series = {double(static_cast<int>(PhasePattern::kFixed)),
                  double(static_cast<int>(PhasePattern::kAlternatePairs))};
      break;
    case Experiment::kFig5aSignalNoise:
      for (int i = 1; i <= 60; ++i) s.grid.push_back(50.0 * i);
      break;
    case Experiment::kFig5bSnrVsKappaTau:
      s.grid = {0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.75, 1.0, 1.25, 1.5};
      break;
    case Experiment::kNanotube: {
      // g/2pi = 1.3 MHz, kappa/2pi = 0.6 MHz, T2* = 60 ns, in units of g.
      const double g_hz = 1.3e6;
      s.params.kappa = 0.6e6 / g_hz;
      s.params.delta_xi = SystemParams::delta_xi_from_t2_star(2.0 * std::numbers::pi * g_hz * 60e-9);
      s.grid = {10};
      break;
    }
  }
  return s;
}

nlohmann::json SweepSpec::to_json() const {
  nlohmann::json j;
  j["experiment"] = to_string(experiment);
  j["grid"] = grid;
  j["series"] = series;
  j["g"] = params.g;
  j["delta_xi"] = params.delta_xi;
  j["kappa"] = params.kappa;
  if (std::isfinite(params.omega_q)) {
    j["omega_q"] = params.omega_q;
  } else {
    j["omega_q"] = "inf";
  }
  j["n_p"] = n_p;
  j["g_over_kappa"] = g_over_kappa;
  j["kappa_tau"] = kappa_tau;
  j["ensemble_size"] = ensemble_size;
  j["coupling_spread"] = coupling_spread;
  j["n_traj"] = n_traj;
  j["seed"] = seed;
  j["threads"] = threads;
  j["quadrature_tol"] = quadrature_tol;
  return j;
}

int ResultTable::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  return it == columns.end() ? -1 : static_cast<int>(it - columns.begin());
}

std::vector<double> ResultTable::column(const std::string& name) const {
  int c = column_index(name);
  if (c < 0) throw std::invalid_argument("no column '" + name + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const Row& r : rows) out.push_back(r[c]);
  return out;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << columns[c];
  out << '\n';
  for (const Row& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << format_double(r[c]);
    out << '\n';
  }
  return out.str();
}

void ResultTable::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_csv();
}

ResultTable ResultTable::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read " + path);
  ResultTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument(path + ": empty table");
  std::stringstream header(line);
  for (std::string cell; std::getline(header, cell, ',');) t.columns.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        r.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::invalid_argument(path + ": malformed cell '" + cell + "'");
      }
    }
    if (r.size() != t.columns.size()) throw std::invalid_argument(path + ": ragged row");
    t.rows.push_back(std::move(r));
  }
  return t;
}

nlohmann::json SweepOutput::summary() const {
  nlohmann::json j;
  j["experiment"] = table.experiment;
  j["columns"] = table.columns;
  j["rows"] = table.rows.size();
  bool all = true;
  nlohmann::json list = nlohmann::json::array();
  for (const CheckResult& c : checks) {
    nlohmann::json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["lower"] = std::isfinite(c.lower) ? nlohmann::json(c.lower) : nlohmann::json("-inf");
    e["upper"] = std::isfinite(c.upper) ? nlohmann::json(c.upper) : nlohmann::json("inf");
    e["pass"] = c.pass;
    list.push_back(e);
    all = all && c.pass;
  }
  j["checks"] = list;
  j["all_pass"] = all;
  return j;
}

SweepOutput run(const SweepSpec& spec) {
  spec.validate();
  std::vector<Point> grid = points(spec);
  Fig3Context fig3;
  if (spec.experiment == Experiment::kFig3Spectrum) {
    const int n = spec.ensemble_size;
    fig3.ensemble = sample_ensemble(n, 1.0 / std::sqrt(double(n)), 1.0, spec.coupling_spread, spec.seed);
  }
  std::vector<Row> rows(grid.size());
  parallel_for(
      grid.size(),
      [&](std::size_t i) {
        const Point& p = grid[i];
        try {
          switch (spec.experiment) {
            case Experiment::kFig2ErrorVsNp: rows[i] = fig2_row(spec, p); break;
            case Experiment::kFig3Spectrum: rows[i] = fig3_row(spec, fig3, p); break;
            case Experiment::kFig4bBandwidth: rows[i] = fig4b_row(spec, p); break;
            case Experiment::kFig4cPulseDuration: rows[i] = fig4c_row(spec, p); break;
            case Experiment::kFig5aSignalNoise: rows[i] = fig5a_row(spec, p); break;
            case Experiment::kFig5bSnrVsKappaTau: rows[i] = fig5b_row(spec, p); break;
            case Experiment::kNanotube: rows[i] = nanotube_row(spec, p); break;
          }
        } catch (const NumericalError& e) {
          throw NumericalError(coordinates(spec, p) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
          throw std::invalid_argument(coordinates(spec, p) + ": " + e.what());
        }
      },
      spec.threads);
  SweepOutput out;
  out.table.experiment = to_string(spec.experiment);
  out.table.columns = columns_for(spec.experiment);
  out.table.rows = std::move(rows);
  out.checks = checks_for(spec, out.table);
  return out;
}

GoldenReport compare_golden(const ResultTable& result, const ResultTable& golden,
                            const std::map<std::string, Tolerance>& tolerances,
                            const Tolerance& fallback) {
  if (result.columns != golden.columns) throw std::invalid_argument("compare_golden: column schema mismatch");
  if (result.rows.size() != golden.rows.size()) {
    throw std::invalid_argument("compare_golden: row count mismatch");
  }
  GoldenReport report;
  const int converged = result.column_index("converged");
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    if (converged >= 0 && result.rows[r][converged] == 0.0) {
      report.pass = false;
      report.failures.push_back("row " + std::to_string(r) + ": not converged");
    }
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
      const std::string& name = result.columns[c];
      auto it = tolerances.find(name);
      const Tolerance& tol = it == tolerances.end() ? fallback : it->second;
      double v = result.rows[r][c];
      double g = golden.rows[r][c];
      bool same = (v == g) || (std::isnan(v) && std::isnan(g)) ||
                  std::abs(v - g) <= tol.abs + tol.rel * std::abs(g);
      if (!same) {
        report.pass = false;
        report.failures.push_back("row " + std::to_string(r) + ", column " + name + ": " +
                                  format_double(v) + " vs golden " + format_double(g));
      }
    }
  }
  return report;
}

}  // namespace cqed
