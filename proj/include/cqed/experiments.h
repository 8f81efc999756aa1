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

#ifndef CQED_EXPERIMENTS_H_
#define CQED_EXPERIMENTS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "cqed/params.h"

namespace cqed {

enum class Experiment {
  kFig2ErrorVsNp,
  kFig3Spectrum,
  kFig4bBandwidth,
  kFig4cPulseDuration,
  kFig5aSignalNoise,
  kFig5bSnrVsKappaTau,
  kNanotube,
};

// Canonical names fig2_error_vs_np, fig3_spectrum, fig4b_bandwidth,
// fig4c_pulse_duration, fig5a_signal_noise, fig5b_snr_vs_kappatau,
// nanotube_example; the short forms fig2, fig3, fig4b, fig4c, fig5a, fig5b
// and nanotube are accepted when parsing.
std::string to_string(Experiment experiment);
Experiment experiment_from_string(const std::string& name);
std::vector<Experiment> all_experiments();

// One sweep. Rates are in units of g for the transfer experiments and in
// units of kappa for the readout experiments.
//  fig2:  grid = n_p values, series = kappa/g values (0 gives the exact
//         closed form only).
//  fig3:  grid = delta_xi tau values (> 0); g_ens = delta_xi = 1.
//  fig4b: grid = sigma_f / g values.
//  fig4c: grid = g t_p / 2 pi values, series = phase patterns (PhasePattern
//         cast to double).
//  fig5a: grid = kappa t_f values (rounded to whole periods).
//  fig5b: grid = kappa tau values.
//  nanotube: grid = n_p values.
struct SweepSpec {
  Experiment experiment = Experiment::kFig2ErrorVsNp;
  std::vector<double> grid;
  std::vector<double> series;
  SystemParams params;      // transfer experiments (g = 1)
  int n_p = 100;            // fig4b, fig4c
  double g_over_kappa = 0.1;  // fig5a, fig5b
  double kappa_tau = 0.2;     // fig5a
  int ensemble_size = 1000;   // fig3
  double coupling_spread = 0.2;  // fig3, relative spread of g_i
  long n_traj = 100000;       // fig5b Monte Carlo column
  std::uint64_t seed = 1;
  int threads = 0;
  double quadrature_tol = 1e-9;

  // Throws std::invalid_argument (empty grid, invalid values).
  void validate() const;
  static SweepSpec defaults(Experiment experiment);
  nlohmann::json to_json() const;
};

// Numeric result table; every row corresponds to one grid point.
struct ResultTable {
  std::string experiment;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column_index(const std::string& name) const;  // -1 when absent
  std::vector<double> column(const std::string& name) const;
  // Comma-separated with a header line, values written with 17 significant
  // digits so that rereading is exact.
  void write_csv(const std::string& path) const;
  std::string to_csv() const;
  static ResultTable read_csv(const std::string& path);
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool pass = false;
};

struct SweepOutput {
  ResultTable table;
  std::vector<CheckResult> checks;
  nlohmann::json summary() const;
};

// Runs every grid point (in parallel, reduced in grid order) and evaluates
// the experiment's reference checks. Module errors are rethrown with the
// grid coordinates prepended; numerical failures stay NumericalError.
SweepOutput run(const SweepSpec& spec);

struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-12;
};

struct GoldenReport {
  bool pass = true;
  std::vector<std::string> failures;  // "row r, column c: value vs golden"
};

// Cell-wise comparison; a cell passes when |v - g| <= abs + rel |g|. Rows
// whose "converged" column is 0 always fail. Throws std::invalid_argument on
// a column or row-count mismatch.
GoldenReport compare_golden(const ResultTable& result, const ResultTable& golden,
                            const std::map<std::string, Tolerance>& tolerances = {},
                            const Tolerance& fallback = {});

}  // namespace cqed

#endif  // CQED_EXPERIMENTS_H_
