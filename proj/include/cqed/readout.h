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

#ifndef CQED_READOUT_H_
#define CQED_READOUT_H_

#include <cstdint>
#include <string>
#include <vector>

#include "cqed/core.h"

namespace cqed {

// Carr-Purcell readout with constant coupling g, zero detuning and cavity
// damping kappa. Rates in rad/s (or units of kappa when kappa = 1).
struct ReadoutConfig {
  double g = 0.1;
  double kappa = 1.0;
  double tau = 0.2;
  double t_f = 50.0;

  // Throws std::invalid_argument.
  void validate() const;
  // kappa tau below pi/2, where the Liouvillian Magnus series converges.
  bool in_convergence_domain() const;
};

enum class ReadoutMethod { kAnalytic, kSimplified, kNumeric, kMonteCarlo };
std::string to_string(ReadoutMethod method);

struct ReadoutResult {
  double t_f = 0.0;
  double X = 0.0;
  double Xi = 0.0;
  double snr = 0.0;
  double t_opt = 0.0;
  double gamma = 0.0;
  ReadoutMethod method = ReadoutMethod::kAnalytic;
};

// Switching rate g^2 tau^2 kappa / 24 in the sigma_x basis.
double gamma_switching(const ReadoutConfig& cfg);
// Time below which the linear short-time decay dominates:
// 256 / (3 (kappa tau)^2 kappa).
double gamma_validity_time(const ReadoutConfig& cfg);

enum class ReadoutGenerator {
  kAveraged,   // time-independent L0 + L2
  kLeading,    // L0 only (conditional displacement)
  kPiecewise,  // exact Carr-Purcell toggling-frame Liouvillian
};

struct DisplacementCheck {
  double overlap_plus = 0.0;   // <alpha|rho_c|alpha> after |+>|0>
  double overlap_minus = 0.0;  // <-alpha|rho_c|-alpha> after |->|0>
  cplx alpha;                  // -i g t_f / 2
  int fock_dim = 0;
};

// Propagates |+-> (x) |0> with kappa = 0 under the leading-order generator
// (kLeading) or the piecewise Hamiltonian (kPiecewise, t_f rounded to whole
// periods 2 tau) and returns the overlaps of the reduced cavity states with
// the coherent states |+-alpha>. The cavity truncation doubles from 8 until
// the overlaps change by less than 1e-10.
DisplacementCheck conditional_displacement_check(const ReadoutConfig& cfg,
                                                 ReadoutGenerator generator);

// Closed-form X and Xi for telegraph switching at total rate gamma (gamma <
// kappa/2), evaluated in 50-digit arithmetic so that gamma -> 0 is stable.
ReadoutResult signal_noise_analytic(const ReadoutConfig& cfg, double gamma);
// The auxiliary function entering the closed-form noise.
double readout_noise_kernel(double gamma, double kappa, double t);

// X = 4 g t_f, Xi = sqrt(2 kappa t_f + (16/3) g^2 gamma t_f^3).
ReadoutResult signal_noise_simplified(const ReadoutConfig& cfg, double gamma);
// Time where the two Xi^2 terms of the simplified noise are equal.
double noise_crossover_time(const ReadoutConfig& cfg, double gamma);

struct OptimalSnr {
  double t_opt = 0.0;
  double snr = 0.0;
};
// gamma t_opt = (1/2) sqrt(3/2) sqrt(kappa gamma)/g, snr = (6 g^2/(kappa gamma))^(1/4).
OptimalSnr optimal_snr(const ReadoutConfig& cfg, double gamma);
// Golden-section maximization of the closed-form X/Xi over t_f.
OptimalSnr optimal_snr_search(const ReadoutConfig& cfg, double gamma);
// 2 sqrt(3) / sqrt(kappa tau).
double optimal_snr_weak_coupling(double kappa_tau);

struct NumericReadoutOptions {
  ReadoutGenerator generator = ReadoutGenerator::kPiecewise;
  int fock_dim = 3;
};

// X and Xi from the master equation. The first and second moments of the
// integrated homodyne record are propagated together with the state by an
// augmented linear system u = (rho, Z, m1, m2) with Z' = L Z + a rho,
// m1' = tr[(a^+ - a) rho], m2' = tr[(a^+ - a) Z], which integrates the
// regression-theorem correlators exactly. <M> = i kappa m1 and
// <M^2> = kappa t + 4 kappa^2 Re m2. The piecewise generator is sampled at
// whole periods (t_f rounded to a multiple of 2 tau).
ReadoutResult signal_noise_numeric(const ReadoutConfig& cfg,
                                   const NumericReadoutOptions& options = {});
// Same moments sampled every `stride` periods up to t_max (inclusive).
std::vector<ReadoutResult> signal_noise_curve(const ReadoutConfig& cfg, double t_max, int stride,
                                              const NumericReadoutOptions& options = {});
// Maximum of the numeric X/Xi over whole-period t_f. Scans until the ratio
// has fallen to 80% of its best value past the closed-form optimum, capped at
// 20 times that optimum. Result t_opt holds the maximizing time.
ReadoutResult max_snr_numeric(const ReadoutConfig& cfg, const NumericReadoutOptions& options = {});

// <sigma_x(t)> for |+>|0> sampled at whole periods, t <= t_max.
struct DecayTrace {
  std::vector<double> t;
  std::vector<double> sigma_x;
};
DecayTrace sigma_x_decay(const ReadoutConfig& cfg, double t_max,
                         const NumericReadoutOptions& options = {});
// Least-squares slope of 1 - <sigma_x(t)> through the origin over
// t in (0, kappa_window / kappa], from the given generator.
double gamma_from_simulation(const ReadoutConfig& cfg, double kappa_window = 40.0,
                             const NumericReadoutOptions& options = {});

// 1 - ((kappa tau)^2/192) log(96/(kappa tau)^2); the subleading remainder is
// dropped.
double single_shot_fidelity_asymptotic(double kappa_tau);

struct Histogram {
  std::vector<double> bin_center;
  std::vector<long> count_plus;
  std::vector<long> count_minus;

  // Columns bin_center,count_plus,count_minus.
  void write_csv(const std::string& path) const;
};

struct MonteCarloOptions {
  long n_traj = 100000;     // per preparation
  std::uint64_t seed = 1;
  int bins = 200;
  double gamma = -1.0;      // negative selects gamma_switching(cfg)
  int threads = 0;          // 0 selects the hardware concurrency
};

struct MonteCarloResult {
  double fidelity = 0.0;
  double threshold = 0.0;
  double standard_error = 0.0;
  long n_traj = 0;
  double gamma = 0.0;
  double mean_plus = 0.0;
  double mean_minus = 0.0;
  Histogram histogram;
};

// Telegraph trajectories of sigma_x with flips at rate gamma/2, integrated
// exactly between flips. Each outcome is
// M = -2 g int s(t) (1 - exp(-kappa (t_f - t)/2)) dt + N(0, kappa t_f),
// so |+> has negative mean. Fidelity = 1 - min_theta (P(M > theta|+) +
// P(M < theta|-))/2. Trajectories are drawn in fixed-size chunks seeded from
// (seed, chunk index), so results do not depend on the thread count.
MonteCarloResult single_shot_fidelity_monte_carlo(const ReadoutConfig& cfg,
                                                  const MonteCarloOptions& options = {});
// Gaussian-overlap fidelity 1 - erfc(snr/2)/2 for two displaced Gaussians
// with separation X and total noise Xi (snr = X/Xi).
double gaussian_single_shot_fidelity(double snr);

struct FidelityScanPoint {
  double t_f = 0.0;
  double fidelity = 0.0;
  double standard_error = 0.0;
};
// Monte Carlo fidelity on a t_f grid (same seed at every point).
std::vector<FidelityScanPoint> single_shot_fidelity_scan(const ReadoutConfig& cfg,
                                                         const std::vector<double>& t_f_grid,
                                                         const MonteCarloOptions& options = {});

}  // namespace cqed

#endif  // CQED_READOUT_H_
