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

#include "cqed/ensemble.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "cqed/magnus.h"

namespace cqed {
namespace {

constexpr double kPi = std::numbers::pi;

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    den += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return num / den;
}

// Largest gap between the 4-mode doublets and the outermost exact eigenvalues.
double doublet_deviation(const EnsembleSpec& ens, double tau) {
  DoubletEnergies d = doublet_energies(four_mode_model(ens, tau, XiAverage::kRealized));
  RealVector e = exact_spectrum(ens, tau);
  std::vector<double> v(e.data(), e.data() + e.size());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size() - 1;
  return std::max({std::abs(v[0] - d.bright_minus), std::abs(v[1] - d.dark_minus),
                   std::abs(v[n - 1] - d.dark_plus), std::abs(v[n] - d.bright_plus)});
}

TEST(ensemble, derived_moments) {
  EnsembleSpec e = sample_ensemble(200, 0.5, 1.0, 0.2, 3);
  double sum = 0;
  for (double g : e.couplings) sum += g * g;
  EXPECT_NEAR(e.g_av() * e.g_av(), sum / 200, 1e-14);
  EXPECT_NEAR(e.g_ens(), std::sqrt(200.0) * e.g_av(), 1e-12);
}

TEST(ensemble, sampling_is_deterministic_and_bounded) {
  EnsembleSpec a = sample_ensemble(100, 1.0, 2.0, 0.5, 42);
  EnsembleSpec b = sample_ensemble(100, 1.0, 2.0, 0.5, 42);
  EXPECT_EQ(a.couplings, b.couplings);
  EXPECT_EQ(a.detunings, b.detunings);
  EXPECT_NE(a.detunings, sample_ensemble(100, 1.0, 2.0, 0.5, 43).detunings);
  for (double g : a.couplings) EXPECT_GT(g, 0.0);
  EnsembleSpec flat = sample_ensemble(50, 0.7, 1.0, 0.0, 1);
  for (double g : flat.couplings) EXPECT_EQ(g, 0.7);
}

TEST(ensemble, sample_mean_detuning_is_small) {
  const int n = 100000;
  EnsembleSpec e = sample_ensemble(n, 1.0, 1.0, 0.2, 9);
  double mean = 0;
  for (double x : e.detunings) mean += x;
  mean /= n;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(double(n)));
}

TEST(ensemble, invalid_specs_throw) {
  EnsembleSpec empty;
  EXPECT_THROW(empty.validate(), std::invalid_argument);
  EnsembleSpec mismatched{{1.0, 1.0}, {0.0}};
  EXPECT_THROW(mismatched.validate(), std::invalid_argument);
  EnsembleSpec negative{{-1.0}, {0.0}};
  EXPECT_THROW(negative.validate(), std::invalid_argument);
  EXPECT_THROW(sample_ensemble(0, 1.0, 1.0, 0.1, 1), std::invalid_argument);
}

TEST(ensemble, single_qubit_overlaps_are_one) {
  EnsembleSpec e{{0.8}, {1.3}};
  CollectiveOverlaps o = collective_overlaps(e);
  EXPECT_NEAR(o.s, 1.0, 1e-15);
  EXPECT_NEAR(o.b_c, 1.0, 1e-15);
  EXPECT_NEAR(o.c_d, 1.0, 1e-15);
}

TEST(ensemble, overlap_tends_to_gaussian_moment_ratio) {
  // Oracle: E[xi^2]/sqrt(E[xi^4]) = 1/sqrt(3) for a Gaussian.
  // <c|d> has seed-to-seed spread sqrt(E[xi^6]/E[xi^2]E[xi^4]) / sqrt(N) =
  // sqrt(5/N), so its bound applies to the RMS over seeds.
  double mean_s = 0, rms_b_c = 0, rms_c_d = 0;
  for (int seed = 0; seed < 100; ++seed) {
    EnsembleSpec e = sample_ensemble(1000, 1.0, 1.0, 0.2, 1000 + seed);
    CollectiveOverlaps o = collective_overlaps(e);
    EXPECT_NEAR(o.s, 1.0 / std::sqrt(3.0), 0.05);
    EXPECT_LT(o.norm_residual, 1e-12);
    mean_s += o.s / 100;
    rms_b_c += o.b_c * o.b_c / 100;
    rms_c_d += o.c_d * o.c_d / 100;
  }
  EXPECT_NEAR(mean_s, 1.0 / std::sqrt(3.0), 0.01);
  EXPECT_LT(std::sqrt(rms_b_c), 5.0 / std::sqrt(1000.0));
  EXPECT_LT(std::sqrt(rms_c_d), 5.0 / std::sqrt(1000.0));
}

TEST(ensemble, degenerate_modes_throw) {
  EnsembleSpec e{{1.0, 1.0}, {0.0, 0.0}};
  EXPECT_THROW(e.mode_c(), NumericalError);
  EXPECT_THROW(e.mode_d(), NumericalError);
}

TEST(ensemble, four_mode_matrix_pattern) {
  FourModeModel m = four_mode_model(10.0, 1.0 / std::sqrt(3.0), 0.4, 1.1, 0.3);
  const Eigen::Matrix4d& h = m.matrix;
  EXPECT_TRUE(h.isApprox(h.transpose(), 0.0));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(h(i, i), 0.0);
  EXPECT_EQ(h(0, 2), 0.0);
  EXPECT_EQ(h(1, 3), 0.0);
  EXPECT_EQ(h(0, 1), m.omega_minus);
  EXPECT_EQ(h(0, 3), m.omega_plus);
  EXPECT_EQ(h(1, 2), m.omega_prime_plus);
  EXPECT_EQ(h(2, 3), m.omega_prime_minus);
}

TEST(ensemble, resonant_model_spectrum) {
  FourModeModel m = four_mode_model(2.0, 0.0, 0.3);
  EXPECT_EQ(m.omega_prime_plus, 0.0);
  EXPECT_EQ(m.omega_prime_minus, 0.0);
  EXPECT_NEAR(m.omega_plus * m.omega_plus + m.omega_minus * m.omega_minus, 1.0, 1e-14);
  DoubletEnergies d = doublet_energies(m);
  EXPECT_NEAR(d.bright_plus, 1.0, 1e-14);
  EXPECT_NEAR(d.bright_minus, -1.0, 1e-14);
  EXPECT_NEAR(d.dark_plus, 0.0, 1e-7);
  EXPECT_NEAR(d.dark_minus, 0.0, 1e-7);
}

TEST(ensemble, doublets_match_dense_eigensolver) {
  for (double xi_tau : {0.1, 0.3, 1.0}) {
    FourModeModel m = four_mode_model(1.0, xi_tau / 0.3, 0.3);
    DoubletEnergies d = doublet_energies(m);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(m.matrix);
    Eigen::Vector4d ev = solver.eigenvalues();
    EXPECT_NEAR(ev(0), d.bright_minus, 1e-10);
    EXPECT_NEAR(ev(1), d.dark_minus, 1e-10);
    EXPECT_NEAR(ev(2), d.dark_plus, 1e-10);
    EXPECT_NEAR(ev(3), d.bright_plus, 1e-10);
    EXPECT_NEAR(d.bright_plus, -d.bright_minus, 1e-14);
    EXPECT_NEAR(d.dark_plus, -d.dark_minus, 1e-14);
  }
}

TEST(ensemble, exact_spectrum_without_detuning) {
  EnsembleSpec e = sample_ensemble(40, 0.2, 1.0, 0.3, 2);
  std::fill(e.detunings.begin(), e.detunings.end(), 0.0);
  RealVector v = exact_spectrum(e, 0.3);
  ASSERT_EQ(v.size(), 41);
  EXPECT_NEAR(v(0), -e.g_ens() / 2, 1e-12);
  EXPECT_NEAR(v(40), e.g_ens() / 2, 1e-12);
  for (int i = 1; i < 40; ++i) EXPECT_NEAR(v(i), 0.0, 1e-12);
  DoubletEnergies d = doublet_energies(four_mode_model(e, 0.3));
  EXPECT_NEAR(d.bright_plus, e.g_ens() / 2, 1e-12);
  EXPECT_EQ(four_mode_model(e, 0.3).s, 1.0 / std::sqrt(3.0));
}

TEST(ensemble, exact_spectrum_matches_dense_diagonalization) {
  EnsembleSpec e = sample_ensemble(60, 1.0 / std::sqrt(60.0), 1.0, 0.2, 17);
  const double tau = 0.7;
  EnsembleTerms t = squadd_terms_ensemble(e, tau);
  // Drop the decoupled vacuum row and column.
  Matrix h = (t.order0 + t.order2).bottomRightCorner(61, 61);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  RealVector dense = solver.eigenvalues();
  RealVector fast = exact_spectrum(e, tau);
  ASSERT_EQ(dense.size(), fast.size());
  EXPECT_LT((dense - fast).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(fast.sum(), h.trace().real(), 1e-9);
  EXPECT_NEAR(fast.sum(), t.chi + 2 * t.omega1 * collective_overlaps(e).b_c, 1e-9);
}

TEST(ensemble, dark_states_stay_near_zero) {
  EnsembleSpec e = sample_ensemble(1000, 1.0 / std::sqrt(1000.0), 1.0, 0.2, 1);
  const double threshold = 10.0 / std::sqrt(1000.0) * e.g_ens();
  for (double tau : {0.25, 0.5, 1.0}) {
    RealVector v = exact_spectrum(e, tau);
    int dark = 0;
    for (int i = 0; i < v.size(); ++i) dark += std::abs(v(i)) <= threshold ? 1 : 0;
    EXPECT_GE(dark, 1000 - 3);
    EXPECT_LE(doublet_deviation(e, tau), threshold);
  }
}

TEST(ensemble, four_mode_error_shrinks_as_inverse_root_n) {
  std::vector<double> sizes = {100, 400, 1600, 6400}, deviation;
  for (double n : sizes) {
    double total = 0;
    for (int seed = 0; seed < 12; ++seed) {
      EnsembleSpec e = sample_ensemble(int(n), 1.0 / std::sqrt(n), 1.0, 0.2, 500 + seed);
      total += doublet_deviation(e, 1.0) / e.g_ens();
    }
    deviation.push_back(total / 12);
  }
  double slope = log_log_slope(sizes, deviation);
  EXPECT_NEAR(slope, -0.5, 0.15);
}

TEST(ensemble, transfer_error_limits) {
  EXPECT_EQ(ensemble_transfer_error(1.0, 0.0, 50), 0.0);
  FourModeModel m = four_mode_model(1.0, 0.0, kPi / 50);
  EXPECT_NEAR(ensemble_transfer_fidelity_numeric(m, 50), 1.0, 1e-12);
  // Closed form at one point: [(8 + pi^2)/18 r^4 + r^2/18] q^4 with r = 1/2.
  double r = 0.5, q = kPi / 200;
  EXPECT_NEAR(ensemble_transfer_error(1.0, 1.0, 100),
              ((8 + kPi * kPi) / 18 * std::pow(r, 4) + r * r / 18) * std::pow(q, 4), 1e-18);
}

TEST(ensemble, transfer_error_matches_four_mode_propagation) {
  const double g_ens = 1.0, delta_xi = 1.0;
  for (int n_p : {64, 128, 256}) {
    double tau = kPi / (g_ens * n_p);
    double numeric = 1.0 - ensemble_transfer_fidelity_numeric(four_mode_model(g_ens, delta_xi, tau), n_p);
    double closed = ensemble_transfer_error(g_ens, delta_xi, n_p);
    EXPECT_NEAR(numeric / closed, 1.0, 0.1) << "n_p " << n_p;
  }
}

TEST(ensemble, four_mode_error_scales_as_inverse_fourth_power) {
  std::vector<double> n_ps = {32, 64, 128, 256, 512}, errors;
  for (double n_p : n_ps) {
    double tau = kPi / n_p;
    errors.push_back(1.0 - ensemble_transfer_fidelity_numeric(four_mode_model(1.0, 1.0, tau), int(n_p)));
  }
  EXPECT_NEAR(log_log_slope(n_ps, errors), -4.0, 0.2);
}

TEST(ensemble, quartic_term_dominates_at_large_spread) {
  double r = 2.0 / 2.0;
  double quartic = (8 + kPi * kPi) / 18 * std::pow(r, 4);
  double quadratic = r * r / 18;
  EXPECT_GT(quartic / quadratic, 10.0);
  double tau = kPi / 100;
  double numeric = 1.0 - ensemble_transfer_fidelity_numeric(four_mode_model(1.0, 2.0, tau), 100);
  EXPECT_NEAR(numeric / ensemble_transfer_error(1.0, 2.0, 100), 1.0, 0.2);
}

TEST(ensemble, conventions_agree_in_the_large_n_limit) {
  EnsembleSpec e = sample_ensemble(20000, 1.0 / std::sqrt(20000.0), 1.0, 0.0, 4);
  FourModeModel realized = four_mode_model(e, 0.5, XiAverage::kRealized);
  FourModeModel limit = four_mode_model(e, 0.5, XiAverage::kGaussianLimit, 1.0);
  FourModeModel signed_mean = four_mode_model(e, 0.5, XiAverage::kSignedMean);
  EXPECT_NEAR(realized.s, limit.s, 0.02);
  EXPECT_NEAR(realized.omega_plus, limit.omega_plus, 0.02);
  EXPECT_LT(std::abs(signed_mean.omega_prime_plus), std::abs(realized.omega_prime_plus));
}

TEST(ensemble, text_record_round_trip) {
  EnsembleSpec e = sample_ensemble(25, 0.3, 1.5, 0.2, 8);
  std::stringstream buffer;
  e.write(buffer);
  EnsembleSpec back = EnsembleSpec::read(buffer);
  EXPECT_EQ(back.couplings, e.couplings);
  EXPECT_EQ(back.detunings, e.detunings);
  std::stringstream bad("# g xi\n1.0\n");
  EXPECT_THROW(EnsembleSpec::read(bad), std::invalid_argument);
}

}  // namespace
}  // namespace cqed
