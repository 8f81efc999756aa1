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


#ifndef CQED_ENSEMBLE_H_
#define CQED_ENSEMBLE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "cqed/core.h"

namespace cqed {

// N qubits with couplings g_i and static detunings xi_i.
struct EnsembleSpec {
  std::vector<double> couplings;
  std::vector<double> detunings;

  int size() const { return static_cast<int>(couplings.size()); }
  // Throws std::invalid_argument for an empty ensemble, mismatched sizes,
  // non-finite values or negative couplings.
  void validate() const;

  double g_av() const;      // sqrt(sum g_i^2 / N)
  double g_ens() const;     // sqrt(N) g_av
  double g_xi_av() const;   // sqrt(sum g_i^2 xi_i^2 / N)
  double g_xi2_av() const;  // sqrt(sum g_i^2 xi_i^4 / N)
  double chi_moment() const;  // sum g_i^2 xi_i
  // Coupling-weighted signed mean sum g_i^2 xi_i / sum g_i^2.
  double signed_mean_xi() const;

  // Normalized single-excitation amplitudes of the collective modes
  // b ~ g_i, c ~ g_i xi_i, d ~ g_i xi_i^2. c and d throw NumericalError when
  // their norm vanishes (all xi_i = 0).
  RealVector mode_b() const;
  RealVector mode_c() const;
  RealVector mode_d() const;

  // Flat text record: a header line "# g xi" then one "g_i xi_i" line per
  // qubit, written with full double precision.
  void write(std::ostream& out) const;
  static EnsembleSpec read(std::istream& in);
};

// xi_i ~ N(0, delta_xi^2); g_i from a Gaussian with mean g_av_target and
// standard deviation coupling_spread * g_av_target, redrawn until positive.
// Deterministic for a given seed on every platform.
EnsembleSpec sample_ensemble(int n, double g_av_target, double delta_xi, double coupling_spread,
                             std::uint64_t seed);

struct CollectiveOverlaps {
  double s = 0.0;         // <b|d>
  double b_c = 0.0;       // <b|c>
  double c_d = 0.0;       // <c|d>
  // |<m|m> - 1| for m = b, c, d after normalization.
  double norm_residual = 0.0;
};

CollectiveOverlaps collective_overlaps(const EnsembleSpec& ensemble);

// How the detuning moments entering the 4-mode couplings are taken from a
// realized ensemble.
enum class XiAverage {
  // xi_av = (g xi)_av / g_av and (xi^2)_av = (g xi^2)_av / g_av: the values
  // obtained by projecting the second-order term onto the mode basis.
  kRealized,
  // xi_av = coupling-weighted signed mean; vanishes in expectation.
  kSignedMean,
  // Gaussian large-N limits xi_av = delta_xi, (xi^2)_av = sqrt(3) delta_xi^2,
  // s = 1/sqrt(3).
  kGaussianLimit,
};

// Effective Hamiltonian on the orthonormal modes (a~, b~, c~, d~):
//   [0   w-   0   w+ ]
//   [w-  0    w'+ 0  ]
//   [0   w'+  0   w'-]
//   [w+  0    w'- 0  ]
struct FourModeModel {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Zero();
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double omega_prime_plus = 0.0;
  double omega_prime_minus = 0.0;
  double s = 0.0;
  double g_ens = 0.0;
  double tau = 0.0;
};

// Couplings from the overlap and detuning moments.
FourModeModel four_mode_model(double g_ens, double overlap, double xi_av, double xi2_av,
                              double tau);
// Large-N idealization with Gaussian detunings of width delta_xi.
FourModeModel four_mode_model(double g_ens, double delta_xi, double tau);
// Realized ensemble; an ensemble with all xi_i = 0 yields the exactly
// solvable model with vanishing primed couplings and s = 1/sqrt(3).
FourModeModel four_mode_model(const EnsembleSpec& ensemble, double tau,
                              XiAverage convention = XiAverage::kRealized,
                              double delta_xi = 0.0);

struct DoubletEnergies {
  double bright_plus = 0.0;   // E+(i)
  double bright_minus = 0.0;  // E-(i)
  double dark_plus = 0.0;     // E+(ii)
  double dark_minus = 0.0;    // E-(ii)
};

// Closed-form eigenvalues of the 4-mode matrix. Throws NumericalError when
// Sigma^2 exceeds omega_tot^2 by more than 1e-12 (relative).
DoubletEnergies doublet_energies(const FourModeModel& model);

// Sorted eigenvalues of order0 + order2 on the N + 1 single-excitation
// states. The operator acts within span{a, b, c, d}; its spectrum there is
// computed exactly and the orthogonal complement contributes zeros.
RealVector exact_spectrum(const EnsembleSpec& ensemble, double tau);

// Leading-order ensemble transfer error at tau = pi/(g_ens n_p).
double ensemble_transfer_error(double g_ens, double delta_xi, int n_p);

// Average fidelity of evolution under the 4-mode model for t_f = n_p tau
// against U0 = -i b^+ a on the cavity logical states {|0>, |1>} (six-state
// average). The vacuum carries zero energy.
double ensemble_transfer_fidelity_numeric(const FourModeModel& model, int n_p);

}  // namespace cqed

#endif  // CQED_ENSEMBLE_H_
