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

#ifndef CQED_TRANSFER_H_
#define CQED_TRANSFER_H_

#include "cqed/core.h"
#include "cqed/params.h"
#include "cqed/quadrature.h"

namespace cqed {

// One decoupling period U1 = W - i(A tau_x + B tau_z) = R_v(theta) on the
// single-excitation pseudospin {|e0>, |g1>} (tau_z = |e0><e0| - |g1><g1|).
struct PeriodRotation {
  double theta = 0.0;  // in [0, 2 pi]
  double v_x = 1.0;
  double v_z = 0.0;
  double a = 0.0;
  double b = 0.0;
  double w = 1.0;      // signed cos(theta/2)
};

PeriodRotation single_period_rotation(double g, double xi, double tau);

// Transfer fidelity for one detuning: (1 + v_x^2 s^2 + v_x s)/3 with
// s = sin(n_p theta/4).
double transfer_fidelity_at(double g, double xi, int n_p, double tau);

struct FidelityEstimate {
  double fidelity = 0.0;
  int nodes = 0;
  bool converged = false;
};

// Gaussian average over xi ~ N(0, delta_xi^2); kappa is ignored.
FidelityEstimate transfer_fidelity_exact(const SystemParams& params, int n_p, double tau,
                                         const QuadraturePolicy& policy = {});

// Large-n_p error at tau = pi/(g n_p).
double transfer_error_asymptotic(const SystemParams& params, int n_p);

// Large-n_p plateau pi kappa / (6 g).
double saturation_error(const SystemParams& params);

// Leading fidelity correction for over-rotation epsilon in a phase-alternated
// sequence: -c (epsilon delta_xi/g)^2 with c = (4/3 - sin(pi/sqrt2)/sqrt2)/2.
double pulse_error_constant();
double pulse_error_correction(double epsilon, const SystemParams& params);

// Complete-transfer interval pi/(g n_p).
double optimal_tau(double g, int n_p);

// Logical states for the single-qubit transfer |e0> -> -i|g1>, |g0> -> |g0>
// on the given space.
struct TransferBasis {
  Vector in0, in1, out0, out1;
};
TransferBasis single_qubit_transfer_basis(const HilbertSpec& space);

// Average fidelity of free Jaynes-Cummings evolution (no pulses) for time
// t, averaged over the Gaussian detuning; used for the no-pulse reference.
FidelityEstimate transfer_fidelity_free(const SystemParams& params, double t,
                                        const QuadraturePolicy& policy = {});

}  // namespace cqed

#endif  // CQED_TRANSFER_H_
