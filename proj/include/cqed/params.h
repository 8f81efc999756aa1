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

#ifndef CQED_PARAMS_H_
#define CQED_PARAMS_H_

#include <cmath>
#include <limits>
#include <string>

namespace cqed {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Physical constants of one qubit-cavity instance. Rates in rad/s (or in
// units of g when g = 1).
struct SystemParams {
  double g = 1.0;
  double delta_xi = 0.0;  // standard deviation of the static detuning
  double kappa = 0.0;     // cavity energy damping rate
  double omega_q = kInfinity;

  void validate() const;
  // T2* = sqrt(2)/delta_xi; infinite when delta_xi = 0.
  double t2_star() const { return delta_xi > 0 ? std::sqrt(2.0) / delta_xi : kInfinity; }
  static double delta_xi_from_t2_star(double t2_star) { return std::sqrt(2.0) / t2_star; }
};

enum class PhasePattern { kFixed, kAlternateEach, kAlternatePairs };

std::string to_string(PhasePattern pattern);
PhasePattern phase_pattern_from_string(const std::string& name);

// Timing and shape of one decoupling run. pi-pulses are centred at
// (m + 1/2) tau, m = 0 .. n_p - 1; coupling pulses are centred at 2 j tau.
struct PulseSchedule {
  double tau = 0.0;
  int n_p = 0;
  double tau_prime = -1.0;     // coupling-pulse width; negative means tau
  double sigma_f = kInfinity;  // Gaussian filter width; infinity = square
  double t_p = 0.0;            // pi-pulse duration; 0 = instantaneous
  double g_off = 0.0;          // residual coupling during odd windows
  PhasePattern pattern = PhasePattern::kFixed;

  double width() const { return tau_prime < 0 ? tau : tau_prime; }
  double t_f() const { return n_p * tau; }
  // Throws std::invalid_argument. require_even enforces the transfer-protocol
  // constraint n_p even.
  void validate(bool require_even = true) const;
};

}  // namespace cqed

#endif  // CQED_PARAMS_H_
