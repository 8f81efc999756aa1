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

#ifndef CQED_PULSES_H_
#define CQED_PULSES_H_

#include <functional>
#include <vector>

#include "cqed/core.h"
#include "cqed/params.h"

namespace cqed {

// Scalar control amplitude on [t_begin, t_end].
class Waveform {
 public:
  Waveform(std::function<double(double)> evaluator, double t_begin, double t_end,
           std::vector<double> breakpoints = {},
           std::function<double(double)> antiderivative = nullptr);

  // Throws std::out_of_range outside the support.
  double operator()(double t) const;
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  // Integral from t_begin to t; closed form when available, otherwise
  // adaptive quadrature over the breakpoint intervals.
  double integral(double t) const;

 private:
  std::function<double(double)> evaluator_;
  std::function<double(double)> antiderivative_;
  double t_begin_;
  double t_end_;
  std::vector<double> breakpoints_;
};

// Interval between consecutive pi-pulses with the number of pulses already
// applied (its parity selects the toggling-frame form).
struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  int pulses_before = 0;
  int parity() const { return pulses_before % 2; }
};

// Segments [0, tau/2), [(m-1/2)tau, (m+1/2)tau), ..., [(n_p-1/2)tau, n_p tau).
std::vector<Segment> squadd_segments(double tau, int n_p);

// Ideal SQUADD: +xi sigma_z/2 + g(a^+ s_- + a s_+) on even segments,
// -xi sigma_z/2 + g_off(a^+ s_+ + a s_-) on odd segments.
class PiecewiseHamiltonian {
 public:
  PiecewiseHamiltonian(double g, double g_off, double tau, int n_p);

  const std::vector<Segment>& segments() const { return segments_; }
  double g() const { return g_; }
  double g_off() const { return g_off_; }
  double tau() const { return tau_; }
  int n_p() const { return n_p_; }
  // Hamiltonian on a window of the given parity (single qubit, any fock_dim).
  Matrix window(int parity, double xi, const HilbertSpec& space) const;
  TimeDependentOperator generator(double xi, const HilbertSpec& space) const;

 private:
  double g_;
  double g_off_;
  double tau_;
  int n_p_;
  std::vector<Segment> segments_;
};

PiecewiseHamiltonian squadd_ideal(double g, double tau, int n_p, double g_off = 0.0);

// Single filtered square coupling pulse centred at 0.
double filtered_square_pulse(double t, double g, double tau_prime, double sigma_f);
// Integral of filtered_square_pulse over [t0, t1] (closed form).
double filtered_square_pulse_integral(double t0, double t1, double g, double tau_prime,
                                      double sigma_f);

// Coupling train sum_{j=0}^{n_p/2} g_sq(t - 2 j tau) on [0, n_p tau].
// sigma_f = infinity gives the unfiltered square train.
Waveform filtered_square_train(double g, double tau, double tau_prime, double sigma_f, int n_p);

// 10%-90% rise time 2 sqrt(2) erfinv(4/5) / sigma_f.
double rise_time(double sigma_f);
inline constexpr double kRiseTimeConstant = 2.563103;

// Time-averaged coupling over one period [0, 2 tau) of a train of pulses of
// width tau_prime centred at multiples of 2 tau.
double mean_coupling(double g, double tau, double tau_prime, double sigma_f);

// Pulse interval satisfying mean_coupling * n_p * tau = pi/2 with
// tau_prime = tau - rise_time(sigma_f) - t_p; bisection to 1e-12 relative.
double solve_filtered_tau(double g, int n_p, double sigma_f, double t_p = 0.0);

// Rectangular pi-pulse drive w(t): amplitude +-pi/t_p on
// [(m+1/2)tau - t_p/2, (m+1/2)tau + t_p/2], sign set by the phase pattern.
Waveform pi_pulse_train(const PulseSchedule& sched);
int pulse_sign(PhasePattern pattern, int m);

// theta(t) = integral of w from 0 to t.
double rotation_angle(const Waveform& w, double t);
// Closed form for the rectangular train; instantaneous pulses (t_p = 0)
// jump by +-pi at the pulse centre.
double rotation_angle(const PulseSchedule& sched, double t);

enum class HamiltonianVariant { kIdeal, kCounterRotating, kFiniteDuration };

std::string to_string(HamiltonianVariant variant);
HamiltonianVariant variant_from_string(const std::string& name);

// Toggling-frame Hamiltonian for a single qubit with detuning xi.
//  kIdeal: parity-dependent form with coupling c(t) (filtered train when
//    sigma_f is finite, square train otherwise, plus g_off on odd windows).
//  kCounterRotating: adds the a^+ s_+ exp(2 i omega_q t) terms.
//  kFiniteDuration: continuous theta(t) form for rectangular pulses of
//    duration t_p; reduces to kIdeal as t_p -> 0.
TimeDependentOperator toggling_hamiltonian(const SystemParams& params,
                                           const PulseSchedule& sched,
                                           HamiltonianVariant variant, double xi,
                                           const HilbertSpec& space);

}  // namespace cqed

#endif  // CQED_PULSES_H_
