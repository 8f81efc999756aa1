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

#include "cqed/pulses.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cqed/quadrature.h"

namespace cqed {

void SystemParams::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("g must be positive");
  if (!(delta_xi >= 0.0) || !std::isfinite(delta_xi)) {
    throw std::invalid_argument("delta_xi must be non-negative");
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("kappa must be non-negative");
  }
  if (!(omega_q > 0.0)) throw std::invalid_argument("omega_q must be positive");
}

std::string to_string(PhasePattern pattern) {
  switch (pattern) {
    case PhasePattern::kFixed:
      return "fixed";
    case PhasePattern::kAlternateEach:
      return "alternate_each";
    case PhasePattern::kAlternatePairs:
      return "alternate_pairs";
  }
  return "fixed";
}

PhasePattern phase_pattern_from_string(const std::string& name) {
  if (name == "fixed") return PhasePattern::kFixed;
  if (name == "alternate_each") return PhasePattern::kAlternateEach;
  if (name == "alternate_pairs") return PhasePattern::kAlternatePairs;
  throw std::invalid_argument("unknown phase pattern '" + name + "'");
}

void PulseSchedule::validate(bool require_even) const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be positive");
  if (n_p < 1) throw std::invalid_argument("n_p must be positive");
  if (require_even && n_p % 2 != 0) throw std::invalid_argument("n_p must be even");
  if (!(width() > 0.0) || width() > tau * (1.0 + 1e-12)) {
    throw std::invalid_argument("tau_prime must lie in (0, tau]");
  }
  if (!(sigma_f > 0.0)) throw std::invalid_argument("sigma_f must be positive");
  if (!(t_p >= 0.0) || t_p >= tau) throw std::invalid_argument("t_p must lie in [0, tau)");
  if (!(g_off >= 0.0)) throw std::invalid_argument("g_off must be non-negative");
}

Waveform::Waveform(std::function<double(double)> evaluator, double t_begin, double t_end,
                   std::vector<double> breakpoints, std::function<double(double)> antiderivative)
    : evaluator_(std::move(evaluator)),
      antiderivative_(std::move(antiderivative)),
      t_begin_(t_begin),
      t_end_(t_end),
      breakpoints_(std::move(breakpoints)) {
  if (!(t_end >= t_begin)) throw std::invalid_argument("Waveform: empty support");
  breakpoints_.push_back(t_begin);
  breakpoints_.push_back(t_end);
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
  std::erase_if(breakpoints_, [&](double b) { return b < t_begin_ || b > t_end_; });
}

double Waveform::operator()(double t) const {
  if (t < t_begin_ || t > t_end_) throw std::out_of_range("Waveform: time outside support");
  return evaluator_(t);
}

double Waveform::integral(double t) const {
  if (t < t_begin_ || t > t_end_) throw std::out_of_range("Waveform: time outside support");
  if (antiderivative_) return antiderivative_(t) - antiderivative_(t_begin_);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints_.size() && breakpoints_[i] < t; ++i) {
    double b = std::min(t, breakpoints_[i + 1]);
    total += integrate(evaluator_, breakpoints_[i], b, 1e-12);
  }
  return total;
}

std::vector<Segment> squadd_segments(double tau, int n_p) {
  std::vector<Segment> out;
  out.reserve(n_p + 1);
  double start = 0.0;
  for (int m = 0; m <= n_p; ++m) {
    double end = m < n_p ? (m + 0.5) * tau : n_p * tau;
    out.push_back({start, end, m});
    start = end;
  }
  return out;
}

namespace {

struct SingleQubitOps {
  Matrix a, ad, sm, sp, sz, sy;
  explicit SingleQubitOps(const HilbertSpec& space) {
    if (space.n_qubits != 1) {
      throw std::invalid_argument("single-qubit Hamiltonian requires n_qubits = 1");
    }
    a = build_canonical(space, OpKind::kA).matrix;
    ad = build_canonical(space, OpKind::kADagger).matrix;
    sm = build_canonical(space, OpKind::kSigmaMinus).matrix;
    sp = build_canonical(space, OpKind::kSigmaPlus).matrix;
    sz = build_canonical(space, OpKind::kSigmaZ).matrix;
    sy = build_canonical(space, OpKind::kSigmaY).matrix;
  }
  Matrix co_rotating() const { return ad * sm + a * sp; }
  Matrix counter_rotating() const { return ad * sp + a * sm; }
};

int pulses_before(double t, double tau, int n_p) {
  int n = static_cast<int>(std::floor(t / tau + 0.5));
  return std::clamp(n, 0, n_p);
}

// erf(x1) - erf(x2) without cancellation in the tails.
double erf_difference(double x1, double x2) {
  if (x1 > 0 && x2 > 0) return std::erfc(x2) - std::erfc(x1);
  if (x1 < 0 && x2 < 0) return std::erfc(-x1) - std::erfc(-x2);
  return std::erf(x1) - std::erf(x2);
}

double erf_antiderivative(double x) {
  return x * std::erf(x) + std::exp(-x * x) / std::sqrt(std::numbers::pi);
}

}  // namespace

PiecewiseHamiltonian::PiecewiseHamiltonian(double g, double g_off, double tau, int n_p)
    : g_(g), g_off_(g_off), tau_(tau), n_p_(n_p), segments_(squadd_segments(tau, n_p)) {}

Matrix PiecewiseHamiltonian::window(int parity, double xi, const HilbertSpec& space) const {
  SingleQubitOps ops(space);
  if (parity % 2 == 0) return 0.5 * xi * ops.sz + g_ * ops.co_rotating();
  return -0.5 * xi * ops.sz + g_off_ * ops.counter_rotating();
}

TimeDependentOperator PiecewiseHamiltonian::generator(double xi, const HilbertSpec& space) const {
  Matrix even = window(0, xi, space);
  Matrix odd = window(1, xi, space);
  TimeDependentOperator h;
  double tau = tau_;
  int n_p = n_p_;
  h.at = [even, odd, tau, n_p](double t) -> Matrix {
    return pulses_before(t, tau, n_p) % 2 == 0 ? even : odd;
  };
  for (const Segment& s : segments_) h.breakpoints.push_back(s.t0);
  h.breakpoints.push_back(segments_.back().t1);
  h.piecewise_constant = true;
  h.dim = space.dim();
  return h;
}

PiecewiseHamiltonian squadd_ideal(double g, double tau, int n_p, double g_off) {
  if (!(g > 0.0)) throw std::invalid_argument("squadd_ideal: g must be positive");
  if (!(tau > 0.0)) throw std::invalid_argument("squadd_ideal: tau must be positive");
  if (n_p < 2 || n_p % 2 != 0) throw std::invalid_argument("squadd_ideal: n_p must be even");
  if (!(g_off >= 0.0)) throw std::invalid_argument("squadd_ideal: g_off must be >= 0");
  return PiecewiseHamiltonian(g, g_off, tau, n_p);
}

double filtered_square_pulse(double t, double g, double tau_prime, double sigma_f) {
  if (std::isinf(sigma_f)) return std::abs(t) <= 0.5 * tau_prime ? g : 0.0;
  double c = sigma_f / std::sqrt(2.0);
  return 0.5 * g * erf_difference(c * (t + 0.5 * tau_prime), c * (t - 0.5 * tau_prime));
}

double filtered_square_pulse_integral(double t0, double t1, double g, double tau_prime,
                                      double sigma_f) {
  if (std::isinf(sigma_f)) {
    double lo = std::max(t0, -0.5 * tau_prime);
    double hi = std::min(t1, 0.5 * tau_prime);
    return hi > lo ? g * (hi - lo) : 0.0;
  }
  double c = sigma_f / std::sqrt(2.0);
  auto prim = [&](double t) {
    return erf_antiderivative(c * (t + 0.5 * tau_prime)) -
           erf_antiderivative(c * (t - 0.5 * tau_prime));
  };
  return 0.5 * g / c * (prim(t1) - prim(t0));
}

Waveform filtered_square_train(double g, double tau, double tau_prime, double sigma_f, int n_p) {
  if (!(sigma_f > 0.0)) throw std::invalid_argument("filtered_square_train: sigma_f must be > 0");
  if (!(tau > 0.0) || !(tau_prime > 0.0)) {
    throw std::invalid_argument("filtered_square_train: tau and tau_prime must be > 0");
  }
  if (n_p < 1) throw std::invalid_argument("filtered_square_train: n_p must be positive");
  double reach = (std::isinf(sigma_f) ? 0.0 : 10.0 / sigma_f) + tau_prime;
  int j_max = n_p / 2;
  auto eval = [=](double t) {
    int lo = std::max(0, static_cast<int>(std::floor((t - reach) / (2.0 * tau))));
    int hi = std::min(j_max, static_cast<int>(std::ceil((t + reach) / (2.0 * tau))));
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += filtered_square_pulse(t - 2.0 * j * tau, g, tau_prime, sigma_f);
    return sum;
  };
  auto prim = [=](double t) {
    double sum = 0.0;
    for (int j = 0; j <= j_max; ++j) {
      double centre = 2.0 * j * tau;
      sum += filtered_square_pulse_integral(-reach - tau_prime, t - centre, g, tau_prime, sigma_f);
    }
    return sum;
  };
  std::vector<double> breaks;
  if (std::isinf(sigma_f)) {
    for (int j = 0; j <= j_max; ++j) {
      breaks.push_back(2.0 * j * tau - 0.5 * tau_prime);
      breaks.push_back(2.0 * j * tau + 0.5 * tau_prime);
    }
  }
  return Waveform(eval, 0.0, n_p * tau, breaks, prim);
}

double rise_time(double sigma_f) {
  if (!(sigma_f > 0.0)) throw std::invalid_argument("rise_time: sigma_f must be positive");
  return kRiseTimeConstant / sigma_f;
}

double mean_coupling(double g, double tau, double tau_prime, double sigma_f) {
  // Pulses centred at 0 and 2 tau overlap the first period; the next ones
  // contribute only through filter tails.
  double total = 0.0;
  for (int j = 0; j <= 3; ++j) {
    double centre = 2.0 * j * tau;
    total += filtered_square_pulse_integral(-centre, 2.0 * tau - centre, g, tau_prime, sigma_f);
  }
  return total / (2.0 * tau);
}

double solve_filtered_tau(double g, int n_p, double sigma_f, double t_p) {
  if (!(g > 0.0) || n_p < 1) throw std::invalid_argument("solve_filtered_tau: bad g or n_p");
  double guard = (std::isinf(sigma_f) ? 0.0 : rise_time(sigma_f)) + t_p;
  auto condition = [&](double tau) {
    return mean_coupling(g, tau, tau - guard, sigma_f) * n_p * tau - 0.5 * std::numbers::pi;
  };
  double lo = guard * (1.0 + 1e-12) + 1e-300;
  double hi = std::max(4.0 * std::numbers::pi / (g * n_p), 4.0 * guard);
  return bisect(condition, lo, hi, 1e-12);
}

int pulse_sign(PhasePattern pattern, int m) {
  switch (pattern) {
    case PhasePattern::kFixed:
      return 1;
    case PhasePattern::kAlternateEach:
      return m % 2 == 0 ? 1 : -1;
    case PhasePattern::kAlternatePairs:
      return (m / 2) % 2 == 0 ? 1 : -1;
  }
  return 1;
}

double rotation_angle(const PulseSchedule& sched, double t) {
  if (t < 0.0 || t > sched.t_f() * (1.0 + 1e-14)) {
    throw std::out_of_range("rotation_angle: time outside schedule");
  }
  double theta = 0.0;
  for (int m = 0; m < sched.n_p; ++m) {
    double centre = (m + 0.5) * sched.tau;
    double start = centre - 0.5 * sched.t_p;
    if (t < start) break;
    double sign = pulse_sign(sched.pattern, m);
    if (sched.t_p == 0.0 || t >= centre + 0.5 * sched.t_p) {
      theta += sign * std::numbers::pi;
    } else {
      theta += sign * std::numbers::pi / sched.t_p * (t - start);
    }
  }
  return theta;
}

Waveform pi_pulse_train(const PulseSchedule& sched) {
  if (!(sched.t_p > 0.0)) throw std::invalid_argument("pi_pulse_train: requires t_p > 0");
  PulseSchedule s = sched;
  double amplitude = std::numbers::pi / s.t_p;
  auto eval = [s, amplitude](double t) {
    int m = static_cast<int>(std::floor(t / s.tau));
    for (int k = std::max(0, m - 1); k <= std::min(s.n_p - 1, m + 1); ++k) {
      double centre = (k + 0.5) * s.tau;
      if (std::abs(t - centre) <= 0.5 * s.t_p) return pulse_sign(s.pattern, k) * amplitude;
    }
    return 0.0;
  };
  std::vector<double> breaks;
  for (int m = 0; m < s.n_p; ++m) {
    breaks.push_back((m + 0.5) * s.tau - 0.5 * s.t_p);
    breaks.push_back((m + 0.5) * s.tau + 0.5 * s.t_p);
  }
  auto prim = [s](double t) { return rotation_angle(s, std::clamp(t, 0.0, s.t_f())); };
  return Waveform(eval, 0.0, s.t_f(), breaks, prim);
}

double rotation_angle(const Waveform& w, double t) { return w.integral(t); }

std::string to_string(HamiltonianVariant variant) {
  switch (variant) {
    case HamiltonianVariant::kIdeal:
      return "ideal";
    case HamiltonianVariant::kCounterRotating:
      return "counter_rotating";
    case HamiltonianVariant::kFiniteDuration:
      return "finite_duration";
  }
  return "ideal";
}

HamiltonianVariant variant_from_string(const std::string& name) {
  if (name == "ideal") return HamiltonianVariant::kIdeal;
  if (name == "counter_rotating") return HamiltonianVariant::kCounterRotating;
  if (name == "finite_duration") return HamiltonianVariant::kFiniteDuration;
  throw std::invalid_argument("unknown Hamiltonian variant '" + name + "'");
}

TimeDependentOperator toggling_hamiltonian(const SystemParams& params,
                                           const PulseSchedule& sched,
                                           HamiltonianVariant variant, double xi,
                                           const HilbertSpec& space) {
  params.validate();
  sched.validate(false);
  if (variant == HamiltonianVariant::kCounterRotating && !std::isfinite(params.omega_q)) {
    throw std::invalid_argument("counter-rotating variant requires a finite omega_q");
  }
  if (variant == HamiltonianVariant::kFiniteDuration && !(sched.t_p > 0.0)) {
    throw std::invalid_argument("finite-duration variant requires t_p > 0");
  }
  if (variant != HamiltonianVariant::kFiniteDuration && sched.t_p > 0.0) {
    throw std::invalid_argument("t_p > 0 requires the finite-duration variant");
  }
  SingleQubitOps ops(space);
  const double tau = sched.tau;
  const int n_p = sched.n_p;
  const double g_off = sched.g_off;
  const bool filtered = std::isfinite(sched.sigma_f);
  Waveform coupling = filtered_square_train(params.g, tau, sched.width(), sched.sigma_f, n_p);

  Matrix co = ops.co_rotating();
  Matrix cr = ops.counter_rotating();
  Matrix hz = 0.5 * xi * ops.sz;
  Matrix hy = 0.5 * xi * ops.sy;
  Matrix displacement = 0.5 * kI * (ops.ad - ops.a) * ops.sz;
  Matrix ad_sp = ops.ad * ops.sp;
  Matrix ad_sm = ops.ad * ops.sm;

  TimeDependentOperator h;
  h.dim = space.dim();

  // Breakpoints: pulse instants or pulse edges, square-coupling edges, and a
  // refinement zone around every filtered edge.
  std::vector<double> breaks = {0.0, sched.t_f()};
  std::vector<std::pair<double, double>> fine_zones;
  for (int m = 0; m < n_p; ++m) {
    double centre = (m + 0.5) * tau;
    if (sched.t_p > 0.0) {
      breaks.push_back(centre - 0.5 * sched.t_p);
      breaks.push_back(centre + 0.5 * sched.t_p);
      fine_zones.emplace_back(centre - 0.5 * sched.t_p, centre + 0.5 * sched.t_p);
    } else {
      breaks.push_back(centre);
    }
  }
  for (int j = 0; j <= n_p / 2; ++j) {
    for (double edge : {2.0 * j * tau - 0.5 * sched.width(), 2.0 * j * tau + 0.5 * sched.width()}) {
      if (filtered) {
        breaks.push_back(edge - 4.0 / sched.sigma_f);
        breaks.push_back(edge + 4.0 / sched.sigma_f);
        fine_zones.emplace_back(edge - 4.0 / sched.sigma_f, edge + 4.0 / sched.sigma_f);
      } else {
        breaks.push_back(edge);
      }
    }
  }
  std::erase_if(breaks, [&](double b) { return b < 0.0 || b > sched.t_f(); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [&](double x, double y) { return std::abs(x - y) <= 1e-15 * sched.t_f(); }),
               breaks.end());
  h.breakpoints = breaks;

  double fast_step = kInfinity;
  if (variant == HamiltonianVariant::kCounterRotating) {
    fast_step = std::numbers::pi / (8.0 * params.omega_q);
  }
  h.max_steps.assign(breaks.size() - 1, fast_step);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    for (const auto& [lo, hi] : fine_zones) {
      if (mid > lo && mid < hi) {
        double fine = filtered ? 0.5 / sched.sigma_f : kInfinity;
        if (sched.t_p > 0.0) fine = std::min(fine, sched.t_p / 4.0);
        h.max_steps[i] = std::min(h.max_steps[i], fine);
      }
    }
  }

  // Between finite-duration pulses the unfiltered Hamiltonian is constant.
  if (variant == HamiltonianVariant::kFiniteDuration && !filtered) {
    h.constant_intervals.assign(breaks.size() - 1, true);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
      double mid = 0.5 * (breaks[i] + breaks[i + 1]);
      for (const auto& [lo, hi] : fine_zones) {
        if (mid > lo && mid < hi) h.constant_intervals[i] = false;
      }
    }
  }

  auto coupling_at = [coupling, tau, n_p, g_off](double t) {
    double c = coupling(std::clamp(t, coupling.t_begin(), coupling.t_end()));
    if (g_off > 0.0 && pulses_before(t, tau, n_p) % 2 == 1) c += g_off;
    return c;
  };

  switch (variant) {
    case HamiltonianVariant::kIdeal:
      h.piecewise_constant = !filtered;
      h.at = [=](double t) -> Matrix {
        double c = coupling_at(t);
        if (pulses_before(t, tau, n_p) % 2 == 0) return hz + c * co;
        return -hz + c * cr;
      };
      break;
    case HamiltonianVariant::kCounterRotating: {
      double omega_q = params.omega_q;
      h.at = [=](double t) -> Matrix {
        double c = coupling_at(t);
        cplx phase = std::exp(2.0 * kI * omega_q * t);
        if (pulses_before(t, tau, n_p) % 2 == 0) {
          Matrix v = ad_sm + phase * ad_sp;
          return hz + c * (v + v.adjoint());
        }
        Matrix v = ad_sp + phase * ad_sm;
        return -hz + c * (v + v.adjoint());
      };
      break;
    }
    case HamiltonianVariant::kFiniteDuration: {
      PulseSchedule s = sched;
      h.at = [=](double t) -> Matrix {
        double theta = rotation_angle(s, std::clamp(t, 0.0, s.t_f()));
        double ct = std::cos(theta);
        double st = std::sin(theta);
        double c = coupling_at(t);
        return ct * hz + st * hy +
               c * (0.5 * (1.0 + ct) * co + 0.5 * (1.0 - ct) * cr + st * displacement);
      };
      break;
    }
  }
  return h;
}

}  // namespace cqed
