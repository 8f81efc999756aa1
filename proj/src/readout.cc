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

#include "cqed/readout.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/random/exponential_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

#include "cqed/magnus.h"
#include "cqed/parallel.h"
#include "cqed/params.h"
#include "cqed/pulses.h"
#include "cqed/quadrature.h"

namespace cqed {
namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

// Below this gamma t the closed forms are replaced by their gamma -> 0 limits
// (relative error of order gamma t).
constexpr double kSmallGammaT = 1e-18;

Wide wide_kernel(const Wide& gam, const Wide& kap, const Wide& t) {
  using boost::multiprecision::exp;
  Wide eg = exp(-gam * t);
  Wide ek = exp(-kap * t / 2);
  Wide r = 2 * gam / kap;
  Wide q = gam / kap;
  return gam * t - gam / (gam + kap / 2) * (1 + r) * (1 - exp(-(gam + kap / 2) * t)) -
         (1 - r * ek) * (1 - eg) + r * (1 - ek) * (eg + q * (1 - ek)) -
         4 * q * q * (gam * t - q * (3 - 4 * ek + ek * ek));
}

// (1 - e^{-gamma t})/gamma with its gamma -> 0 limit.
Wide wide_decay_integral(const Wide& gam, const Wide& t) {
  if (gam == 0) return t;
  return (1 - boost::multiprecision::exp(-gam * t)) / gam;
}

struct ReadoutOperators {
  HilbertSpec space;
  Matrix a;
  Matrix sx;
  Matrix even;  // superoperators
  Matrix odd;
  Matrix leading;
  Matrix averaged;
};

ReadoutOperators readout_operators(const ReadoutConfig& cfg, int fock_dim) {
  ReadoutOperators ops;
  ops.space = {1, fock_dim};
  ops.space.validate();
  ops.a = build_canonical(ops.space, OpKind::kA).matrix;
  ops.sx = build_canonical(ops.space, OpKind::kSigmaX).matrix;
  SystemParams params;
  params.g = cfg.g;
  params.kappa = cfg.kappa;
  Matrix damping = cfg.kappa * dissipator_superoperator(ops.a);
  if (cfg.g == 0.0) {
    // Uncoupled cavity: every generator reduces to the damping.
    ops.even = ops.odd = ops.leading = ops.averaged = damping;
    return ops;
  }
  MagnusTerms terms = readout_liouvillian_terms(params, cfg.tau, ops.space);
  PiecewiseHamiltonian windows = squadd_ideal(cfg.g, cfg.tau, 2, cfg.g);
  ops.even = hamiltonian_superoperator(windows.window(0, 0.0, ops.space)) + damping;
  ops.odd = hamiltonian_superoperator(windows.window(1, 0.0, ops.space)) + damping;
  ops.leading = terms.order0;
  ops.averaged = terms.order0 + terms.order2;
  return ops;
}

// Augmented generator acting on (vec rho, vec Z, m1, m2).
Matrix augmented(const Matrix& l, const ReadoutOperators& ops) {
  const int n = static_cast<int>(l.rows());
  const int d = ops.space.dim();
  Matrix g = Matrix::Zero(2 * n + 2, 2 * n + 2);
  g.block(0, 0, n, n) = l;
  g.block(n, n, n, n) = l;
  g.block(n, 0, n, n) = kron(Matrix::Identity(d, d), ops.a);
  Eigen::RowVectorXcd quadrature = trace_functional(ops.a.adjoint() - ops.a);
  g.block(2 * n, 0, 1, n) = quadrature;
  g.block(2 * n + 1, n, 1, n) = quadrature;
  return g;
}

// exp(g t) for the augmented generator (not a superoperator on its own).
Matrix expm_augmented(const Matrix& g, double t) { return Matrix(g * t).exp(); }

// Map of one period 2 tau for the selected generator.
Matrix period_map(const ReadoutConfig& cfg, const ReadoutOperators& ops,
                  ReadoutGenerator generator) {
  const double tau = cfg.tau;
  switch (generator) {
    case ReadoutGenerator::kLeading:
      return expm_augmented(augmented(ops.leading, ops), 2.0 * tau);
    case ReadoutGenerator::kAveraged:
      return expm_augmented(augmented(ops.averaged, ops), 2.0 * tau);
    case ReadoutGenerator::kPiecewise: {
      Matrix half = expm_augmented(augmented(ops.even, ops), 0.5 * tau);
      Matrix odd = expm_augmented(augmented(ops.odd, ops), tau);
      return half * odd * half;
    }
  }
  throw std::invalid_argument("readout: unknown generator");
}

Vector initial_state(const ReadoutOperators& ops, int sign) {
  const HilbertSpec& s = ops.space;
  Vector psi = (basis_state(s, {0}, 0) + double(sign) * basis_state(s, {1}, 0)) / std::sqrt(2.0);
  Matrix rho = psi * psi.adjoint();
  const int n = s.dim() * s.dim();
  Vector u = Vector::Zero(2 * n + 2);
  u.head(n) = vec(rho);
  return u;
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments moments(const Vector& u, double kappa, double t) {
  const Eigen::Index n = (u.size() - 2) / 2;
  cplx m1 = u(2 * n);
  cplx m2 = u(2 * n + 1);
  double mean = std::real(kI * kappa * m1);
  double second = kappa * t + 4.0 * kappa * kappa * std::real(m2);
  return {mean, second - mean * mean};
}

ReadoutResult numeric_result(const ReadoutConfig& cfg, const Vector& plus, const Vector& minus,
                             double t) {
  Moments p = moments(plus, cfg.kappa, t);
  Moments m = moments(minus, cfg.kappa, t);
  ReadoutResult r;
  r.t_f = t;
  r.X = std::abs(p.mean - m.mean);
  r.Xi = std::sqrt(std::max(0.0, p.variance + m.variance));
  r.snr = r.Xi > 0.0 ? r.X / r.Xi : 0.0;
  r.gamma = gamma_switching(cfg);
  r.method = ReadoutMethod::kNumeric;
  return r;
}

// map^k u by binary powering.
template <typename T>
T apply_power(const Matrix& map, long k, T u) {
  Matrix power = map;
  while (k > 0) {
    if (k & 1) u = power * u;
    k >>= 1;
    if (k > 0) power = power * power;
  }
  return u;
}

Matrix matrix_power(const Matrix& map, long k) {
  return apply_power(map, k, Matrix(Matrix::Identity(map.rows(), map.cols())));
}

long whole_periods(double t, double tau) {
  return std::max(0L, std::lround(t / (2.0 * tau)));
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr long kChunk = 8192;

// Integrated signal of one telegraph trajectory starting in state sign.
double trajectory_signal(const ReadoutConfig& cfg, double gamma, int sign,
                         boost::random::mt19937_64& engine) {
  const double tf = cfg.t_f;
  const double k = cfg.kappa;
  auto kernel = [&](double a, double b) {
    return (b - a) - (2.0 / k) * (std::exp(-0.5 * k * (tf - b)) - std::exp(-0.5 * k * (tf - a)));
  };
  double s = sign;
  double t = 0.0;
  double total = 0.0;
  if (gamma > 0.0) {
    boost::random::exponential_distribution<double> wait(0.5 * gamma);
    for (;;) {
      double next = t + wait(engine);
      if (next >= tf) break;
      total += s * kernel(t, next);
      s = -s;
      t = next;
    }
  }
  total += s * kernel(t, tf);
  return -2.0 * cfg.g * total;
}

}  // namespace

void ReadoutConfig::validate() const {
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("readout: g must be >= 0");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("readout: kappa must be positive");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("readout: tau must be positive");
  if (!(t_f >= 0.0) || !std::isfinite(t_f)) throw std::invalid_argument("readout: t_f must be >= 0");
}

bool ReadoutConfig::in_convergence_domain() const {
  return kappa * tau < 0.5 * std::numbers::pi;
}

std::string to_string(ReadoutMethod method) {
  switch (method) {
    case ReadoutMethod::kAnalytic: return "analytic";
    case ReadoutMethod::kSimplified: return "simplified";
    case ReadoutMethod::kNumeric: return "numeric";
    case ReadoutMethod::kMonteCarlo: return "monte_carlo";
  }
  return "unknown";
}

double gamma_switching(const ReadoutConfig& cfg) {
  return cfg.g * cfg.g * cfg.tau * cfg.tau * cfg.kappa / 24.0;
}

double gamma_validity_time(const ReadoutConfig& cfg) {
  double kt = cfg.kappa * cfg.tau;
  return 256.0 / (3.0 * kt * kt * cfg.kappa);
}

DisplacementCheck conditional_displacement_check(const ReadoutConfig& cfg,
                                                 ReadoutGenerator generator) {
  cfg.validate();
  if (generator == ReadoutGenerator::kAveraged) {
    throw std::invalid_argument("conditional_displacement_check: use kLeading or kPiecewise");
  }
  double t = cfg.t_f;
  if (generator == ReadoutGenerator::kPiecewise) t = 2.0 * cfg.tau * whole_periods(cfg.t_f, cfg.tau);
  const cplx alpha = -kI * cfg.g * t / 2.0;

  auto evaluate = [&](int fock) {
    HilbertSpec space{1, fock};
    Matrix a = build_canonical(space, OpKind::kA).matrix;
    Matrix sx = build_canonical(space, OpKind::kSigmaX).matrix;
    Matrix u;
    if (generator == ReadoutGenerator::kLeading) {
      u = expm_hermitian(0.5 * cfg.g * (a + a.adjoint()) * sx, t);
    } else {
      PiecewiseHamiltonian windows = squadd_ideal(cfg.g, cfg.tau, 2, cfg.g);
      Matrix half = expm_hermitian(windows.window(0, 0.0, space), 0.5 * cfg.tau);
      Matrix odd = expm_hermitian(windows.window(1, 0.0, space), cfg.tau);
      Matrix period = half * odd * half;
      u = Matrix::Identity(space.dim(), space.dim());
      long n = whole_periods(cfg.t_f, cfg.tau);
      Matrix power = period;
      while (n > 0) {
        if (n & 1) u = power * u;
        n >>= 1;
        if (n > 0) power = power * power;
      }
    }
    std::array<double, 2> overlaps{};
    for (int k = 0; k < 2; ++k) {
      int sign = k == 0 ? 1 : -1;
      Vector psi = (basis_state(space, {0}, 0) + double(sign) * basis_state(space, {1}, 0)) /
                   std::sqrt(2.0);
      Vector out = u * psi;
      // Reduced cavity state: sum over the two qubit blocks.
      Matrix rho_c = out.head(fock) * out.head(fock).adjoint() +
                     out.tail(fock) * out.tail(fock).adjoint();
      cplx amp = double(sign) * alpha;
      Vector coherent(fock);
      double log_norm = -0.5 * std::norm(amp);
      for (int n = 0; n < fock; ++n) {
        coherent(n) = std::exp(log_norm - 0.5 * std::lgamma(n + 1.0)) *
                      (n == 0 ? cplx(1.0) : std::pow(amp, n));
      }
      overlaps[k] = std::real(coherent.dot(rho_c * coherent));
    }
    return overlaps;
  };

  int fock = 8;
  auto current = evaluate(fock);
  for (;;) {
    if (fock >= 512) throw NumericalError("conditional_displacement_check: Fock truncation did not converge");
    auto next = evaluate(2 * fock);
    double change = std::max(std::abs(next[0] - current[0]), std::abs(next[1] - current[1]));
    fock *= 2;
    current = next;
    if (change < 1e-10) break;
  }
  DisplacementCheck check;
  check.overlap_plus = current[0];
  check.overlap_minus = current[1];
  check.alpha = alpha;
  check.fock_dim = fock;
  return check;
}

double readout_noise_kernel(double gamma, double kappa, double t) {
  return static_cast<double>(wide_kernel(Wide(gamma), Wide(kappa), Wide(t)));
}

ReadoutResult signal_noise_analytic(const ReadoutConfig& cfg, double gamma) {
  cfg.validate();
  if (!(gamma >= 0.0)) throw std::invalid_argument("signal_noise_analytic: gamma must be >= 0");
  if (!(gamma < 0.5 * cfg.kappa)) {
    throw std::invalid_argument("signal_noise_analytic: gamma must be below kappa/2");
  }
  const Wide g(cfg.g), k(cfg.kappa), t(cfg.t_f);
  const bool limit = gamma * cfg.t_f < kSmallGammaT;
  const Wide gam = limit ? Wide(0) : Wide(gamma);
  using boost::multiprecision::exp;
  Wide x = 2 * g * k / (k / 2 - gam) * (wide_decay_integral(gam, t) - (1 - exp(-k * t / 2)) / (k / 2));
  Wide xi2;
  if (limit) {
    xi2 = 2 * k * t;
  } else {
    xi2 = 2 * k * t + 4 * g * g * k * k / ((k * k / 4 - gam * gam) * gam * gam) * wide_kernel(gam, k, t) -
          x * x / 2;
  }
  ReadoutResult r;
  r.t_f = cfg.t_f;
  r.X = static_cast<double>(boost::multiprecision::abs(x));
  r.Xi = std::sqrt(std::max(0.0, static_cast<double>(xi2)));
  r.snr = r.Xi > 0.0 ? r.X / r.Xi : 0.0;
  r.gamma = gamma;
  r.t_opt = gamma > 0.0 ? optimal_snr(cfg, gamma).t_opt : kInfinity;
  r.method = ReadoutMethod::kAnalytic;
  return r;
}

ReadoutResult signal_noise_simplified(const ReadoutConfig& cfg, double gamma) {
  cfg.validate();
  const double t = cfg.t_f;
  ReadoutResult r;
  r.t_f = t;
  r.X = 4.0 * cfg.g * t;
  r.Xi = std::sqrt(2.0 * cfg.kappa * t + 16.0 / 3.0 * cfg.g * cfg.g * gamma * t * t * t);
  r.snr = r.Xi > 0.0 ? r.X / r.Xi : 0.0;
  r.gamma = gamma;
  r.t_opt = gamma > 0.0 ? optimal_snr(cfg, gamma).t_opt : kInfinity;
  r.method = ReadoutMethod::kSimplified;
  return r;
}

double noise_crossover_time(const ReadoutConfig& cfg, double gamma) {
  if (!(gamma > 0.0) || !(cfg.g > 0.0)) return kInfinity;
  return std::sqrt(3.0 * cfg.kappa / (8.0 * cfg.g * cfg.g * gamma));
}

OptimalSnr optimal_snr(const ReadoutConfig& cfg, double gamma) {
  if (!(gamma > 0.0) || !(cfg.g > 0.0)) {
    throw std::invalid_argument("optimal_snr: gamma and g must be positive");
  }
  OptimalSnr o;
  o.t_opt = 0.5 * std::sqrt(1.5) * std::sqrt(cfg.kappa * gamma) / cfg.g / gamma;
  o.snr = std::pow(6.0 * cfg.g * cfg.g / (cfg.kappa * gamma), 0.25);
  return o;
}

OptimalSnr optimal_snr_search(const ReadoutConfig& cfg, double gamma) {
  OptimalSnr guess = optimal_snr(cfg, gamma);
  auto snr_at = [&](double t) {
    ReadoutConfig c = cfg;
    c.t_f = t;
    return signal_noise_analytic(c, gamma).snr;
  };
  // Golden section on log t over [t_opt/20, 20 t_opt].
  double best = golden_section_max([&](double x) { return snr_at(std::exp(x)); },
                                   std::log(guess.t_opt / 20.0), std::log(guess.t_opt * 20.0));
  OptimalSnr o;
  o.t_opt = std::exp(best);
  o.snr = snr_at(o.t_opt);
  return o;
}

double optimal_snr_weak_coupling(double kappa_tau) {
  return 2.0 * std::sqrt(3.0) / std::sqrt(kappa_tau);
}

ReadoutResult signal_noise_numeric(const ReadoutConfig& cfg, const NumericReadoutOptions& options) {
  cfg.validate();
  ReadoutOperators ops = readout_operators(cfg, options.fock_dim);
  Vector plus = initial_state(ops, 1);
  Vector minus = initial_state(ops, -1);
  double t = cfg.t_f;
  if (options.generator == ReadoutGenerator::kPiecewise) {
    long n = whole_periods(cfg.t_f, cfg.tau);
    t = 2.0 * cfg.tau * n;
    Matrix map = period_map(cfg, ops, options.generator);
    plus = apply_power(map, n, plus);
    minus = apply_power(map, n, minus);
  } else {
    const Matrix& l = options.generator == ReadoutGenerator::kLeading ? ops.leading : ops.averaged;
    Matrix map = expm_augmented(augmented(l, ops), t);
    plus = map * plus;
    minus = map * minus;
  }
  return numeric_result(cfg, plus, minus, t);
}

std::vector<ReadoutResult> signal_noise_curve(const ReadoutConfig& cfg, double t_max, int stride,
                                              const NumericReadoutOptions& options) {
  cfg.validate();
  if (stride < 1) throw std::invalid_argument("signal_noise_curve: stride must be >= 1");
  ReadoutOperators ops = readout_operators(cfg, options.fock_dim);
  Matrix map = matrix_power(period_map(cfg, ops, options.generator), stride);
  Vector plus = initial_state(ops, 1);
  Vector minus = initial_state(ops, -1);
  std::vector<ReadoutResult> out;
  long n = 0;
  const long total = whole_periods(t_max, cfg.tau);
  while (n + stride <= total) {
    plus = map * plus;
    minus = map * minus;
    n += stride;
    out.push_back(numeric_result(cfg, plus, minus, 2.0 * cfg.tau * n));
  }
  return out;
}

ReadoutResult max_snr_numeric(const ReadoutConfig& cfg, const NumericReadoutOptions& options) {
  cfg.validate();
  const double gamma = gamma_switching(cfg);
  if (!(gamma > 0.0)) throw std::invalid_argument("max_snr_numeric: requires g > 0");
  const double t_guess = optimal_snr(cfg, gamma).t_opt;
  const long n_guess = std::max(1L, whole_periods(t_guess, cfg.tau));
  const long stride = std::max(1L, n_guess / 2000);
  const long n_cap = 20 * n_guess;

  ReadoutOperators ops = readout_operators(cfg, options.fock_dim);
  Matrix period = period_map(cfg, ops, options.generator);
  Matrix coarse = matrix_power(period, stride);
  Vector plus = initial_state(ops, 1);
  Vector minus = initial_state(ops, -1);

  // Coarse scan.
  ReadoutResult best;
  long best_n = 0;
  Vector best_plus, best_minus;
  Vector prev_plus = plus, prev_minus = minus;
  long n = 0;
  while (n + stride <= n_cap) {
    Vector p0 = plus, m0 = minus;
    plus = coarse * plus;
    minus = coarse * minus;
    n += stride;
    ReadoutResult r = numeric_result(cfg, plus, minus, 2.0 * cfg.tau * n);
    if (r.snr > best.snr) {
      best = r;
      best_n = n;
      prev_plus = p0;
      prev_minus = m0;
    }
    if (n > n_guess && r.snr < 0.8 * best.snr) break;
  }
  if (best_n == 0) throw NumericalError("max_snr_numeric: no positive SNR found");
  // Fine scan over (best_n - stride, best_n + stride].
  if (stride > 1) {
    plus = prev_plus;
    minus = prev_minus;
    for (long m = best_n - stride + 1; m <= std::min(best_n + stride, n_cap); ++m) {
      plus = period * plus;
      minus = period * minus;
      ReadoutResult r = numeric_result(cfg, plus, minus, 2.0 * cfg.tau * m);
      if (r.snr > best.snr) {
        best = r;
        best_n = m;
      }
    }
  }
  best.t_opt = best.t_f;
  return best;
}

DecayTrace sigma_x_decay(const ReadoutConfig& cfg, double t_max,
                         const NumericReadoutOptions& options) {
  cfg.validate();
  ReadoutOperators ops = readout_operators(cfg, options.fock_dim);
  Matrix period = period_map(cfg, ops, options.generator);
  Eigen::RowVectorXcd functional = trace_functional(ops.sx);
  const Eigen::Index n = functional.size();
  Vector u = initial_state(ops, 1);
  DecayTrace trace;
  const long total = whole_periods(t_max, cfg.tau);
  for (long k = 1; k <= total; ++k) {
    u = period * u;
    trace.t.push_back(2.0 * cfg.tau * k);
    trace.sigma_x.push_back(std::real((functional * u.head(n))(0)));
  }
  return trace;
}

double gamma_from_simulation(const ReadoutConfig& cfg, double kappa_window,
                             const NumericReadoutOptions& options) {
  DecayTrace trace = sigma_x_decay(cfg, kappa_window / cfg.kappa, options);
  if (trace.t.empty()) throw std::invalid_argument("gamma_from_simulation: window shorter than one period");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    num += trace.t[i] * (1.0 - trace.sigma_x[i]);
    den += trace.t[i] * trace.t[i];
  }
  return num / den;
}

double single_shot_fidelity_asymptotic(double kappa_tau) {
  if (!(kappa_tau > 0.0)) {
    if (kappa_tau == 0.0) return 1.0;
    throw std::invalid_argument("single_shot_fidelity_asymptotic: kappa tau must be >= 0");
  }
  double x = kappa_tau * kappa_tau;
  return 1.0 - x / 192.0 * std::log(96.0 / x);
}

double gaussian_single_shot_fidelity(double snr) {
  return 1.0 - 0.5 * boost::math::erfc(0.5 * snr);
}

void Histogram::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "bin_center,count_plus,count_minus\n";
  out.precision(17);
  for (std::size_t i = 0; i < bin_center.size(); ++i) {
    out << bin_center[i] << ',' << count_plus[i] << ',' << count_minus[i] << '\n';
  }
}

MonteCarloResult single_shot_fidelity_monte_carlo(const ReadoutConfig& cfg,
                                                  const MonteCarloOptions& options) {
  cfg.validate();
  if (options.n_traj < 1) throw std::invalid_argument("monte carlo: n_traj must be positive");
  if (options.bins < 1) throw std::invalid_argument("monte carlo: bins must be positive");
  const double gamma = options.gamma >= 0.0 ? options.gamma : gamma_switching(cfg);
  const long n = options.n_traj;
  const double noise = std::sqrt(cfg.kappa * cfg.t_f);
  std::vector<double> plus(n), minus(n);
  const long chunks = (n + kChunk - 1) / kChunk;
  parallel_for(
      static_cast<std::size_t>(chunks),
      [&](std::size_t c) {
        boost::random::mt19937_64 engine(splitmix64(options.seed ^ splitmix64(c)));
        boost::random::normal_distribution<double> shot(0.0, 1.0);
        long begin = static_cast<long>(c) * kChunk;
        long end = std::min(n, begin + kChunk);
        for (long i = begin; i < end; ++i) {
          plus[i] = trajectory_signal(cfg, gamma, 1, engine) + noise * shot(engine);
          minus[i] = trajectory_signal(cfg, gamma, -1, engine) + noise * shot(engine);
        }
      },
      options.threads);

  MonteCarloResult result;
  result.n_traj = n;
  result.gamma = gamma;
  double sp = 0.0, sm = 0.0;
  for (long i = 0; i < n; ++i) {
    sp += plus[i];
    sm += minus[i];
  }
  result.mean_plus = sp / n;
  result.mean_minus = sm / n;

  // Histogram over the joint range.
  double lo = std::min(*std::min_element(plus.begin(), plus.end()),
                       *std::min_element(minus.begin(), minus.end()));
  double hi = std::max(*std::max_element(plus.begin(), plus.end()),
                       *std::max_element(minus.begin(), minus.end()));
  if (hi <= lo) hi = lo + 1.0;
  const int bins = options.bins;
  const double width = (hi - lo) / bins;
  Histogram& h = result.histogram;
  h.bin_center.resize(bins);
  h.count_plus.assign(bins, 0);
  h.count_minus.assign(bins, 0);
  for (int b = 0; b < bins; ++b) h.bin_center[b] = lo + (b + 0.5) * width;
  auto bin_of = [&](double x) { return std::clamp(static_cast<int>((x - lo) / width), 0, bins - 1); };
  for (long i = 0; i < n; ++i) {
    ++h.count_plus[bin_of(plus[i])];
    ++h.count_minus[bin_of(minus[i])];
  }

  // Optimal threshold: |+> is assigned below theta, |-> above.
  std::sort(plus.begin(), plus.end());
  std::sort(minus.begin(), minus.end());
  long best_errors = n;  // theta below every sample: all |+> wrong
  double best_theta = std::min(plus.front(), minus.front()) - 1.0;
  long ip = 0, im = 0;
  while (ip < n || im < n) {
    double theta = (im >= n || (ip < n && plus[ip] <= minus[im])) ? plus[ip] : minus[im];
    while (ip < n && plus[ip] <= theta) ++ip;
    while (im < n && minus[im] <= theta) ++im;
    // |+> errors: samples above theta; |-> errors: samples at or below theta.
    long errors = (n - ip) + im;
    if (errors < best_errors) {
      best_errors = errors;
      best_theta = theta;
    }
  }
  // Count each preparation separately for the standard error.
  long err_plus = plus.end() - std::upper_bound(plus.begin(), plus.end(), best_theta);
  long err_minus = std::upper_bound(minus.begin(), minus.end(), best_theta) - minus.begin();
  double p1 = double(err_plus) / n;
  double p2 = double(err_minus) / n;
  result.fidelity = 1.0 - 0.5 * (p1 + p2);
  result.threshold = best_theta;
  result.standard_error = 0.5 * std::sqrt((p1 * (1.0 - p1) + p2 * (1.0 - p2)) / n);
  return result;
}

std::vector<FidelityScanPoint> single_shot_fidelity_scan(const ReadoutConfig& cfg,
                                                         const std::vector<double>& t_f_grid,
                                                         const MonteCarloOptions& options) {
  std::vector<FidelityScanPoint> out;
  out.reserve(t_f_grid.size());
  for (double t : t_f_grid) {
    ReadoutConfig c = cfg;
    c.t_f = t;
    MonteCarloResult r = single_shot_fidelity_monte_carlo(c, options);
    out.push_back({t, r.fidelity, r.standard_error});
  }
  return out;
}

}  // namespace cqed
