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


#include "cqed/magnus.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqed/pulses.h"
#include "cqed/quadrature.h"

namespace cqed {
namespace {

// Running Magnus terms W1, W2, W3 (orders 1, 2, 3 in the generator).
struct MagnusState {
  Matrix w1, w2, w3;

  explicit MagnusState(int dim)
      : w1(Matrix::Zero(dim, dim)), w2(Matrix::Zero(dim, dim)), w3(Matrix::Zero(dim, dim)) {}
};

// Exact update over an interval of length dt with constant generator a.
void constant_step(MagnusState& s, const Matrix& a, double dt) {
  Matrix pa = commutator(s.w1, a);
  s.w3 += dt * (-0.5 * commutator(s.w2, a) + commutator(s.w1, pa) / 12.0) +
          (dt * dt / 12.0) * commutator(pa, a);
  s.w2 += -0.5 * dt * pa;
  s.w1 += dt * a;
}

struct Derivative {
  Matrix d1, d2, d3;
};

Derivative derivative(const Matrix& w1, const Matrix& w2, const Matrix& a) {
  Matrix pa = commutator(w1, a);
  return {a, -0.5 * pa, -0.5 * commutator(w2, a) + commutator(w1, pa) / 12.0};
}

// Classical Runge-Kutta on the triangular order-by-order system.
MagnusState rk4_interval(const MagnusState& start, const std::function<Matrix(double)>& gen,
                         double a, double b, long steps) {
  MagnusState s = start;
  double h = (b - a) / steps;
  // Endpoint samples are taken just inside the interval so that a
  // discontinuity at a breakpoint contributes its one-sided limit.
  const double inset = 1e-12 * (b - a);
  for (long k = 0; k < steps; ++k) {
    double t = a + k * h;
    Matrix g0 = gen(k == 0 ? a + inset : t);
    Matrix gm = gen(t + 0.5 * h);
    Matrix g1 = gen(k + 1 == steps ? b - inset : t + h);
    Derivative k1 = derivative(s.w1, s.w2, g0);
    Derivative k2 = derivative(s.w1 + 0.5 * h * k1.d1, s.w2 + 0.5 * h * k1.d2, gm);
    Derivative k3 = derivative(s.w1 + 0.5 * h * k2.d1, s.w2 + 0.5 * h * k2.d2, gm);
    Derivative k4 = derivative(s.w1 + h * k3.d1, s.w2 + h * k3.d2, g1);
    s.w1 += (h / 6.0) * (k1.d1 + 2.0 * k2.d1 + 2.0 * k3.d1 + k4.d1);
    s.w2 += (h / 6.0) * (k1.d2 + 2.0 * k2.d2 + 2.0 * k3.d2 + k4.d2);
    s.w3 += (h / 6.0) * (k1.d3 + 2.0 * k2.d3 + 2.0 * k3.d3 + k4.d3);
  }
  return s;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Matrix collective_projector(const RealVector& amplitudes, int n) {
  // |vector over qubit block> embedded after vacuum and photon entries.
  Matrix v = Matrix::Zero(n + 2, 1);
  for (int i = 0; i < n; ++i) v(i + 2, 0) = amplitudes(i);
  return v;
}

}  // namespace

MagnusTerms squadd_terms_single(const SystemParams& params, double xi, double tau,
                                const HilbertSpec& space) {
  if (!(tau > 0.0)) throw std::invalid_argument("squadd_terms_single: tau must be positive");
  if (space.n_qubits != 1) throw std::invalid_argument("squadd_terms_single: one qubit expected");
  space.validate();
  const double g = params.g;
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix sm = build_canonical(space, OpKind::kSigmaMinus).matrix;
  Matrix sz = build_canonical(space, OpKind::kSigmaZ).matrix;
  Matrix co = a.adjoint() * sm + a * sm.adjoint();
  Matrix n = a.adjoint() * a;
  Matrix one = Matrix::Identity(space.dim(), space.dim());

  MagnusTerms t;
  t.kind = GeneratorKind::kHamiltonian;
  t.period = 2.0 * tau;
  t.order0 = 0.5 * g * co;
  t.order1 = Matrix::Zero(space.dim(), space.dim());
  t.order2 = -(g * xi * xi * tau * tau / 48.0) * co -
             (g * g * xi * tau * tau / 24.0) * (n + 0.5 * one) * sz;
  t.order2_identity = -g * g * xi * tau * tau / 48.0;
  return t;
}

EnsembleTerms squadd_terms_ensemble(const EnsembleSpec& ensemble, double tau) {
  ensemble.validate();
  if (!(tau > 0.0)) throw std::invalid_argument("squadd_terms_ensemble: tau must be positive");
  const int n = ensemble.size();
  const int dim = n + 2;
  const double root_n = std::sqrt(static_cast<double>(n));

  EnsembleTerms t;
  t.period = 2.0 * tau;
  t.omega1 = -(n * tau * tau / 48.0) * ensemble.g_av() * ensemble.g_xi_av();
  t.omega2 = -(root_n * tau * tau / 48.0) * ensemble.g_xi2_av();
  t.chi = (tau * tau / 24.0) * ensemble.chi_moment();

  // Single-excitation kets of the modes; index 1 is the photon.
  Matrix photon = Matrix::Zero(dim, 1);
  photon(1, 0) = 1.0;
  Matrix b = collective_projector(ensemble.mode_b(), n);

  t.order0 = 0.5 * ensemble.g_ens() * (photon * b.adjoint() + b * photon.adjoint());
  t.order2 = t.chi * photon * photon.adjoint();
  if (ensemble.g_xi_av() > 0.0) {
    Matrix c = collective_projector(ensemble.mode_c(), n);
    Matrix d = collective_projector(ensemble.mode_d(), n);
    t.order2 += t.omega1 * (b * c.adjoint() + c * b.adjoint()) +
                t.omega2 * (photon * d.adjoint() + d * photon.adjoint());
  }
  return t;
}

TimeDependentOperator ensemble_toggling_hamiltonian(const EnsembleSpec& ensemble, double tau) {
  ensemble.validate();
  if (!(tau > 0.0)) throw std::invalid_argument("ensemble_toggling_hamiltonian: tau must be positive");
  const int n = ensemble.size();
  const int dim = n + 2;
  double xi_sum = 0.0;
  for (double x : ensemble.detunings) xi_sum += x;

  // (1/2) sum_i xi_i sigma_z^i on the N_ex <= 1 basis.
  Matrix hz = Matrix::Zero(dim, dim);
  hz(0, 0) = -0.5 * xi_sum;
  hz(1, 1) = -0.5 * xi_sum;
  for (int i = 0; i < n; ++i) hz(i + 2, i + 2) = -0.5 * xi_sum + ensemble.detunings[i];
  Matrix hg = Matrix::Zero(dim, dim);
  for (int i = 0; i < n; ++i) {
    hg(1, i + 2) = ensemble.couplings[i];
    hg(i + 2, 1) = ensemble.couplings[i];
  }
  Matrix even = hz + hg;
  Matrix odd = -hz;

  TimeDependentOperator h;
  h.dim = dim;
  h.piecewise_constant = true;
  h.breakpoints = {0.0, 0.5 * tau, 1.5 * tau, 2.0 * tau};
  h.at = [even, odd, tau](double t) -> Matrix {
    return (t >= 0.5 * tau && t < 1.5 * tau) ? odd : even;
  };
  return h;
}

TimeDependentOperator readout_liouvillian(const SystemParams& params, double tau,
                                          const HilbertSpec& space) {
  params.validate();
  PiecewiseHamiltonian windows = squadd_ideal(params.g, tau, 2, params.g);
  Matrix damping = params.kappa *
                   dissipator_superoperator(build_canonical(space, OpKind::kA).matrix);
  Matrix even = hamiltonian_superoperator(windows.window(0, 0.0, space)) + damping;
  Matrix odd = hamiltonian_superoperator(windows.window(1, 0.0, space)) + damping;

  TimeDependentOperator l;
  l.dim = space.dim() * space.dim();
  l.piecewise_constant = true;
  l.breakpoints = {0.0, 0.5 * tau, 1.5 * tau, 2.0 * tau};
  l.at = [even, odd, tau](double t) -> Matrix {
    return (t >= 0.5 * tau && t < 1.5 * tau) ? odd : even;
  };
  return l;
}

MagnusTerms readout_liouvillian_terms(const SystemParams& params, double tau,
                                      const HilbertSpec& space) {
  params.validate();
  if (!(tau > 0.0)) throw std::invalid_argument("readout_liouvillian_terms: tau must be positive");
  if (space.n_qubits != 1) throw std::invalid_argument("readout_liouvillian_terms: one qubit expected");
  const double g = params.g;
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix sx = build_canonical(space, OpKind::kSigmaX).matrix;
  Matrix sm = build_canonical(space, OpKind::kSigmaMinus).matrix;
  Matrix co = a.adjoint() * sm + a * sm.adjoint();
  Matrix cr = a.adjoint() * sm.adjoint() + a * sm;
  Matrix damping = params.kappa * dissipator_superoperator(a);
  Matrix even = hamiltonian_superoperator(g * co) + damping;
  Matrix odd = hamiltonian_superoperator(g * cr) + damping;
  Matrix eo = commutator(even, odd);

  MagnusTerms t;
  t.kind = GeneratorKind::kLiouvillian;
  t.period = 2.0 * tau;
  t.order0 = hamiltonian_superoperator(0.5 * g * (a + a.adjoint()) * sx) + damping;
  t.order1 = Matrix::Zero(even.rows(), even.cols());
  t.order2 = -(tau * tau / 48.0) * (commutator(even, eo) + 2.0 * commutator(odd, eo));
  return t;
}

MagnusTerms magnus_terms_numeric(const TimeDependentOperator& generator, GeneratorKind kind,
                                 double t0, double period, const MagnusOptions& options) {
  if (!(period > 0.0)) throw std::invalid_argument("magnus_terms_numeric: period must be positive");
  if (generator.dim <= 0) throw std::invalid_argument("magnus_terms_numeric: generator dimension unset");
  const double t1 = t0 + period;
  const double slack = 1e-12 * std::max(1.0, std::abs(t1));
  if (t0 < generator.t_begin() - slack || t1 > generator.t_end() + slack) {
    throw std::out_of_range("magnus_terms_numeric: period outside generator support");
  }
  const bool hamiltonian = kind == GeneratorKind::kHamiltonian;
  auto gen = [&](double t) -> Matrix {
    Matrix m = generator.at(t);
    return hamiltonian ? Matrix(-kI * m) : m;
  };

  std::vector<double> cuts = {t0};
  for (double b : generator.breakpoints) {
    if (b > t0 + slack && b < t1 - slack) cuts.push_back(b);
  }
  cuts.push_back(t1);

  MagnusState s(generator.dim);
  double scale = 0.0;  // running integral of the generator norm
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i];
    double b = cuts[i + 1];
    double mid = 0.5 * (a + b);
    if (generator.piecewise_constant) {
      Matrix value = gen(mid);
      scale += value.norm() * (b - a);
      constant_step(s, value, b - a);
      continue;
    }
    long steps = options.initial_steps;
    // Respect the generator's step hint on this interval.
    for (std::size_t k = 0; k + 1 < generator.breakpoints.size() && k < generator.max_steps.size(); ++k) {
      if (mid > generator.breakpoints[k] && mid < generator.breakpoints[k + 1] &&
          std::isfinite(generator.max_steps[k])) {
        steps = std::max<long>(steps, static_cast<long>(std::ceil((b - a) / generator.max_steps[k])));
      }
    }
    scale += gen(mid).norm() * (b - a);
    MagnusState coarse = rk4_interval(s, gen, a, b, steps);
    bool converged = false;
    double change = 0.0;
    for (int d = 0; d < options.max_doublings; ++d) {
      steps *= 2;
      MagnusState fine = rk4_interval(s, gen, a, b, steps);
      double lam = std::max(scale, 1e-300);
      change = std::max({(fine.w1 - coarse.w1).norm() / lam,
                         (fine.w2 - coarse.w2).norm() / (lam * lam),
                         (fine.w3 - coarse.w3).norm() / (lam * lam * lam)});
      coarse = std::move(fine);
      if (change < options.tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "magnus_terms_numeric: step doubling did not converge on [" << a << ", " << b
          << "] (relative change " << change << ")";
      throw NumericalError(msg.str());
    }
    s = std::move(coarse);
  }

  MagnusTerms t;
  t.kind = kind;
  t.period = period;
  if (hamiltonian) {
    t.order0 = kI * s.w1 / period;
    t.order1 = kI * s.w2 / period;
    t.order2 = kI * s.w3 / period;
  } else {
    t.order0 = s.w1 / period;
    t.order1 = s.w2 / period;
    t.order2 = s.w3 / period;
  }
  return t;
}

Matrix magnus_term_numeric(const TimeDependentOperator& generator, int order, double period,
                           GeneratorKind kind, const MagnusOptions& options) {
  if (order < 0 || order > 2) throw std::invalid_argument("magnus_term_numeric: order must be 0, 1 or 2");
  MagnusTerms t = magnus_terms_numeric(generator, kind, generator.t_begin(), period, options);
  if (order == 0) return t.order0;
  if (order == 1) return t.order1;
  return t.order2;
}

double convergence_bound(const TimeDependentOperator& generator, double t0, double period) {
  if (!(period > 0.0)) throw std::invalid_argument("convergence_bound: period must be positive");
  const double t1 = t0 + period;
  std::vector<double> cuts = {t0};
  for (double b : generator.breakpoints) {
    if (b > t0 && b < t1) cuts.push_back(b);
  }
  cuts.push_back(t1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i];
    double b = cuts[i + 1];
    if (generator.piecewise_constant) {
      total += spectral_norm(generator.at(0.5 * (a + b))) * (b - a);
    } else {
      total += integrate([&](double t) { return spectral_norm(generator.at(t)); }, a, b, 1e-8);
    }
  }
  return total;
}

Matrix project_fock(const Matrix& op, const HilbertSpec& from, int fock_dim) {
  if (fock_dim < 1 || fock_dim > from.fock_dim) {
    throw std::invalid_argument("project_fock: target truncation out of range");
  }
  if (op.rows() != from.dim() || op.cols() != from.dim()) {
    throw std::invalid_argument("project_fock: operator does not match the source space");
  }
  const int blocks = 1 << from.n_qubits;
  std::vector<int> keep;
  for (int q = 0; q < blocks; ++q) {
    for (int n = 0; n < fock_dim; ++n) keep.push_back(q * from.fock_dim + n);
  }
  Matrix out(keep.size(), keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (std::size_t j = 0; j < keep.size(); ++j) out(i, j) = op(keep[i], keep[j]);
  }
  return out;
}

}  // namespace cqed
