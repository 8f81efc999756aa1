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


#include "cqed/lindblad.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cqed/transfer.h"

namespace cqed {
namespace {

struct AxialState {
  cplx c0;
  cplx c1;
};

constexpr AxialState kAxialStates[6] = {
    {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {1.0, -1.0}, {1.0, kI}, {1.0, -kI},
};

// Six-state fidelity from the images of the two logical basis states.
double fidelity_from_images(const Vector& img0, const Vector& img1, const Vector& out0,
                            const Vector& out1) {
  double total = 0.0;
  for (const AxialState& s : kAxialStates) {
    double norm2 = std::norm(s.c0) + std::norm(s.c1);
    cplx overlap = (s.c0 * out0 + s.c1 * out1).dot(s.c0 * img0 + s.c1 * img1) / norm2;
    total += std::norm(overlap);
  }
  return total / 6.0;
}

Matrix matrix_power(Matrix base, long exponent) {
  Matrix out = Matrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) out = base * out;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return out;
}

// Square coupling of full width tau and instantaneous pulses: the run is
// (E_{tau/2} O_tau E_{tau/2})^(n_p/2).
bool two_window_run(const PulseSchedule& sched, HamiltonianVariant variant) {
  return variant == HamiltonianVariant::kIdeal && !std::isfinite(sched.sigma_f) &&
         sched.t_p == 0.0 && std::abs(sched.width() - sched.tau) <= 1e-12 * sched.tau;
}

bool conserves_excitations(const PulseSchedule& sched, HamiltonianVariant variant) {
  return variant == HamiltonianVariant::kIdeal && !std::isfinite(sched.sigma_f) &&
         sched.g_off == 0.0;
}

}  // namespace

void Liouvillian::validate() const {
  space.validate();
  if (hamiltonian.dim != space.dim()) {
    throw std::invalid_argument("Liouvillian: Hamiltonian dimension does not match the space");
  }
  if (!(kappa >= 0.0)) throw std::invalid_argument("Liouvillian: kappa must be >= 0");
}

TimeDependentOperator Liouvillian::superoperator() const {
  validate();
  TimeDependentOperator l;
  l.breakpoints = hamiltonian.breakpoints;
  l.max_steps = hamiltonian.max_steps;
  l.constant_intervals = hamiltonian.constant_intervals;
  l.piecewise_constant = hamiltonian.piecewise_constant;
  l.dim = space.dim() * space.dim();
  Matrix damping = kappa * dissipator_superoperator(build_canonical(space, OpKind::kA).matrix);
  auto h = hamiltonian.at;
  l.at = [h, damping](double t) -> Matrix { return hamiltonian_superoperator(h(t)) + damping; };
  return l;
}

Matrix Channel::apply(const Matrix& rho) const { return unvec(matrix * vec(rho), dim); }

Channel Channel::then(const Channel& later) const {
  if (later.dim != dim) throw std::invalid_argument("Channel::then: dimension mismatch");
  return {later.matrix * matrix, dim, t0, later.t1};
}

double Channel::trace_residual() const {
  double worst = 0.0;
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      cplx tr = 0.0;
      for (int k = 0; k < dim; ++k) tr += matrix(k * dim + k, j * dim + i);
      worst = std::max(worst, std::abs(tr - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

double Channel::min_choi_eigenvalue() const {
  // Choi(i*d + k, j*d + l) = M(E_ij)_{kl}.
  Matrix choi(dim * dim, dim * dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      for (int k = 0; k < dim; ++k) {
        for (int l = 0; l < dim; ++l) {
          choi(i * dim + k, j * dim + l) = matrix(l * dim + k, j * dim + i);
        }
      }
    }
  }
  Matrix herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Channel identity_channel(int dim, double t) {
  return {Matrix::Identity(dim * dim, dim * dim), dim, t, t};
}

Channel unitary_channel(const Matrix& u, double t0, double t1) {
  return {conjugation_superoperator(u), static_cast<int>(u.rows()), t0, t1};
}

Channel propagate(const Liouvillian& l, double t0, double t1, const StepPolicy& policy,
                  PropagationInfo* info) {
  if (!(t1 > t0)) throw std::invalid_argument("propagate: t1 must exceed t0");
  Matrix v = propagate_superoperator(l.superoperator(), t0, t1, policy, info);
  return {v, l.space.dim(), t0, t1};
}

double channel_average_fidelity(const Channel& m, const Vector& in0, const Vector& in1,
                                const Vector& out0, const Vector& out1) {
  if (in0.size() != m.dim || in1.size() != m.dim || out0.size() != m.dim ||
      out1.size() != m.dim) {
    throw std::invalid_argument("channel_average_fidelity: state dimension mismatch");
  }
  if (std::abs(in0.dot(in1)) > 1e-10 || std::abs(in0.norm() - 1.0) > 1e-10 ||
      std::abs(in1.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("channel_average_fidelity: logical basis is not orthonormal");
  }
  double total = 0.0;
  for (const AxialState& s : kAxialStates) {
    double norm = std::sqrt(std::norm(s.c0) + std::norm(s.c1));
    Vector psi = (s.c0 * in0 + s.c1 * in1) / norm;
    Vector target = (s.c0 * out0 + s.c1 * out1) / norm;
    Matrix out = m.apply(psi * psi.adjoint());
    total += std::real(target.dot(out * target));
  }
  return total / 6.0;
}

double channel_average_fidelity(const Channel& m, const Matrix& u0, const Vector& in0,
                                const Vector& in1) {
  return channel_average_fidelity(m, in0, in1, u0 * in0, u0 * in1);
}

double transfer_fidelity_master_at(const SystemParams& params, const PulseSchedule& sched,
                                   HamiltonianVariant variant, double xi,
                                   const HilbertSpec& space, const StepPolicy& steps) {
  TimeDependentOperator h = toggling_hamiltonian(params, sched, variant, xi, space);
  TransferBasis basis = single_qubit_transfer_basis(space);
  const double tau = sched.tau;
  const double t_f = sched.t_f();

  if (params.kappa == 0.0) {
    if (two_window_run(sched, variant)) {
      Matrix half = expm_hermitian(h.at(0.25 * tau), 0.5 * tau);
      Matrix period = half * expm_hermitian(h.at(tau), tau) * half;
      Matrix u = matrix_power(period, sched.n_p / 2);
      return six_state_fidelity(u, basis.in0, basis.in1, basis.out0, basis.out1);
    }
    Matrix states(space.dim(), 2);
    states.col(0) = basis.in0;
    states.col(1) = basis.in1;
    Matrix images = propagate_states(h, 0.0, t_f, states, steps);
    return fidelity_from_images(images.col(0), images.col(1), basis.out0, basis.out1);
  }

  Liouvillian l{h, space, params.kappa};
  Channel m;
  if (two_window_run(sched, variant)) {
    TimeDependentOperator gen = l.superoperator();
    Matrix half = expm_superoperator(gen.at(0.25 * tau), 0.5 * tau);
    Matrix period = half * expm_superoperator(gen.at(tau), tau) * half;
    m = {matrix_power(period, sched.n_p / 2), space.dim(), 0.0, t_f};
  } else {
    m = propagate(l, 0.0, t_f, steps);
  }
  return channel_average_fidelity(m, basis.in0, basis.in1, basis.out0, basis.out1);
}

MasterResult transfer_fidelity_master(const SystemParams& params, const PulseSchedule& sched,
                                      HamiltonianVariant variant, const MasterOptions& options) {
  params.validate();
  sched.validate(true);
  const bool exact_truncation = conserves_excitations(sched, variant);
  int fock = options.fock_dim > 0 ? options.fock_dim : (exact_truncation ? 2 : 4);
  auto at = [&](double xi, int fock_dim) {
    return transfer_fidelity_master_at(params, sched, variant, xi, HilbertSpec{1, fock_dim},
                                       options.steps);
  };

  MasterResult result;
  if (!exact_truncation && options.fock_check) {
    // Probe nodes xi = sqrt2 sigma x_k with weights w_k / sqrt(pi).
    const GaussHermiteRule& probe = gauss_hermite(params.delta_xi > 0.0 ? 16 : 1);
    std::vector<double> xis;
    for (double x : probe.nodes) xis.push_back(std::sqrt(2.0) * params.delta_xi * x);
    if (params.delta_xi == 0.0) xis.assign(1, 0.0);
    std::vector<double> current(xis.size());
    for (std::size_t k = 0; k < xis.size(); ++k) current[k] = at(xis[k], fock);
    while (true) {
      if (2 * fock > options.max_fock_dim) {
        std::ostringstream msg;
        msg << "transfer_fidelity_master: Fock truncation not converged at fock_dim " << fock
            << " (last change " << result.fock_change << ")";
        throw NumericalError(msg.str());
      }
      double change = 0.0;
      std::vector<double> doubled(xis.size());
      for (std::size_t k = 0; k < xis.size(); ++k) {
        doubled[k] = at(xis[k], 2 * fock);
        double weight = params.delta_xi > 0.0 ? probe.weights[k] / std::sqrt(std::numbers::pi) : 1.0;
        change += weight * std::abs(doubled[k] - current[k]);
      }
      result.fock_change = change;
      // The smaller truncation is kept once doubling no longer matters.
      if (change < options.fock_tol) break;
      fock *= 2;
      current = std::move(doubled);
    }
  }
  GaussianAverage avg = gaussian_average([&](double xi) { return at(xi, fock); },
                                         params.delta_xi, options.quadrature);
  result.fidelity = avg.value;
  result.nodes = avg.nodes;
  result.converged = avg.converged;
  result.fock_dim = fock;
  return result;
}

cplx correlation(const Matrix& generator, const Matrix& a, const Matrix& b, const Matrix& rho0,
                 double t1, double t2) {
  const int dim = static_cast<int>(rho0.rows());
  if (generator.rows() != dim * dim) {
    throw std::invalid_argument("correlation: generator does not match the density matrix");
  }
  if (t1 < 0.0 || t2 < 0.0) throw std::invalid_argument("correlation: times must be >= 0");
  Vector rho1 = expm_superoperator(generator, t1) * vec(rho0);
  Vector x = vec(b * unvec(rho1, dim));
  Vector y = expm_superoperator(generator, t2) * x;
  return (a * unvec(y, dim)).trace();
}

}  // namespace cqed
