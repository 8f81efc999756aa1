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

#include "cqed/transfer.h"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cqed {

PeriodRotation single_period_rotation(double g, double xi, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("single_period_rotation: tau must be positive");
  if (!(g >= 0.0)) throw std::invalid_argument("single_period_rotation: g must be >= 0");
  PeriodRotation r;
  double omega = std::sqrt(g * g + 0.25 * xi * xi);
  if (omega == 0.0) return r;
  double ch = std::cos(0.5 * omega * tau);
  double sh = std::sin(0.5 * omega * tau);
  double cx = std::cos(0.5 * xi * tau);
  double sx = std::sin(0.5 * xi * tau);
  double nz = xi / (2.0 * omega);
  r.a = 2.0 * g / omega * (ch * cx + nz * sh * sx) * sh;
  r.b = (xi / omega * sh * cx - ch * sx) * ch +
        (xi * xi - 4.0 * g * g) / (4.0 * omega * omega) * sh * sh * sx;
  r.w = cx * std::cos(omega * tau) + nz * sx * std::sin(omega * tau);

  double residual = 1.0 - r.a * r.a - r.b * r.b;
  if (residual < -1e-9) {
    std::ostringstream msg;
    msg << "single_period_rotation: 1 - A^2 - B^2 = " << residual;
    throw NumericalError(msg.str());
  }
  if (std::abs(residual - r.w * r.w) > 1e-9) {
    throw NumericalError("single_period_rotation: rotation is not unitary");
  }
  double axis = std::hypot(r.a, r.b);
  r.theta = 2.0 * std::atan2(axis, r.w);
  if (axis > 0.0) {
    r.v_x = r.a / axis;
    r.v_z = r.b / axis;
  }
  return r;
}

double transfer_fidelity_at(double g, double xi, int n_p, double tau) {
  if (n_p < 2 || n_p % 2 != 0) throw std::invalid_argument("transfer fidelity: n_p must be even");
  PeriodRotation r = single_period_rotation(g, xi, tau);
  double s = std::sin(0.25 * n_p * r.theta);
  return (1.0 + r.v_x * r.v_x * s * s + r.v_x * s) / 3.0;
}

FidelityEstimate transfer_fidelity_exact(const SystemParams& params, int n_p, double tau,
                                         const QuadraturePolicy& policy) {
  params.validate();
  if (n_p < 2 || n_p % 2 != 0) throw std::invalid_argument("transfer fidelity: n_p must be even");
  GaussianAverage avg = gaussian_average(
      [&](double xi) { return transfer_fidelity_at(params.g, xi, n_p, tau); }, params.delta_xi,
      policy);
  return {avg.value, avg.nodes, avg.converged};
}

double transfer_error_asymptotic(const SystemParams& params, int n_p) {
  double r = params.delta_xi / params.g;
  double q = std::numbers::pi / (2.0 * n_p);
  double quarter_pi = std::numbers::pi / 4.0;
  return (quarter_pi * quarter_pi * std::pow(r, 4) + std::pow(r, 2) / 3.0) * std::pow(q, 4) / 6.0;
}

double saturation_error(const SystemParams& params) {
  return std::numbers::pi * params.kappa / (6.0 * params.g);
}

double pulse_error_constant() {
  const double root2 = std::sqrt(2.0);
  return 0.5 * (4.0 / 3.0 - std::sin(std::numbers::pi / root2) / root2);
}

double pulse_error_correction(double epsilon, const SystemParams& params) {
  double x = epsilon * params.delta_xi / params.g;
  return -pulse_error_constant() * x * x;
}

double optimal_tau(double g, int n_p) {
  if (!(g > 0.0)) throw std::invalid_argument("optimal_tau: g must be positive");
  if (n_p < 2 || n_p % 2 != 0) throw std::invalid_argument("optimal_tau: n_p must be even");
  return std::numbers::pi / (g * n_p);
}

TransferBasis single_qubit_transfer_basis(const HilbertSpec& space) {
  TransferBasis basis;
  basis.in0 = basis_state(space, {0}, 0);
  basis.in1 = basis_state(space, {1}, 0);
  basis.out0 = basis.in0;
  basis.out1 = -kI * basis_state(space, {0}, 1);
  return basis;
}

FidelityEstimate transfer_fidelity_free(const SystemParams& params, double t,
                                        const QuadraturePolicy& policy) {
  params.validate();
  HilbertSpec space{1, 2};
  TransferBasis basis = single_qubit_transfer_basis(space);
  Matrix sz = build_canonical(space, OpKind::kSigmaZ).matrix;
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix sm = build_canonical(space, OpKind::kSigmaMinus).matrix;
  Matrix coupling = a.adjoint() * sm + a * sm.adjoint();
  GaussianAverage avg = gaussian_average(
      [&](double xi) {
        Matrix u = expm_hermitian(0.5 * xi * sz + params.g * coupling, t);
        return six_state_fidelity(u, basis.in0, basis.in1, basis.out0, basis.out1);
      },
      params.delta_xi, policy);
  return {avg.value, avg.nodes, avg.converged};
}

}  // namespace cqed
