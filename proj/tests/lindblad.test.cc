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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "cqed/transfer.h"

namespace cqed {
namespace {

constexpr double kPi = std::numbers::pi;

TimeDependentOperator constant_generator(const Matrix& h, double t1) {
  TimeDependentOperator g;
  g.at = [h](double) { return h; };
  g.breakpoints = {0.0, t1};
  g.piecewise_constant = true;
  g.dim = int(h.rows());
  return g;
}

// Filtered coupling pulses give a smooth generator between breakpoints.
Liouvillian smooth_liouvillian(double kappa) {
  SystemParams p;
  p.g = 1.0;
  p.delta_xi = 1.0;
  PulseSchedule s;
  s.n_p = 4;
  s.tau = kPi / 4;
  s.sigma_f = 20.0;
  s.tau_prime = s.tau - rise_time(s.sigma_f);
  HilbertSpec space{1, 3};
  return {toggling_hamiltonian(p, s, HamiltonianVariant::kIdeal, 0.7, space), space, kappa};
}

TEST(lindblad, constant_hamiltonian_channel_is_conjugation) {
  HilbertSpec space{1, 3};
  Matrix h = build_canonical(space, OpKind::kSigmaX).matrix +
             0.4 * build_canonical(space, OpKind::kA).matrix +
             0.4 * build_canonical(space, OpKind::kADagger).matrix;
  Channel c = propagate(Liouvillian{constant_generator(h, 1.3), space, 0.0}, 0.0, 1.3);
  Matrix expected = conjugation_superoperator(expm_hermitian(h, 1.3));
  EXPECT_LT((c.matrix - expected).norm(), 1e-12);
  EXPECT_EQ(c.dim, space.dim());
}

TEST(lindblad, ideal_sequence_without_damping_matches_unitary) {
  HilbertSpec space{1, 2};
  PiecewiseHamiltonian h = squadd_ideal(1.0, kPi / 20, 20);
  TimeDependentOperator gen = h.generator(2.0, space);
  Channel c = propagate(Liouvillian{gen, space, 0.0}, 0.0, h.segments().back().t1);
  Matrix u = propagate_unitary(gen, 0.0, h.segments().back().t1);
  EXPECT_LT((c.matrix - unitary_channel(u, 0.0, 1.0).matrix).norm(), 1e-11);
}

TEST(lindblad, propagation_is_divisible) {
  Liouvillian l = smooth_liouvillian(0.3);
  const double t1 = 4 * kPi / 4;
  Channel whole = propagate(l, 0.0, t1);
  Channel first = propagate(l, 0.0, 1.1);
  Channel second = propagate(l, 1.1, t1);
  Channel joined = first.then(second);
  EXPECT_LT((joined.matrix - whole.matrix).norm(), 1e-8);
  EXPECT_EQ(joined.t0, 0.0);
  EXPECT_EQ(joined.t1, t1);
}

TEST(lindblad, channel_is_trace_preserving_and_positive) {
  Channel c = propagate(smooth_liouvillian(0.5), 0.0, kPi);
  EXPECT_LT(c.trace_residual(), 1e-9);
  EXPECT_GT(c.min_choi_eigenvalue(), -1e-7);
  TimeDependentOperator l = smooth_liouvillian(0.5).superoperator();
  // Left trace vector is a null vector of the generator.
  Eigen::RowVectorXcd left = trace_functional(Matrix::Identity(6, 6));
  EXPECT_LT((left * l.at(0.3)).norm(), 1e-10);
}

TEST(lindblad, states_stay_normalized_and_hermitian) {
  Liouvillian l = smooth_liouvillian(0.8);
  HilbertSpec space = l.space;
  Vector psi = (basis_state(space, {1}, 0) + basis_state(space, {0}, 1)) / std::sqrt(2.0);
  Matrix rho = psi * psi.adjoint();
  double t = 0.0;
  for (int k = 1; k <= 3; ++k) {
    double next = kPi * k / 3;
    rho = propagate(l, t, next).apply(rho);
    t = next;
    EXPECT_LT(std::abs(rho.trace() - 1.0), 1e-9);
    EXPECT_LT((rho - rho.adjoint()).norm(), 1e-9);
  }
}

TEST(lindblad, vanishing_damping_gives_unitary_channel) {
  Liouvillian l = smooth_liouvillian(0.0);
  Channel c = propagate(l, 0.0, kPi);
  Matrix u = propagate_unitary(l.hamiltonian, 0.0, kPi);
  EXPECT_LT((c.matrix - conjugation_superoperator(u)).norm(), 1e-7);
}

TEST(lindblad, smooth_stepping_converges_faster_than_second_order) {
  // Reference from a much finer pass; halving the step must cut the error by
  // at least 3.5x (fourth-order steps give about 16x).
  TimeDependentOperator gen = smooth_liouvillian(0.4).superoperator();
  gen.constant_intervals.clear();
  const double t1 = kPi;
  Matrix reference = propagate_fixed_step(gen, 0.0, t1, t1 / 6400, false);
  double coarse = (propagate_fixed_step(gen, 0.0, t1, t1 / 100, false) - reference).norm();
  double fine = (propagate_fixed_step(gen, 0.0, t1, t1 / 200, false) - reference).norm();
  EXPECT_GE(coarse / fine, 3.5);
}

TEST(lindblad, ideal_channel_has_unit_fidelity) {
  HilbertSpec space{1, 2};
  Matrix u = expm_hermitian(build_canonical(space, OpKind::kSigmaX).matrix, 0.37);
  Vector in0 = basis_state(space, {0}, 0), in1 = basis_state(space, {1}, 0);
  EXPECT_NEAR(channel_average_fidelity(unitary_channel(u, 0, 1), u, in0, in1), 1.0, 1e-14);
}

TEST(lindblad, depolarizing_channel_has_half_fidelity) {
  HilbertSpec space{1, 2};
  Vector in0 = basis_state(space, {0}, 0), in1 = basis_state(space, {1}, 0);
  Matrix mixed = 0.5 * (in0 * in0.adjoint() + in1 * in1.adjoint());
  Channel c;
  c.dim = space.dim();
  c.matrix = vec(mixed) * trace_functional(Matrix::Identity(c.dim, c.dim));
  EXPECT_NEAR(channel_average_fidelity(c, in0, in1, in0, in1), 0.5, 1e-14);
  EXPECT_THROW(channel_average_fidelity(c, Vector::Zero(3), in1, in0, in1), std::invalid_argument);
}

TEST(lindblad, single_detuning_fidelity_matches_closed_form) {
  SystemParams p;
  p.g = 1.0;
  p.delta_xi = 1.0;
  PulseSchedule s;
  s.n_p = 24;
  s.tau = optimal_tau(1.0, 24);
  for (double xi : {0.0, 0.7, -2.1, 5.0}) {
    double master = transfer_fidelity_master_at(p, s, HamiltonianVariant::kIdeal, xi, HilbertSpec{1, 2});
    EXPECT_NEAR(master, transfer_fidelity_at(1.0, xi, 24, s.tau), 1e-9) << "xi " << xi;
  }
}

TEST(lindblad, averaged_master_fidelity_matches_exact_without_damping) {
  SystemParams p;
  p.g = 1.0;
  p.delta_xi = 3.0;
  PulseSchedule s;
  s.n_p = 16;
  s.tau = optimal_tau(1.0, 16);
  MasterResult m = transfer_fidelity_master(p, s, HamiltonianVariant::kIdeal);
  FidelityEstimate e = transfer_fidelity_exact(p, 16, s.tau);
  EXPECT_TRUE(m.converged);
  EXPECT_EQ(m.fock_dim, 2);
  EXPECT_NEAR(m.fidelity, e.fidelity, 1e-9);
}

TEST(lindblad, damping_plateau_matches_saturation_value) {
  for (double kappa : {0.01, 0.1}) {
    SystemParams p;
    p.g = 1.0;
    p.delta_xi = SystemParams::delta_xi_from_t2_star(0.1);
    p.kappa = kappa;
    PulseSchedule s;
    s.n_p = 400;
    s.tau = optimal_tau(1.0, 400);
    MasterResult m = transfer_fidelity_master(p, s, HamiltonianVariant::kIdeal);
    EXPECT_NEAR((1.0 - m.fidelity) / saturation_error(p), 1.0, 0.15) << "kappa " << kappa;
  }
}

TEST(lindblad, correlation_at_zero_delay_is_single_time_value) {
  HilbertSpec space{1, 4};
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix sx = build_canonical(space, OpKind::kSigmaX).matrix;
  Matrix gen = hamiltonian_superoperator(0.05 * (a + a.adjoint()) * sx) +
               dissipator_superoperator(a);
  Vector psi = basis_state(space, {0}, 1);
  Matrix rho0 = psi * psi.adjoint();
  Matrix rho1 = unvec(expm_superoperator(gen, 0.8) * vec(rho0), space.dim());
  cplx expected = (a.adjoint() * a * rho1).trace();
  EXPECT_NEAR(std::abs(correlation(gen, a.adjoint(), a, rho0, 0.8, 0.0) - expected), 0.0, 1e-13);
}

TEST(lindblad, damped_cavity_correlation_law) {
  HilbertSpec space{1, 3};
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  const double kappa = 0.7;
  Matrix gen = kappa * dissipator_superoperator(a);
  Vector one = basis_state(space, {0}, 1);
  Matrix rho0 = one * one.adjoint();
  for (double t : {0.0, 0.5, 2.0})
    for (double s : {0.0, 0.3, 1.7}) {
      cplx c = correlation(gen, a.adjoint(), a, rho0, t, s);
      EXPECT_NEAR(c.real(), std::exp(-kappa * t) * std::exp(-kappa * s / 2), 1e-12);
      EXPECT_NEAR(c.imag(), 0.0, 1e-12);
    }
}

TEST(lindblad, frozen_qubit_drives_steady_coherent_state) {
  // Qubit in |+> under (g/2)(a + a^+) sigma_x with damping: alpha = -i g/kappa.
  HilbertSpec space{1, 8};
  const double g = 0.1, kappa = 1.0;
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix sx = build_canonical(space, OpKind::kSigmaX).matrix;
  Matrix gen = hamiltonian_superoperator(0.5 * g * (a + a.adjoint()) * sx) +
               kappa * dissipator_superoperator(a);
  for (double sign : {1.0, -1.0}) {
    Vector psi = (basis_state(space, {0}, 0) + sign * basis_state(space, {1}, 0)) / std::sqrt(2.0);
    Matrix rho0 = psi * psi.adjoint();
    cplx alpha(0.0, -sign * g / kappa);
    cplx c = correlation(gen, a, a, rho0, 30.0, 0.4);
    EXPECT_NEAR(std::abs(c - alpha * alpha), 0.0, 1e-8);
  }
}

}  // namespace
}  // namespace cqed
