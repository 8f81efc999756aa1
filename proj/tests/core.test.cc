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

#include "cqed/core.h"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "cqed/params.h"
#include "cqed/pulses.h"

namespace cqed {
namespace {

constexpr double kPi = std::numbers::pi;

// Reference exponential by a long Taylor series with repeated squaring; an
// oracle independent of the eigendecomposition route.
Matrix series_exp(const Matrix& a) {
  int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(a.norm() + 1.0))) + 2);
  Matrix scaled = a / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(a.rows(), a.cols());
  Matrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Matrix random_hermitian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cplx(normal(rng), normal(rng));
  return 0.5 * (m + m.adjoint());
}

TEST(core, n_ex_single_qubit_two_levels) {
  HilbertSpec space{1, 2};
  Operator n = build_canonical(space, "n_ex");
  Eigen::Vector4cd expected(0, 1, 1, 2);
  EXPECT_LT((n.matrix - Matrix(expected.asDiagonal())).norm(), 1e-15);
}

TEST(core, truncated_commutator_is_identity_but_last_entry) {
  HilbertSpec space{1, 10};
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix ad = build_canonical(space, OpKind::kADagger).matrix;
  Matrix c = a * ad - ad * a;
  for (int q = 0; q < 2; ++q) {
    for (int n = 0; n < 10; ++n) {
      int i = q * 10 + n;
      EXPECT_NEAR(c(i, i).real(), n == 9 ? -9.0 : 1.0, 1e-14);
    }
  }
  EXPECT_LT((ad - a.adjoint()).norm(), 1e-15);
}

TEST(core, sigma_plus_sigma_minus_identity) {
  HilbertSpec space{2, 3};
  for (int q = 0; q < 2; ++q) {
    Matrix sp = build_canonical(space, OpKind::kSigmaPlus, q).matrix;
    Matrix sm = build_canonical(space, OpKind::kSigmaMinus, q).matrix;
    Matrix sz = build_canonical(space, OpKind::kSigmaZ, q).matrix;
    Matrix id = Matrix::Identity(space.dim(), space.dim());
    EXPECT_EQ((sp * sm - 0.5 * (id + sz)).norm(), 0.0);
  }
}

TEST(core, tensor_product_consistency) {
  HilbertSpec space{2, 3};
  HilbertSpec cav{0, 3};
  Matrix sx{{0, 1}, {1, 0}};
  Matrix i2 = Matrix::Identity(2, 2);
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = 1.0;
  a(1, 2) = std::sqrt(2.0);
  EXPECT_EQ((build_canonical(space, OpKind::kA).matrix - kron(kron(i2, i2), a)).norm(), 0.0);
  EXPECT_EQ((build_canonical(space, OpKind::kSigmaX, 0).matrix -
             kron(kron(sx, i2), Matrix::Identity(3, 3)))
                .norm(),
            0.0);
  EXPECT_EQ((build_canonical(space, OpKind::kSigmaX, 1).matrix -
             kron(kron(i2, sx), Matrix::Identity(3, 3)))
                .norm(),
            0.0);
  (void)cav;
}

TEST(core, unknown_operator_and_bad_index_throw) {
  HilbertSpec space{1, 2};
  EXPECT_THROW(build_canonical(space, "b_dagger"), std::invalid_argument);
  EXPECT_THROW(build_canonical(space, "sigma_x(1)"), std::out_of_range);
  EXPECT_THROW(build_canonical(space, OpKind::kSigmaZ, 2), std::out_of_range);
  EXPECT_THROW((HilbertSpec{1, 1}.validate()), std::invalid_argument);
}

TEST(core, expm_hermitian_pi_rotation) {
  Matrix sx{{0, 1}, {1, 0}};
  Matrix u = expm_hermitian(0.5 * sx, kPi);
  EXPECT_LT((u - (-kI * sx)).norm(), 1e-14);
  EXPECT_LT((expm_hermitian(Matrix::Zero(3, 3), 2.0) - Matrix::Identity(3, 3)).norm(), 0.0 + 1e-300);
}

TEST(core, expm_hermitian_rejects_non_hermitian) {
  Matrix m{{0, 1}, {0, 0}};
  EXPECT_THROW(expm_hermitian(m, 1.0), std::invalid_argument);
}

TEST(core, vacuum_rabi_half_period_matches_series_oracle) {
  HilbertSpec space{1, 2};
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix sm = build_canonical(space, OpKind::kSigmaMinus).matrix;
  const double g = 1.7;
  Matrix h = g * (a.adjoint() * sm + a * sm.adjoint());
  const double t = kPi / (2 * g);
  Matrix u = expm_hermitian(h, t);
  Matrix oracle = series_exp(-kI * t * h);
  EXPECT_LT((u - oracle).norm(), 1e-12);
  Vector out = u * basis_state(space, {1}, 0);
  EXPECT_LT((out - (-kI) * basis_state(space, {0}, 1)).norm(), 1e-12);
}

TEST(core, unitarity_property_on_random_hamiltonians) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + trial % 9;
    Matrix h = random_hermitian(n, rng);
    double t = 0.1 + trial * 0.37;
    Matrix u = expm_hermitian(h, t);
    Matrix v = expm_hermitian(h, -t);
    EXPECT_LT((u * v - Matrix::Identity(n, n)).norm(), 1e-10);
    EXPECT_LT((u - series_exp(-kI * t * h)).norm(), 1e-10 * n);
  }
}

TEST(core, expm_superoperator_identity_and_decay_law) {
  HilbertSpec space{0, 2};
  space.n_qubits = 0;
  HilbertSpec cavity{1, 2};
  Matrix a = build_canonical(cavity, OpKind::kA).matrix;
  const int d = cavity.dim();
  EXPECT_LT((expm_superoperator(Matrix::Zero(d * d, d * d), 3.0) - Matrix::Identity(d * d, d * d)).norm(),
            1e-14);
  const double kappa = 0.8;
  Matrix l = kappa * dissipator_superoperator(a);
  Matrix rho0 = basis_state(cavity, {0}, 1) * basis_state(cavity, {0}, 1).adjoint();
  Matrix n = a.adjoint() * a;
  for (double t : {0.1, 0.5, 2.0, 7.0}) {
    Matrix rho = unvec(expm_superoperator(l, t) * vec(rho0), d);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9);
    EXPECT_NEAR((n * rho).trace().real(), std::exp(-kappa * t), 1e-9);
  }
  (void)space;
}

TEST(core, expm_superoperator_dimension_mismatch_throws) {
  EXPECT_THROW(expm_superoperator(Matrix::Zero(5, 5), 1.0), std::invalid_argument);
  EXPECT_THROW(expm_superoperator(Matrix::Zero(4, 3), 1.0), std::invalid_argument);
}

TEST(core, window_liouvillian_matches_rk4_oracle) {
  // One period of the damped SQUADD Liouvillian against a fixed-step
  // fourth-order Runge-Kutta integration of the density matrix.
  HilbertSpec space{1, 4};
  SystemParams p;
  p.g = 1.0;
  p.kappa = 0.3;
  p.delta_xi = 1.0;
  const double tau = 0.4, xi = 0.7;
  PiecewiseHamiltonian h = squadd_ideal(p.g, tau, 2);
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix total = Matrix::Identity(space.dim() * space.dim(), space.dim() * space.dim());
  std::vector<Matrix> windows;
  for (const Segment& s : h.segments()) {
    Matrix l = hamiltonian_superoperator(h.window(s.parity(), xi, space)) +
               p.kappa * dissipator_superoperator(a);
    total = expm_superoperator(l, s.t1 - s.t0) * total;
    windows.push_back(h.window(s.parity(), xi, space));
  }
  Vector psi = (basis_state(space, {1}, 0) + basis_state(space, {0}, 1)) / std::sqrt(2.0);
  Matrix rho = psi * psi.adjoint();
  Matrix expected = unvec(total * vec(rho), space.dim());
  auto rhs = [&](const Matrix& ham, const Matrix& r) {
    Matrix out = -kI * (ham * r - r * ham) +
                 p.kappa * (a * r * a.adjoint() - 0.5 * (a.adjoint() * a * r + r * a.adjoint() * a));
    return out;
  };
  std::size_t w = 0;
  for (const Segment& s : h.segments()) {
    const int steps = 4000;
    double dt = (s.t1 - s.t0) / steps;
    for (int k = 0; k < steps; ++k) {
      Matrix k1 = rhs(windows[w], rho);
      Matrix k2 = rhs(windows[w], rho + 0.5 * dt * k1);
      Matrix k3 = rhs(windows[w], rho + 0.5 * dt * k2);
      Matrix k4 = rhs(windows[w], rho + dt * k3);
      rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    ++w;
  }
  EXPECT_LT((rho - expected).norm(), 1e-8);
}

TEST(core, vectorization_convention) {
  std::mt19937_64 rng(3);
  Matrix a = random_hermitian(3, rng) + kI * random_hermitian(3, rng);
  Matrix x = random_hermitian(3, rng);
  Matrix b = random_hermitian(3, rng);
  Vector lhs = vec(a * x * b);
  Vector rhs = kron(b.transpose(), a) * vec(x);
  EXPECT_LT((lhs - rhs).norm(), 1e-12);
  EXPECT_EQ((unvec(vec(x), 3) - x).norm(), 0.0);
  cplx functional = (trace_functional(b) * vec(x))(0);
  EXPECT_LT(std::abs(functional - (b * x).trace()), 1e-12);
}

TEST(core, density_matrix_checks) {
  HilbertSpec space{1, 2};
  Vector psi = basis_state(space, {1}, 0);
  EXPECT_NO_THROW(DensityMatrix::pure(space, psi));
  Matrix bad = psi * psi.adjoint() * 1.1;
  EXPECT_THROW(DensityMatrix(space, bad), NumericalError);
  Matrix negative = Matrix::Zero(4, 4);
  negative(0, 0) = 1.0 + 1e-6;
  negative(1, 1) = -1e-6;
  EXPECT_THROW(DensityMatrix(space, negative), NumericalError);
}

TEST(core, ideal_squadd_conserves_excitation_number) {
  HilbertSpec space{1, 5};
  Matrix nex = build_canonical(space, OpKind::kNumberExcitations).matrix;
  PiecewiseHamiltonian h = squadd_ideal(1.0, 0.3, 4);
  for (int parity : {0, 1}) {
    for (double xi : {-2.0, 0.0, 3.0}) {
      EXPECT_LT(commutator(h.window(parity, xi, space), nex).norm(), 1e-12);
    }
  }
}

TEST(core, six_state_fidelity_of_ideal_map_is_one) {
  HilbertSpec space{1, 2};
  Matrix a = build_canonical(space, OpKind::kA).matrix;
  Matrix sm = build_canonical(space, OpKind::kSigmaMinus).matrix;
  Matrix u = expm_hermitian(a.adjoint() * sm + a * sm.adjoint(), kPi / 2);
  Vector g0 = basis_state(space, {0}, 0);
  Vector e0 = basis_state(space, {1}, 0);
  Vector g1 = basis_state(space, {0}, 1);
  EXPECT_NEAR(six_state_fidelity(u, g0, e0, g0, -kI * g1), 1.0, 1e-14);
  // Identity map against the transfer target: only |g0> survives.
  EXPECT_NEAR(six_state_fidelity(Matrix::Identity(4, 4), g0, e0, g0, -kI * g1), 1.0 / 3.0, 1e-14);
}

TEST(core, fock_convergence_check) {
  auto f = [](int n) { return 1.0 - std::pow(0.1, n); };
  FockCheck c = check_fock_convergence(f, 2, 1e-8, true, 64);
  EXPECT_TRUE(c.converged);
  EXPECT_GE(c.fock_dim, 8);
  FockCheck fixed = check_fock_convergence(f, 2, 1e-8, false);
  EXPECT_FALSE(fixed.converged);
}

}  // namespace
}  // namespace cqed
