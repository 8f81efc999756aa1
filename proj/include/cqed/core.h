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

#ifndef CQED_CORE_H_
#define CQED_CORE_H_

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace cqed {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

// Raised when a numerical consistency check fails (non-convergence,
// positivity violation, broken invariants). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Basis ordering: qubit 0 is the most significant factor, the cavity is the
// last (fastest) factor. Qubit level 0 is |g>, level 1 is |e>.
struct HilbertSpec {
  int n_qubits = 1;
  int fock_dim = 2;

  int dim() const { return (1 << n_qubits) * fock_dim; }
  void validate() const;
  bool operator==(const HilbertSpec&) const = default;
};

enum class OpKind {
  kA,
  kADagger,
  kSigmaMinus,
  kSigmaPlus,
  kSigmaX,
  kSigmaY,
  kSigmaZ,
  kIdentity,
  kNumberExcitations,
};

struct Operator {
  HilbertSpec space;
  Matrix matrix;

  bool is_hermitian(double rel_tol = 1e-12) const;
};

// sigma_z = diag(-1, +1) in the (g, e) basis, so sigma_plus sigma_minus = (1 + sigma_z)/2.
Operator build_canonical(const HilbertSpec& space, OpKind which, int qubit = 0);

// Names: a, a_dagger, sigma_minus(i), sigma_plus(i), sigma_x(i), sigma_y(i),
// sigma_z(i), identity, n_ex. The "(i)" suffix may be omitted for qubit 0.
Operator build_canonical(const HilbertSpec& space, std::string_view name);

class DensityMatrix {
 public:
  // Validates trace, Hermiticity and positivity; throws NumericalError.
  DensityMatrix(HilbertSpec space, Matrix rho);

  static DensityMatrix pure(const HilbertSpec& space, const Vector& psi);

  const HilbertSpec& space() const { return space_; }
  const Matrix& matrix() const { return rho_; }

 private:
  HilbertSpec space_;
  Matrix rho_;
};

// Basis index of |qubit levels> (x) |n> for the given space.
int basis_index(const HilbertSpec& space, const std::vector<int>& qubit_levels, int photons);
Vector basis_state(const HilbertSpec& space, const std::vector<int>& qubit_levels, int photons);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix commutator(const Matrix& a, const Matrix& b);
double relative_frobenius(const Matrix& value, const Matrix& reference);

// exp(-i H t) for Hermitian H via eigendecomposition.
Matrix expm_hermitian(const Matrix& h, double t);
Operator expm_hermitian(const Operator& h, double t);

// exp(L t) for a general (superoperator) matrix, scaling-and-squaring Pade.
Matrix expm_superoperator(const Matrix& l, double t);

// exp(A) by scaled Taylor series; used in hot stepping loops where an
// eigendecomposition or Pade evaluation per step is too costly.
Matrix expm_taylor(const Matrix& a);
// exp(-i H dt) via expm_taylor.
Matrix expm_skew_taylor(const Matrix& h, double dt);

// Column-stacking vectorization: vec(A X B) = (B^T (x) A) vec(X).
Vector vec(const Matrix& m);
Matrix unvec(const Vector& v, int dim);
Matrix hamiltonian_superoperator(const Matrix& h);          // X -> -i[H, X]
Matrix dissipator_superoperator(const Matrix& collapse);    // X -> c X c^+ - {c^+ c, X}/2
Matrix conjugation_superoperator(const Matrix& u);          // X -> U X U^+
// Row vector r with r . vec(X) = tr(Y X).
Eigen::RowVectorXcd trace_functional(const Matrix& y);

// Piecewise-smooth time-dependent matrix-valued generator on [t_begin, t_end].
// The generator is smooth between consecutive breakpoints; piecewise_constant
// means it is constant on each breakpoint interval.
struct TimeDependentOperator {
  std::function<Matrix(double)> at;
  std::vector<double> breakpoints;
  bool piecewise_constant = false;
  int dim = 0;
  // Optional largest step allowed on each breakpoint interval (size
  // breakpoints.size() - 1); empty means no constraint.
  std::vector<double> max_steps;
  // Optional flags (size breakpoints.size() - 1) marking intervals on which
  // the generator is constant; those are exponentiated in one step.
  std::vector<bool> constant_intervals;

  double t_begin() const { return breakpoints.front(); }
  double t_end() const { return breakpoints.back(); }
};

// Average fidelity of U on a two-dimensional logical subspace against the
// ideal map in0 -> out0, in1 -> out1, as the mean over the six axial states
// of <target|U psi>|^2 (exact two-design average of the Haar integral).
double six_state_fidelity(const Matrix& u, const Vector& in0, const Vector& in1,
                          const Vector& out0, const Vector& out1);

struct FockCheck {
  double value = 0.0;
  double doubled_value = 0.0;
  int fock_dim = 0;
  bool converged = false;
};

// Evaluates f at fock_dim and 2*fock_dim; accepted when the change is below
// tol. When auto_double is set the dimension keeps doubling up to max_fock.
FockCheck check_fock_convergence(const std::function<double(int)>& f, int fock_dim,
                                 double tol = 1e-8, bool auto_double = false, int max_fock = 64);

}  // namespace cqed

#endif  // CQED_CORE_H_
