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


#ifndef CQED_LINDBLAD_H_
#define CQED_LINDBLAD_H_

#include "cqed/core.h"
#include "cqed/params.h"
#include "cqed/propagate.h"
#include "cqed/pulses.h"
#include "cqed/quadrature.h"

namespace cqed {

// L(t) X = -i[H(t), X] + kappa D[a] X on the given space.
struct Liouvillian {
  TimeDependentOperator hamiltonian;
  HilbertSpec space;
  double kappa = 0.0;

  void validate() const;
  // Superoperator-valued generator sharing the Hamiltonian's breakpoints.
  TimeDependentOperator superoperator() const;
};

// Column-stacked superoperator acting on density matrices of dimension dim.
struct Channel {
  Matrix matrix;
  int dim = 0;
  double t0 = 0.0;
  double t1 = 0.0;

  Matrix apply(const Matrix& rho) const;
  // this then later: the channel for [t0, later.t1].
  Channel then(const Channel& later) const;
  // Largest |tr(M(E_ij)) - delta_ij| over the matrix units.
  double trace_residual() const;
  // Smallest eigenvalue of the (Hermitian part of the) Choi matrix.
  double min_choi_eigenvalue() const;
};

Channel identity_channel(int dim, double t = 0.0);
Channel unitary_channel(const Matrix& u, double t0, double t1);

Channel propagate(const Liouvillian& l, double t0, double t1, const StepPolicy& policy = {},
                  PropagationInfo* info = nullptr);

// Six-state average of <target|M(|psi><psi|)|target> over the axial states
// of span{in0, in1}, with targets mapped by in_k -> out_k.
double channel_average_fidelity(const Channel& m, const Vector& in0, const Vector& in1,
                                const Vector& out0, const Vector& out1);
// Same with out_k = U0 in_k.
double channel_average_fidelity(const Channel& m, const Matrix& u0, const Vector& in0,
                                const Vector& in1);

struct MasterOptions {
  // 0 selects the default: 2 when the dynamics conserve N_ex (ideal,
  // unfiltered, g_off = 0), otherwise 4 with a doubling check.
  int fock_dim = 0;
  int max_fock_dim = 32;
  // When false the given fock_dim is used without a doubling check.
  bool fock_check = true;
  // The truncation is accepted when the fidelity changes under Fock doubling
  // by less than fock_tol in Gaussian mean absolute value, estimated on a
  // 16-node probe rule.
  double fock_tol = 1e-6;
  QuadraturePolicy quadrature;
  StepPolicy steps;
};

struct MasterResult {
  double fidelity = 0.0;
  int nodes = 0;
  bool converged = false;
  int fock_dim = 0;
  double fock_change = 0.0;
};

// Average state-transfer fidelity |e0> -> -i|g1>, |g0> -> |g0> for the
// schedule and Hamiltonian variant, with cavity damping, averaged over the
// Gaussian detuning. kappa = 0 uses unitary propagation. Throws
// NumericalError on Fock-truncation or quadrature non-convergence.
MasterResult transfer_fidelity_master(const SystemParams& params, const PulseSchedule& sched,
                                      HamiltonianVariant variant,
                                      const MasterOptions& options = {});

// Fidelity for a single detuning on a fixed truncation.
double transfer_fidelity_master_at(const SystemParams& params, const PulseSchedule& sched,
                                   HamiltonianVariant variant, double xi,
                                   const HilbertSpec& space, const StepPolicy& steps = {});

// Two-time correlator <A(t1 + t2) B(t1)> = tr[A V(t2)(B V(t1) rho0)] for a
// time-independent generator.
cplx correlation(const Matrix& generator, const Matrix& a, const Matrix& b, const Matrix& rho0,
                 double t1, double t2);

}  // namespace cqed

#endif  // CQED_LINDBLAD_H_
