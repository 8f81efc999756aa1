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


#ifndef CQED_MAGNUS_H_
#define CQED_MAGNUS_H_

#include "cqed/core.h"
#include "cqed/ensemble.h"
#include "cqed/params.h"

namespace cqed {

enum class GeneratorKind { kHamiltonian, kLiouvillian };

// Average generators over one period T. Hamiltonian kind: U(T) =
// exp(-i T (order0 + order1 + order2 + ...)). Liouvillian kind: V(T) =
// exp(T (order0 + order1 + order2 + ...)).
struct MagnusTerms {
  Matrix order0;
  Matrix order1;
  Matrix order2;
  // c-number part of the second-order term that the operator form omits;
  // the full term is order2 + order2_identity * 1.
  double order2_identity = 0.0;
  double period = 0.0;
  GeneratorKind kind = GeneratorKind::kHamiltonian;
};

// Closed-form SQUADD terms for one qubit with detuning xi (period 2 tau):
// order0 = (g/2)(a^+ s_- + a s_+), order1 = 0,
// order2 = -(g xi^2 tau^2/48)(a s_+ + a^+ s_-) - (g^2 xi tau^2/24)(a^+a + 1/2) s_z,
// order2_identity = -g^2 xi tau^2/48.
MagnusTerms squadd_terms_single(const SystemParams& params, double xi, double tau,
                                const HilbertSpec& space);

// Ensemble terms on the N_ex <= 1 space with basis order
// {vacuum, one photon, qubit 1 excited, ..., qubit N excited}.
struct EnsembleTerms {
  Matrix order0;  // (g_ens/2)(a^+ b + a b^+)
  Matrix order2;  // omega1 (b^+c + c^+b) + omega2 (a^+d + d^+a) + chi a^+a
  double omega1 = 0.0;
  double omega2 = 0.0;
  double chi = 0.0;
  double period = 0.0;
};

EnsembleTerms squadd_terms_ensemble(const EnsembleSpec& ensemble, double tau);

// Ideal SQUADD toggling-frame Hamiltonian of an ensemble over one period
// [0, 2 tau), represented on the same N_ex <= 1 basis.
TimeDependentOperator ensemble_toggling_hamiltonian(const EnsembleSpec& ensemble, double tau);

// Readout configuration (xi = 0, constant coupling g, damping kappa):
// order0 = -i[(g/2)(a + a^+) s_x, .] + kappa D[a], order1 = 0 and order2 from
// the closed-form three-window sum
// -(tau^3/24)([E,[E,O]] + 2[O,[E,O]]) / (2 tau)
// with E, O the even and odd window Liouvillians.
MagnusTerms readout_liouvillian_terms(const SystemParams& params, double tau,
                                      const HilbertSpec& space);

// One period of the readout Liouvillian, piecewise constant on
// [0, tau/2), [tau/2, 3 tau/2), [3 tau/2, 2 tau).
TimeDependentOperator readout_liouvillian(const SystemParams& params, double tau,
                                          const HilbertSpec& space);

struct MagnusOptions {
  // Relative change between successive step doublings accepted for smooth
  // generators.
  double tol = 1e-11;
  int initial_steps = 8;      // per breakpoint interval
  int max_doublings = 16;
};

// Magnus terms of orders 0, 1, 2 for the generator on [t0, t0 + period].
// The order-by-order equations
//   W1' = A, W2' = -[W1, A]/2, W3' = -[W2, A]/2 + [W1, [W1, A]]/12
// (A = -iH or A = L) are integrated exactly on piecewise-constant intervals
// and by classical Runge-Kutta with step doubling otherwise. The nested
// integrals they solve are the time-ordered Magnus integrals. Throws
// NumericalError when step doubling does not converge.
MagnusTerms magnus_terms_numeric(const TimeDependentOperator& generator, GeneratorKind kind,
                                 double t0, double period, const MagnusOptions& options = {});

// Single order k in {0, 1, 2} starting at the generator's first breakpoint.
Matrix magnus_term_numeric(const TimeDependentOperator& generator, int order, double period,
                           GeneratorKind kind = GeneratorKind::kHamiltonian,
                           const MagnusOptions& options = {});

// Integral of the spectral norm of the generator over [t0, t0 + period]. The
// generator is assumed to be built on the desired truncated space.
double convergence_bound(const TimeDependentOperator& generator, double t0, double period);

// Keeps the first fock_dim cavity levels of an operator built on a larger
// cavity truncation (same number of qubits).
Matrix project_fock(const Matrix& op, const HilbertSpec& from, int fock_dim);

}  // namespace cqed

#endif  // CQED_MAGNUS_H_
