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

#ifndef CQED_PROPAGATE_H_
#define CQED_PROPAGATE_H_

#include "cqed/core.h"

namespace cqed {

// Step control for smooth generators. Each step is the exponential of the
// fourth-order Magnus generator from two Gauss-Legendre nodes. Piecewise-
// constant generators, and intervals flagged constant, are propagated exactly
// (one exponential per interval).
struct StepPolicy {
  // Initial largest step; 0 selects span / 2000.
  double initial_step = 0.0;
  // Accept when successive halvings change the propagator by less than tol
  // (Frobenius norm).
  double tol = 1e-8;
  int max_halvings = 12;
  // When false a single pass at initial_step is returned.
  bool refine = true;
};

struct PropagationInfo {
  long steps = 0;
  int halvings = 0;
  double last_change = 0.0;
  bool converged = true;
};

// U(t1, t0) = T exp(-i int H dt). Throws NumericalError when step halving
// does not converge within policy.max_halvings.
Matrix propagate_unitary(const TimeDependentOperator& h, double t0, double t1,
                         const StepPolicy& policy = {}, PropagationInfo* info = nullptr);

// V(t1, t0) = T exp(int L dt) for a superoperator-valued generator.
Matrix propagate_superoperator(const TimeDependentOperator& l, double t0, double t1,
                               const StepPolicy& policy = {}, PropagationInfo* info = nullptr);

// T exp(-i int H dt) applied to the columns of states. Same stepping and
// refinement as propagate_unitary; the change is measured on the columns.
Matrix propagate_states(const TimeDependentOperator& h, double t0, double t1, const Matrix& states,
                        const StepPolicy& policy = {}, PropagationInfo* info = nullptr);

// exp(-i H dt) v by a scaled Taylor series.
Matrix expmv_skew(const Matrix& h, double dt, const Matrix& v);

// One pass with a fixed largest step (no refinement); exposed for the
// step-order tests.
Matrix propagate_fixed_step(const TimeDependentOperator& gen, double t0, double t1, double step,
                            bool hamiltonian, long* steps = nullptr);

}  // namespace cqed

#endif  // CQED_PROPAGATE_H_
