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

#include "cqed/propagate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cqed {
namespace {

struct Interval {
  double a;
  double b;
  double max_step;
  bool constant;
};

std::vector<Interval> intervals(const TimeDependentOperator& gen, double t0, double t1) {
  if (!(t1 >= t0)) throw std::invalid_argument("propagate: t1 must not precede t0");
  if (t0 < gen.t_begin() - 1e-12 * std::abs(gen.t_end()) ||
      t1 > gen.t_end() + 1e-12 * std::abs(gen.t_end())) {
    throw std::out_of_range("propagate: interval outside generator support");
  }
  std::vector<Interval> out;
  const auto& bp = gen.breakpoints;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    double a = std::max(bp[i], t0);
    double b = std::min(bp[i + 1], t1);
    if (b <= a) continue;
    double limit = gen.max_steps.empty() ? std::numeric_limits<double>::infinity()
                                         : gen.max_steps[i];
    bool constant = !gen.constant_intervals.empty() && gen.constant_intervals[i];
    out.push_back({a, b, limit, constant});
  }
  return out;
}

// Fourth-order Magnus generator on [t, t + dt] from the two Gauss-Legendre
// nodes. Hamiltonian kind: returns H_eff with step exp(-i H_eff dt), H_eff =
// (H1 + H2)/2 - i (sqrt3/12) dt [H2, H1]. Superoperator kind: returns L_eff with
// step exp(L_eff dt), L_eff = (L1 + L2)/2 + (sqrt3/12) dt [L2, L1].
Matrix magnus4_generator(const TimeDependentOperator& gen, double t, double dt, bool hamiltonian) {
  const double offset = std::sqrt(3.0) / 6.0;
  Matrix g1 = gen.at(t + (0.5 - offset) * dt);
  Matrix g2 = gen.at(t + (0.5 + offset) * dt);
  const double weight = std::sqrt(3.0) / 12.0 * dt;
  if (hamiltonian) return 0.5 * (g1 + g2) - kI * weight * commutator(g2, g1);
  return 0.5 * (g1 + g2) + weight * commutator(g2, g1);
}

Matrix step_exponential(const Matrix& gen_value, double dt, bool hamiltonian) {
  return hamiltonian ? expm_skew_taylor(gen_value, dt) : expm_taylor(gen_value * dt);
}

Matrix exact_piecewise(const TimeDependentOperator& gen, double t0, double t1, bool hamiltonian,
                       long* steps) {
  Matrix total = Matrix::Identity(gen.dim, gen.dim);
  long count = 0;
  for (const Interval& iv : intervals(gen, t0, t1)) {
    Matrix value = gen.at(0.5 * (iv.a + iv.b));
    Matrix step = hamiltonian ? expm_hermitian(value, iv.b - iv.a)
                              : expm_superoperator(value, iv.b - iv.a);
    total = step * total;
    ++count;
  }
  if (steps) *steps = count;
  return total;
}

Matrix propagate(const TimeDependentOperator& gen, double t0, double t1,
                 const StepPolicy& policy, PropagationInfo* info, bool hamiltonian) {
  if (gen.dim <= 0) throw std::invalid_argument("propagate: generator dimension unset");
  PropagationInfo local;
  if (gen.piecewise_constant) {
    Matrix out = exact_piecewise(gen, t0, t1, hamiltonian, &local.steps);
    if (info) *info = local;
    return out;
  }
  double step = policy.initial_step > 0.0 ? policy.initial_step : (t1 - t0) / 2000.0;
  if (!(step > 0.0)) {
    if (info) *info = local;
    return Matrix::Identity(gen.dim, gen.dim);
  }
  Matrix current = propagate_fixed_step(gen, t0, t1, step, hamiltonian, &local.steps);
  if (!policy.refine) {
    if (info) *info = local;
    return current;
  }
  local.converged = false;
  for (int h = 1; h <= policy.max_halvings; ++h) {
    step *= 0.5;
    long steps = 0;
    Matrix next = propagate_fixed_step(gen, t0, t1, step, hamiltonian, &steps);
    local.last_change = (next - current).norm();
    local.halvings = h;
    local.steps = steps;
    current = std::move(next);
    if (local.last_change < policy.tol) {
      local.converged = true;
      break;
    }
  }
  if (info) *info = local;
  if (!local.converged) {
    std::ostringstream msg;
    msg << "propagate: step halving did not converge (change " << local.last_change << " after "
        << local.halvings << " halvings)";
    throw NumericalError(msg.str());
  }
  return current;
}

Matrix states_fixed_step(const TimeDependentOperator& h, double t0, double t1, double step,
                         const Matrix& states, long* steps) {
  Matrix current = states;
  long count = 0;
  for (const Interval& iv : intervals(h, t0, t1)) {
    if (iv.constant) {
      current = expmv_skew(h.at(0.5 * (iv.a + iv.b)), iv.b - iv.a, current);
      ++count;
      continue;
    }
    double width = std::min(step, iv.max_step);
    long n = std::max<long>(1, static_cast<long>(std::ceil((iv.b - iv.a) / width - 1e-9)));
    double dt = (iv.b - iv.a) / n;
    for (long k = 0; k < n; ++k) {
      current = expmv_skew(magnus4_generator(h, iv.a + k * dt, dt, true), dt, current);
    }
    count += n;
  }
  if (steps) *steps = count;
  return current;
}

}  // namespace

Matrix expmv_skew(const Matrix& h, double dt, const Matrix& v) {
  // Split into s substeps with |H dt|/s <= 1/2 so the series converges fast.
  double norm = h.cwiseAbs().colwise().sum().maxCoeff() * std::abs(dt);
  int substeps = std::max(1, static_cast<int>(std::ceil(2.0 * norm)));
  const cplx factor = -kI * (dt / substeps);
  Matrix out = v;
  for (int s = 0; s < substeps; ++s) {
    Matrix term = out;
    Matrix sum = out;
    double scale = std::max(out.norm(), 1e-300);
    for (int k = 1; k <= 30; ++k) {
      term = (factor / static_cast<double>(k)) * (h * term);
      sum += term;
      if (term.norm() <= 1e-17 * scale) break;
    }
    out = std::move(sum);
  }
  return out;
}

Matrix propagate_states(const TimeDependentOperator& h, double t0, double t1, const Matrix& states,
                        const StepPolicy& policy, PropagationInfo* info) {
  if (h.dim <= 0 || states.rows() != h.dim) {
    throw std::invalid_argument("propagate_states: state dimension does not match the generator");
  }
  PropagationInfo local;
  if (h.piecewise_constant) {
    Matrix current = states;
    for (const Interval& iv : intervals(h, t0, t1)) {
      current = expm_hermitian(h.at(0.5 * (iv.a + iv.b)), iv.b - iv.a) * current;
      ++local.steps;
    }
    if (info) *info = local;
    return current;
  }
  double step = policy.initial_step > 0.0 ? policy.initial_step : (t1 - t0) / 2000.0;
  if (!(step > 0.0)) {
    if (info) *info = local;
    return states;
  }
  Matrix current = states_fixed_step(h, t0, t1, step, states, &local.steps);
  if (policy.refine) {
    local.converged = false;
    for (int k = 1; k <= policy.max_halvings; ++k) {
      step *= 0.5;
      long steps = 0;
      Matrix next = states_fixed_step(h, t0, t1, step, states, &steps);
      local.last_change = (next - current).norm();
      local.halvings = k;
      local.steps = steps;
      current = std::move(next);
      if (local.last_change < policy.tol) {
        local.converged = true;
        break;
      }
    }
  }
  if (info) *info = local;
  if (!local.converged) {
    std::ostringstream msg;
    msg << "propagate_states: step halving did not converge (change " << local.last_change
        << " after " << local.halvings << " halvings)";
    throw NumericalError(msg.str());
  }
  return current;
}

Matrix propagate_fixed_step(const TimeDependentOperator& gen, double t0, double t1, double step,
                            bool hamiltonian, long* steps) {
  if (!(step > 0.0)) throw std::invalid_argument("propagate_fixed_step: step must be positive");
  Matrix total = Matrix::Identity(gen.dim, gen.dim);
  long count = 0;
  for (const Interval& iv : intervals(gen, t0, t1)) {
    if (iv.constant) {
      Matrix value = gen.at(0.5 * (iv.a + iv.b));
      total = (hamiltonian ? expm_hermitian(value, iv.b - iv.a)
                           : expm_superoperator(value, iv.b - iv.a)) *
              total;
      ++count;
      continue;
    }
    double h = std::min(step, iv.max_step);
    long n = std::max<long>(1, static_cast<long>(std::ceil((iv.b - iv.a) / h - 1e-9)));
    double dt = (iv.b - iv.a) / n;
    for (long k = 0; k < n; ++k) {
      total = step_exponential(magnus4_generator(gen, iv.a + k * dt, dt, hamiltonian), dt,
                               hamiltonian) *
              total;
    }
    count += n;
  }
  if (steps) *steps = count;
  return total;
}

Matrix propagate_unitary(const TimeDependentOperator& h, double t0, double t1,
                         const StepPolicy& policy, PropagationInfo* info) {
  return propagate(h, t0, t1, policy, info, true);
}

Matrix propagate_superoperator(const TimeDependentOperator& l, double t0, double t1,
                               const StepPolicy& policy, PropagationInfo* info) {
  return propagate(l, t0, t1, policy, info, false);
}

}  // namespace cqed
