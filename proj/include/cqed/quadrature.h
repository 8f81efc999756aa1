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

#ifndef CQED_QUADRATURE_H_
#define CQED_QUADRATURE_H_

#include <functional>
#include <vector>

namespace cqed {

// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Nodes by Newton iteration on the orthonormal Hermite recurrence; rules are
// cached per size and safe to request concurrently.
const GaussHermiteRule& gauss_hermite(int n);

struct GaussianAverage {
  double value = 0.0;
  int nodes = 0;
  bool converged = false;
};

struct QuadraturePolicy {
  int start_nodes = 64;
  int max_nodes = 4096;
  double tol = 1e-9;
};

// E[f(xi)] for xi ~ N(0, sigma^2). The node count doubles until two
// consecutive estimates differ by less than policy.tol; sigma == 0 evaluates
// f(0) once. Throws NumericalError when max_nodes is reached unconverged
// and require_convergence is set.
GaussianAverage gaussian_average(const std::function<double(double)>& f, double sigma,
                                 const QuadraturePolicy& policy = {},
                                 bool require_convergence = true);

// Same, for an integrand that evaluates a batch of detunings at once.
GaussianAverage gaussian_average_batch(
    const std::function<std::vector<double>(const std::vector<double>&)>& f, double sigma,
    const QuadraturePolicy& policy = {}, bool require_convergence = true);

// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double rel_tol = 1e-12, int max_iter = 400);

// Maximizer of a unimodal f on [lo, hi] by golden-section search.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol = 1e-10, int max_iter = 300);

// Adaptive Gauss-Kronrod integral of f over [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

}  // namespace cqed

#endif  // CQED_QUADRATURE_H_
