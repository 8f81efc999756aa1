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

#include "cqed/quadrature.h"

#include <cmath>
#include <map>
#include <memory>
#include <limits>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "cqed/core.h"

namespace cqed {
namespace {

struct HermiteValue {
  double p = 0.0;        // p_n(x), scaled by 2^-scale_exp
  double p_prev = 0.0;   // p_{n-1}(x), same scaling
  int scale_exp = 0;
};

// Orthonormal Hermite recurrence (weight exp(-x^2)) with dynamic rescaling
// so that large |x| and large n do not overflow.
HermiteValue hermite_recurrence(int n, double x) {
  HermiteValue v;
  double p1 = std::pow(std::numbers::pi, -0.25);
  double p2 = 0.0;
  for (int j = 1; j <= n; ++j) {
    double p3 = p2;
    p2 = p1;
    p1 = x * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
    if (std::abs(p1) > 1e150) {
      p1 = std::ldexp(p1, -500);
      p2 = std::ldexp(p2, -500);
      v.scale_exp += 500;
    }
  }
  v.p = p1;
  v.p_prev = p2;
  return v;
}

// Initial nodes are the eigenvalues of the symmetric Jacobi matrix (tridiagonal
// QL, eigenvalues only); each is then polished by Newton steps on the
// recurrence, which also supplies the weights.
GaussHermiteRule compute_rule(int n) {
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  for (int k = 1; k < n; ++k) off(k - 1) = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diagonal, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("gauss_hermite: tridiagonal eigensolver failed");
  const int half = n / 2;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Largest roots first; i indexes the positive half.
    double z = std::abs(solver.eigenvalues()(n - 1 - i));
    if (n % 2 == 1 && i == half) z = 0.0;
    double previous_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 20; ++it) {
      HermiteValue v = hermite_recurrence(n, z);
      double step = v.p / (std::sqrt(2.0 * n) * v.p_prev);
      if (!std::isfinite(step)) throw NumericalError("gauss_hermite: Newton step is not finite");
      // Stop at machine precision or once rounding stalls the iteration.
      if (std::abs(step) >= previous_step) break;
      z -= step;
      previous_step = std::abs(step);
      if (previous_step <= 1e-16 * std::max(1.0, std::abs(z))) break;
    }
    if (previous_step > 1e-10 * std::max(1.0, std::abs(z))) {
      throw NumericalError("gauss_hermite: Newton iteration did not converge");
    }
    HermiteValue v = hermite_recurrence(n, z);
    double dp = std::sqrt(2.0 * n) * v.p_prev;
    // w = 2 / dp^2 with dp carrying a 2^scale_exp factor.
    double log_w = std::log(2.0) - 2.0 * (std::log(std::abs(dp)) + v.scale_exp * std::log(2.0));
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = rule.weights[n - 1 - i] = std::exp(log_w);
  }
  if (n % 2 == 1) rule.nodes[half] = 0.0;
  return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussHermiteRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    it = cache.emplace(n, std::make_unique<GaussHermiteRule>(compute_rule(n))).first;
  }
  return *it->second;
}

GaussianAverage gaussian_average(const std::function<double(double)>& f, double sigma,
                                 const QuadraturePolicy& policy, bool require_convergence) {
  return gaussian_average_batch(
      [&f](const std::vector<double>& xs) {
        std::vector<double> out(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
        return out;
      },
      sigma, policy, require_convergence);
}

GaussianAverage gaussian_average_batch(
    const std::function<std::vector<double>(const std::vector<double>&)>& f, double sigma,
    const QuadraturePolicy& policy, bool require_convergence) {
  if (sigma < 0.0) throw std::invalid_argument("gaussian_average: negative sigma");
  GaussianAverage avg;
  if (sigma == 0.0) {
    avg.value = f({0.0}).at(0);
    avg.nodes = 1;
    avg.converged = true;
    return avg;
  }
  auto estimate = [&](int n) {
    const GaussHermiteRule& rule = gauss_hermite(n);
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = std::sqrt(2.0) * sigma * rule.nodes[i];
    std::vector<double> values = f(xs);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * values[i];
    return sum / std::sqrt(std::numbers::pi);
  };
  int n = policy.start_nodes;
  double previous = estimate(n);
  while (true) {
    if (2 * n > policy.max_nodes) {
      avg.value = previous;
      avg.nodes = n;
      avg.converged = false;
      break;
    }
    double next = estimate(2 * n);
    n *= 2;
    if (std::abs(next - previous) < policy.tol) {
      avg.value = next;
      avg.nodes = n;
      avg.converged = true;
      break;
    }
    previous = next;
  }
  if (!avg.converged && require_convergence) {
    std::ostringstream msg;
    msg << "gaussian_average: not converged at " << avg.nodes << " nodes";
    throw NumericalError(msg.str());
  }
  return avg;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double rel_tol,
              int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect: root not bracketed");
  for (int i = 0; i < max_iter; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo <= rel_tol * std::max(std::abs(lo), std::abs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol, int max_iter) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo);
  double x2 = lo + r * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int i = 0; i < max_iter && hi - lo > rel_tol * (std::abs(lo) + std::abs(hi)); ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = f(x1);
    }
  }
  return 0.5 * (lo + hi);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  double error = 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, rel_tol,
                                                                       &error);
}

}  // namespace cqed
