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
#include <numbers>

#include <gtest/gtest.h>

#include "cqed/core.h"

namespace cqed {
namespace {

TEST(quadrature, hermite_rule_integrates_gaussian_moments) {
  const GaussHermiteRule& rule = gauss_hermite(32);
  ASSERT_EQ(rule.nodes.size(), 32u);
  // int x^(2k) exp(-x^2) dx = Gamma(k + 1/2).
  for (int k = 0; k < 20; ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], 2 * k);
    EXPECT_NEAR(sum / std::tgamma(k + 0.5), 1.0, 1e-11) << k;
  }
}

TEST(quadrature, large_rules_are_accurate) {
  // Oracles: int exp(-x^2) = sqrt(pi), int x^2 exp(-x^2) = sqrt(pi)/2 and the
  // Gaussian average of cos(k x) for an integrand that needs many nodes.
  for (int n : {63, 256, 512, 1024, 4096}) {
    const GaussHermiteRule& rule = gauss_hermite(n);
    double m0 = 0.0, m2 = 0.0, c = 0.0;
    for (int i = 0; i < n; ++i) {
      m0 += rule.weights[i];
      m2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
      c += rule.weights[i] * std::cos(30.0 * rule.nodes[i]);
    }
    const double root_pi = std::sqrt(std::numbers::pi);
    EXPECT_NEAR(m0 / root_pi, 1.0, 1e-13) << n;
    EXPECT_NEAR(m2 / (root_pi / 2), 1.0, 1e-13) << n;
    if (n >= 256) EXPECT_NEAR(c / root_pi, std::exp(-225.0), 1e-14) << n;
    for (int i = 0; i + 1 < n; ++i) ASSERT_LT(rule.nodes[i], rule.nodes[i + 1]) << n;
  }
}

TEST(quadrature, gaussian_average_of_cosine) {
  const double sigma = 1.3;
  GaussianAverage avg = gaussian_average([](double x) { return std::cos(2.0 * x); }, sigma);
  EXPECT_TRUE(avg.converged);
  EXPECT_NEAR(avg.value, std::exp(-2.0 * sigma * sigma), 1e-12);
}

TEST(quadrature, zero_width_is_single_node) {
  GaussianAverage avg = gaussian_average([](double x) { return 3.0 + x; }, 0.0);
  EXPECT_EQ(avg.nodes, 1);
  EXPECT_EQ(avg.value, 3.0);
}

TEST(quadrature, unconverged_average_throws) {
  QuadraturePolicy policy;
  policy.start_nodes = 4;
  policy.max_nodes = 8;
  policy.tol = 1e-15;
  auto f = [](double x) { return std::cos(40.0 * x); };
  EXPECT_THROW(gaussian_average(f, 1.0, policy), NumericalError);
  EXPECT_NO_THROW(gaussian_average(f, 1.0, policy, false));
}

TEST(quadrature, batch_matches_scalar) {
  auto f = [](double x) { return 1.0 / (1.0 + x * x); };
  auto batch = [&](const std::vector<double>& xs) {
    std::vector<double> out;
    for (double x : xs) out.push_back(f(x));
    return out;
  };
  EXPECT_EQ(gaussian_average(f, 0.7).value, gaussian_average_batch(batch, 0.7).value);
}

TEST(quadrature, root_maximum_and_integral) {
  EXPECT_NEAR(bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, -1.0, 2.0), 0.3, 1e-7);
  EXPECT_NEAR(integrate([](double x) { return std::exp(-x); }, 0.0, 3.0), 1.0 - std::exp(-3.0), 1e-13);
  EXPECT_THROW(bisect([](double x) { return x * x + 1.0; }, 0.0, 1.0), std::invalid_argument);
}

}  // namespace
}  // namespace cqed
