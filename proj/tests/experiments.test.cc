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

#include "cqed/experiments.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "cqed/core.h"
#include "cqed/transfer.h"

namespace cqed {
namespace {

SweepSpec small_fig2() {
  SweepSpec s = SweepSpec::defaults(Experiment::kFig2ErrorVsNp);
  s.grid = {8, 40, 128};
  s.series = {0.0};
  s.threads = 1;
  return s;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cqed_experiments_" + name);
}

TEST(experiments, names_round_trip) {
  for (Experiment e : all_experiments()) EXPECT_EQ(experiment_from_string(to_string(e)), e);
  EXPECT_EQ(experiment_from_string("fig3"), Experiment::kFig3Spectrum);
  EXPECT_EQ(experiment_from_string("nanotube"), Experiment::kNanotube);
  EXPECT_THROW(experiment_from_string("fig9"), std::invalid_argument);
}

TEST(experiments, invalid_sweeps_throw) {
  SweepSpec s = small_fig2();
  s.grid = {};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.grid = {7};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s.grid = {8};
  s.series = {};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(experiments, fig2_rows_match_transfer_module) {
  SweepOutput out = run(small_fig2());
  const ResultTable& t = out.table;
  ASSERT_EQ(t.rows.size(), 3u);
  EXPECT_EQ(t.experiment, "fig2_error_vs_np");
  SystemParams p = small_fig2().params;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    int n_p = int(t.rows[r][t.column_index("n_p")]);
    double exact = 1.0 - transfer_fidelity_exact(p, n_p, optimal_tau(p.g, n_p)).fidelity;
    EXPECT_NEAR(t.rows[r][t.column_index("error_exact")], exact, 1e-12);
    EXPECT_EQ(t.rows[r][t.column_index("error_asymptotic")], transfer_error_asymptotic(p, n_p));
    EXPECT_EQ(t.rows[r][t.column_index("converged")], 1.0);
  }
  nlohmann::json summary = out.summary();
  EXPECT_TRUE(summary.contains("checks"));
  EXPECT_TRUE(summary.contains("all_pass"));
}

TEST(experiments, output_is_identical_across_thread_counts) {
  SweepSpec s = small_fig2();
  s.series = {0.0, 0.1};
  s.grid = {8, 16};
  s.threads = 1;
  std::string one = run(s).table.to_csv();
  s.threads = 3;
  EXPECT_EQ(run(s).table.to_csv(), one);
}

TEST(experiments, fig3_small_ensemble) {
  SweepSpec s = SweepSpec::defaults(Experiment::kFig3Spectrum);
  s.grid = {0.2, 0.6};
  s.ensemble_size = 400;
  s.threads = 1;
  SweepOutput out = run(s);
  const ResultTable& t = out.table;
  ASSERT_EQ(t.rows.size(), 2u);
  for (const auto& row : t.rows) {
    EXPECT_NEAR(row[t.column_index("bright_plus")], -row[t.column_index("bright_minus")], 1e-12);
    EXPECT_LE(row[t.column_index("max_deviation")], row[t.column_index("threshold")]);
    EXPECT_EQ(row[t.column_index("n_qubits")], 400.0);
  }
  for (const CheckResult& c : out.checks) EXPECT_TRUE(c.pass) << c.name;
}

TEST(experiments, csv_round_trip_is_exact) {
  SweepOutput out = run(small_fig2());
  std::filesystem::path path = scratch("round_trip.csv");
  out.table.write_csv(path.string());
  ResultTable back = ResultTable::read_csv(path.string());
  EXPECT_EQ(back.columns, out.table.columns);
  EXPECT_EQ(back.rows, out.table.rows);
  std::filesystem::remove(path);
  EXPECT_THROW(ResultTable::read_csv(scratch("missing.csv").string()), std::invalid_argument);
}

TEST(experiments, golden_comparison) {
  ResultTable golden = run(small_fig2()).table;
  GoldenReport same = compare_golden(golden, golden);
  EXPECT_TRUE(same.pass);
  EXPECT_TRUE(same.failures.empty());

  ResultTable tampered = golden;
  int col = tampered.column_index("error_exact");
  tampered.rows[1][col] *= 1.0 + 1e-6;
  GoldenReport bad = compare_golden(tampered, golden);
  EXPECT_FALSE(bad.pass);
  ASSERT_EQ(bad.failures.size(), 1u);
  EXPECT_NE(bad.failures[0].find("row 1"), std::string::npos);
  EXPECT_NE(bad.failures[0].find("error_exact"), std::string::npos);
  // A looser per-column tolerance accepts the same change.
  EXPECT_TRUE(compare_golden(tampered, golden, {{"error_exact", Tolerance{1e-5, 0.0}}}).pass);

  ResultTable unconverged = golden;
  unconverged.rows[0][unconverged.column_index("converged")] = 0.0;
  EXPECT_FALSE(compare_golden(unconverged, unconverged).pass);

  ResultTable fewer = golden;
  fewer.rows.pop_back();
  EXPECT_THROW(compare_golden(fewer, golden), std::invalid_argument);
  ResultTable renamed = golden;
  renamed.columns[0] = "other";
  EXPECT_THROW(compare_golden(renamed, golden), std::invalid_argument);
}

TEST(experiments, row_errors_carry_grid_coordinates) {
  SweepSpec s = SweepSpec::defaults(Experiment::kFig4bBandwidth);
  s.grid = {1.0};
  s.threads = 1;
  try {
    run(s);
    FAIL() << "expected a failure for a filter slower than the pulse interval";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("fig4b_bandwidth at grid value 1"), std::string::npos)
        << e.what();
  }
}

TEST(experiments, readout_sweep_small) {
  SweepSpec s = SweepSpec::defaults(Experiment::kFig5aSignalNoise);
  s.grid = {50, 500, 1500};
  s.threads = 1;
  SweepOutput out = run(s);
  const ResultTable& t = out.table;
  ASSERT_EQ(t.rows.size(), 3u);
  for (const auto& row : t.rows) {
    double ratio = row[t.column_index("X_numeric")] / row[t.column_index("X_analytic")];
    EXPECT_NEAR(ratio, 1.0, 0.05);
    EXPECT_GE(row[t.column_index("Xi_numeric")], row[t.column_index("Xi_shot_noise")] / std::sqrt(2.0));
  }
}

TEST(experiments, sweep_spec_serializes) {
  nlohmann::json j = small_fig2().to_json();
  EXPECT_EQ(j.at("experiment"), "fig2_error_vs_np");
  EXPECT_EQ(j.at("grid").size(), 3u);
}

}  // namespace
}  // namespace cqed
