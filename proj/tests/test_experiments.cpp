// Copyright 2026 The edgeblend Authors
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


#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "edgeblend/experiments.hpp"
#include "support.hpp"

namespace edgeblend {
namespace {

Benchmark small_bench(std::uint64_t seed, std::size_t k = 4, bool noisy = true) {
  BenchSpec s;
  s.n = 200;
  s.avg_degree = 16;
  s.num_metrics = k;
  s.seed = seed;
  if (!noisy) s.noise = NoiseParams::none();
  return generate(s);
}

Benchmark easy_bench(std::uint64_t seed, std::size_t k, bool noisy) {
  BenchSpec s;
  s.n = 200;
  s.avg_degree = 16;
  s.mu_t = 0.2;
  s.mu_w = 0.2;
  s.num_metrics = k;
  s.seed = seed;
  if (!noisy) s.noise = NoiseParams::none();
  return generate(s);
}

OptParams quick(std::size_t budget = 400) {
  OptParams p;
  p.budget = budget;
  p.starts = 2;
  return p;
}

nlohmann::json without_timing(nlohmann::json j) {
  j["summary"].erase("wall_seconds");
  return j;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

TEST(RecoverWeights, SingleMetricShortCircuits) {
  const auto b = small_bench(1, 1);
  const auto r = recover_weights(b.graph, b.planted, default_holding_objective(), quick());
  EXPECT_EQ(r.alpha.size(), 1u);
  EXPECT_EQ(r.alpha[0], 1.0);
  EXPECT_EQ(r.opt.evaluations, 0u);
}

TEST(RecoverWeights, NeverBelowBestBasisVector) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto b = small_bench(seed);
    for (std::size_t budget : {5u, 60u, 400u}) {
      const auto r =
          recover_weights(b.graph, b.planted, default_holding_objective(), quick(budget));
      for (const auto& s : r.slices) {
        EXPECT_GE(r.optimized.fraction_positive, s.fraction_positive);
      }
      double sum = 0.0;
      for (double x : r.alpha.coeffs()) sum += x;
      EXPECT_NEAR(sum, 1.0, 1e-12);
      EXPECT_NEAR(*std::max_element(r.alpha_max_norm.begin(), r.alpha_max_norm.end()), 1.0,
                  1e-12);
    }
  }
}

TEST(RecoverWeights, ImprovesOnSingleMetrics) {
  const auto b = small_bench(4, 6);
  const auto r = recover_weights(b.graph, b.planted, default_holding_objective(), quick(1500),
                                 &b.pristine);
  double avg = 0.0;
  for (const auto& s : r.slices) avg += s.fraction_positive;
  avg /= static_cast<double>(r.slices.size());
  EXPECT_GT(r.optimized.fraction_positive, avg);
  ASSERT_TRUE(r.pristine.has_value());
  EXPECT_GE(r.pristine->fraction_positive, 0.9);
}

TEST(RecoverWeights, ReportIsReproducible) {
  const auto b = small_bench(5, 3);
  const auto a = recover_weights(b.graph, b.planted, default_holding_objective(), quick(200));
  const auto c = recover_weights(b.graph, b.planted, default_holding_objective(), quick(200));
  EXPECT_EQ(without_timing(a.report.provenance()), without_timing(c.report.provenance()));
  for (const auto& rec : a.report.records) EXPECT_TRUE(rec.contains("seed"));
  EXPECT_EQ(a.report.inputs["seed"], 1);
  EXPECT_EQ(first_line(a.report.tables.at("alpha").render()),
            "metric,alpha,alpha_max_norm,slice_fraction_positive");
  EXPECT_EQ(first_line(a.report.tables.at("holding_histograms").render()),
            "bin_left,bin_right,perturbed,pristine,optimized");
}

TEST(RecoverWeights, PristineShapeChecked) {
  const auto b = small_bench(6, 3);
  EXPECT_THROW(recover_weights(b.graph, b.planted, default_holding_objective(), quick(10),
                               &b.graph),
               DataError);
}

TEST(RecoverWeights, NumericalAbortPropagates) {
  // The cut sum over two 1e308 edges overflows to infinity.
  MultiGraphBuilder gb({"a", "b"}, 3);
  gb.add_edge(0, 1, std::vector<double>{1e308, 1e308});
  gb.add_edge(1, 2, std::vector<double>{1e308, 0.0});
  const auto g = std::move(gb).build();
  ObjectiveConfig cfg;
  cfg.variant = ObjectiveVariant::kCutWeight;
  EXPECT_THROW(recover_weights(g, Clustering::singletons(3), cfg, quick(50)), NumericalError);
}

TEST(InverseRecover, IdenticalCopiesReachZeroVi) {
  const auto b = easy_bench(7, 3, false);
  const auto r = inverse_recover(b.graph, b.planted, ClustererConfig{}, quick(30));
  EXPECT_LT(r.vi, 0.05);
  for (double v : r.basis_vi) EXPECT_EQ(v, r.basis_vi.front());
}

TEST(InverseRecover, BudgetCoversBarycenterAndVertices) {
  const auto b = easy_bench(8, 3, true);
  const auto r = inverse_recover(b.graph, b.planted, ClustererConfig{}, quick(4));
  ASSERT_EQ(r.opt.trace.size(), 4u);
  EXPECT_EQ(r.opt.trace[0].alpha, simplex_barycenter(3));
  double best = r.opt.trace[0].value;
  for (const auto& t : r.opt.trace) best = std::max(best, t.value);
  EXPECT_EQ(r.vi, -best);
  EXPECT_EQ(first_line(r.report.tables.at("trace").render()),
            "eval,start,alpha_1,alpha_2,alpha_3,vi");
}

TEST(InverseRecover, BeatsMedianSingleMetric) {
  BenchSpec s;
  s.n = 300;
  s.avg_degree = 20;
  s.mu_t = 0.3;
  s.mu_w = 0.4;
  s.num_metrics = 5;
  s.seed = 9;
  const auto b = generate(s);
  const auto r = inverse_recover(b.graph, b.planted, ClustererConfig{}, quick(80));
  auto sorted = r.basis_vi;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_LT(r.vi, sorted[sorted.size() / 2]);
}

TEST(ParetoSweep, EndpointsAndFrontier) {
  const auto b = small_bench(10, 4);
  const std::vector<double> lambdas{0.0, 0.3, 0.7, 1.0};
  const auto r = pareto_sweep(b.graph, b.planted, lambdas, default_holding_objective(),
                              quick(300));
  ASSERT_EQ(r.points.size(), 4u);
  double max_fraction = 0.0, max_q = -INFINITY;
  for (const auto& p : r.points) {
    max_fraction = std::max(max_fraction, p.fraction_positive);
    max_q = std::max(max_q, p.normalized_modularity);
  }
  EXPECT_EQ(r.points.front().fraction_positive, max_fraction);
  EXPECT_EQ(r.points.back().normalized_modularity, max_q);
  const auto f = r.frontier();
  ASSERT_FALSE(f.empty());
  for (std::size_t i = 1; i < f.size(); ++i) {
    EXPECT_LE(f[i].normalized_modularity, f[i - 1].normalized_modularity);
  }
  EXPECT_EQ(first_line(r.report.tables.at("frontier").render()),
            "lambda,fraction_positive,normalized_modularity,modularity,dominated,alpha_1,"
            "alpha_2,alpha_3,alpha_4");
  EXPECT_THROW(pareto_sweep(b.graph, b.planted, std::vector<double>{1.2},
                            default_holding_objective(), quick(10)),
               UsageError);
}

TEST(FlagDominated, Basic) {
  std::vector<ParetoPoint> pts(3);
  pts[0].fraction_positive = 0.9, pts[0].normalized_modularity = 0.9;
  pts[1].fraction_positive = 0.8, pts[1].normalized_modularity = 0.95;
  pts[2].fraction_positive = 0.8, pts[2].normalized_modularity = 0.85;
  flag_dominated(pts);
  EXPECT_FALSE(pts[0].dominated);
  EXPECT_FALSE(pts[1].dominated);
  EXPECT_TRUE(pts[2].dominated);
}

TEST(Spearman, Basics) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{2, 4, 6, 8, 100}), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
  EXPECT_TRUE(std::isnan(spearman(x, std::vector<double>{1, 1, 1, 1, 1})));
  // Ties take average ranks: y ranks (1.5, 1.5, 3, 4, 5).
  const double r = spearman(x, std::vector<double>{0, 0, 1, 2, 3});
  EXPECT_NEAR(r, 0.9746794344808963, 1e-12);
}

TEST(CorrelateSamples, MockPerfectCorrelation) {
  std::vector<CorrelationSample> samples;
  for (int i = 0; i < 10; ++i) {
    const double vi = 0.1 * i * i;
    samples.push_back({{}, vi, {-vi, -2 * vi + 1}});
  }
  const auto rho = correlate_samples(samples, 2);
  EXPECT_DOUBLE_EQ(rho[0], 1.0);
  EXPECT_DOUBLE_EQ(rho[1], 1.0);
  EXPECT_THROW(correlate_samples(std::span(samples).first(2), 2), UsageError);
}

TEST(CorrelationStudy, RunsAndValidates) {
  const auto b = easy_bench(11, 3, true);
  const std::vector<double> betas{0.01, 1.0, 100.0};
  ClustererConfig cc;
  EXPECT_THROW(correlation_study(b.graph, b.planted, betas, 1, cc, 1), UsageError);
  EXPECT_THROW(correlation_study(b.graph, b.planted, std::vector<double>{}, 5, cc, 1),
               UsageError);
  const auto r = correlation_study(b.graph, b.planted, betas, 6, cc, 1);
  EXPECT_EQ(r.spearman.size(), 3u);
  EXPECT_EQ(r.samples.size(), 6u);
  const auto r2 = correlation_study(b.graph, b.planted, betas, 6, cc, 1, WeightScaling::kUnitMean,
                                    3);
  EXPECT_EQ(r.report.provenance(), r2.report.provenance());
  EXPECT_EQ(first_line(r.report.tables.at("spearman").render()), "beta,spearman");
  EXPECT_EQ(first_line(r.report.tables.at("samples").render()),
            "sample,vi,objective_1,objective_2,objective_3,alpha_1,alpha_2,alpha_3");
}

TEST(ScalingStudy, SingleRepAndValidation) {
  BenchSpec t;
  t.avg_degree = 10;
  t.num_metrics = 2;
  const std::vector<std::size_t> sizes{100, 200};
  const auto r = scaling_study(sizes, t, 1);
  ASSERT_EQ(r.points.size(), 2u);
  for (const auto& p : r.points) {
    ASSERT_EQ(p.samples.size(), 1u);
    EXPECT_EQ(p.mean_seconds, p.samples.front());
  }
  EXPECT_EQ(first_line(r.report.tables.at("timings").render('\t')),
            "n\tedges\tmetrics\tmean_seconds\tevaluations");
  EXPECT_THROW(scaling_study(std::vector<std::size_t>{200, 100}, t, 1), UsageError);
  EXPECT_THROW(scaling_study(std::vector<std::size_t>{200}, t, 1), UsageError);
  EXPECT_THROW(scaling_study(sizes, t, 0), UsageError);
}

TEST(ScalingStudy, MetricsModeCountsEvaluations) {
  BenchSpec t;
  t.n = 100;
  t.avg_degree = 10;
  OptParams opt;
  opt.budget = 300;
  const auto r = scaling_study(std::vector<std::size_t>{2, 4}, t, 1, ScalingMode::kMetrics, opt);
  for (const auto& p : r.points) {
    EXPECT_GT(p.evaluations, 0u);
    EXPECT_LE(p.evaluations, 300u);
  }
}

TEST(ScalingStudy, DoublingEdgesRoughlyDoublesTime) {
  BenchSpec t;
  t.avg_degree = 30;
  const auto r = scaling_study(std::vector<std::size_t>{4000, 8000}, t, 5);
  const double edge_ratio = static_cast<double>(r.points[1].edges) / r.points[0].edges;
  const double time_ratio = r.points[1].mean_seconds / r.points[0].mean_seconds;
  EXPECT_NEAR(edge_ratio, 2.0, 0.1);
  EXPECT_GE(time_ratio, 1.5);
  EXPECT_LE(time_ratio, 2.6);
}

TEST(LoglogSlope, ExactPowerLaw) {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
  EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-12);
  EXPECT_THROW(loglog_slope(std::vector<double>{1}, std::vector<double>{1}), UsageError);
}

TEST(RecoveryTable, RowsAndColumns) {
  BenchSpec t;
  t.avg_degree = 16;
  t.num_metrics = 3;
  const auto table = recovery_table(std::vector<std::size_t>{150}, std::vector<std::uint64_t>{1, 2},
                                    t, default_holding_objective(), quick(100));
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[1].seed, 2u);
  EXPECT_EQ(first_line(table.report.tables.at("fractions").render()),
            "n,seed,clusters,ground_truth,optimized,perturbed_average");
}

TEST(ExperimentReport, WritesTablesAndProvenance) {
  const auto b = small_bench(12, 2);
  const auto r = recover_weights(b.graph, b.planted, default_holding_objective(), quick(50));
  const auto dir = std::filesystem::temp_directory_path() / "edgeblend_report_test";
  std::filesystem::remove_all(dir);
  const auto paths = r.report.write(dir, '\t');
  EXPECT_EQ(paths.size(), 3u);
  EXPECT_TRUE(std::filesystem::exists(dir / "recover_alpha.tsv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "recover_holding_histograms.tsv"));
  std::ifstream in(dir / "recover.provenance.json");
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["experiment"], "recover");
  EXPECT_EQ(j["inputs"]["seed"], 1);
  EXPECT_NE(r.report.summary_text().find("seed: 1"), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace edgeblend
