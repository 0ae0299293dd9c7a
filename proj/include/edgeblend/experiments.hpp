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

#ifndef EDGEBLEND_EXPERIMENTS_HPP_
#define EDGEBLEND_EXPERIMENTS_HPP_

// Study drivers: weight recovery against a ground-truth clustering, the
// inverse (cluster-and-compare) loop, the holding/modularity trade-off sweep,
// objective-vs-VI correlation and evaluation-time scaling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <exception>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "edgeblend/clusterer.hpp"
#include "edgeblend/error.hpp"
#include "edgeblend/graph.hpp"
#include "edgeblend/metrics.hpp"
#include "edgeblend/objective.hpp"
#include "edgeblend/optimizer.hpp"
#include "edgeblend/report.hpp"
#include "edgeblend/synthgen.hpp"

namespace edgeblend {

struct OptParams {
  std::size_t budget = 10000;  // total across all starts
  double tolerance = 1e-4;
  double initial_step = 0.25;
  std::size_t starts = 4;  // barycenter + starts-1 random; basis vectors are added on top
  std::uint64_t seed = 1;
  unsigned threads = 1;

  nlohmann::json to_json() const {
    return {{"budget", budget},       {"tolerance", tolerance}, {"initial_step", initial_step},
            {"starts", starts},       {"seed", seed}};
  }
};

// Arctan holding objective, beta = 1 on unit-mean composite weights.
inline ObjectiveConfig default_holding_objective() {
  ObjectiveConfig cfg;
  cfg.beta = 1.0;
  cfg.variant = ObjectiveVariant::kArctanHolding;
  cfg.scaling = WeightScaling::kUnitMean;
  return cfg;
}

inline std::string to_string(ObjectiveVariant v) {
  switch (v) {
    case ObjectiveVariant::kArctanHolding: return "arctan_holding";
    case ObjectiveVariant::kCountPositive: return "count_positive";
    case ObjectiveVariant::kCutWeight: return "cut_weight";
    case ObjectiveVariant::kModularity: return "modularity_quality";
    case ObjectiveVariant::kBlend: return "blend";
  }
  return "unknown";
}

inline nlohmann::json to_json(const ObjectiveConfig& c) {
  return {{"variant", to_string(c.variant)},
          {"beta", c.beta},
          {"blend_lambda", c.blend_lambda},
          {"scaling", c.scaling == WeightScaling::kUnitMean ? "unit_mean" : "none"}};
}

inline nlohmann::json to_json(const ClustererConfig& c) {
  nlohmann::json j = {{"method", c.method == ClusterMethod::kLabelPropagation ? "label_prop"
                                                                             : "greedy_modularity"},
                      {"seed", c.seed},
                      {"max_passes", c.max_passes}};
  j["target_clusters"] = c.target_clusters ? nlohmann::json(*c.target_clusters) : nlohmann::json();
  return j;
}

namespace detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers; callers write
// results by index so the merge order is fixed.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<std::vector<double>> basis_vectors(std::size_t k) {
  std::vector<std::vector<double>> out;
  for (std::size_t j = 0; j < k; ++j) out.push_back(AlphaVector::basis(k, j).as(Normalization::kSimplex));
  return out;
}

// Holding powers on unit-mean composite weights, comparable across alphas.
inline std::vector<double> scaled_holding(const MultiGraph& g, const Clustering& c,
                                          std::span<const double> alpha, unsigned threads) {
  auto h = holding_powers(g, c, alpha, threads);
  const double s = detail::scale_factor(g, alpha, WeightScaling::kUnitMean);
  for (double& x : h) x *= s;
  return h;
}

inline double max_abs(std::span<const double> xs) {
  double r = 0.0;
  for (double x : xs) r = std::max(r, std::abs(x));
  return r;
}

inline OptProblem make_problem(std::size_t k, SimplexObjective f, const OptParams& opt) {
  OptProblem p;
  p.dimension = k;
  p.objective = std::move(f);
  p.budget = opt.budget;
  p.tolerance = opt.tolerance;
  p.initial_step = opt.initial_step;
  p.threads = opt.threads;
  return p;
}

inline void add_alpha_columns(std::vector<std::string>& cols, std::size_t k) {
  for (std::size_t j = 1; j <= k; ++j) cols.push_back(fmt::format("alpha_{}", j));
}

inline void append_cells(std::vector<std::string>& row, std::span<const double> xs) {
  for (double x : xs) row.push_back(CsvTable::cell(x));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Weight recovery

struct RecoverResult {
  AlphaVector alpha;
  std::vector<double> alpha_max_norm;
  HoldingReport optimized;
  std::vector<HoldingReport> slices;  // alpha = e_k for each metric
  std::optional<HoldingReport> pristine;
  OptResult opt;
  // The optimizer's point had a lower positive fraction than some basis
  // vector, which was returned instead.
  bool basis_fallback = false;
  ExperimentReport report;
};

// Maximizes the configured objective over the simplex by multistart pattern
// search. Basis vectors are always among the starts. Histograms share one
// range: slice 1 ("perturbed"), the pristine graph when given, and the
// optimized blend.
inline RecoverResult recover_weights(const MultiGraph& g, const Clustering& truth,
                                     const ObjectiveConfig& objective, const OptParams& opt,
                                     const MultiGraph* pristine = nullptr) {
  objective.validate();
  detail::check_clustering(g, truth);
  const std::size_t k = g.num_metrics();
  RecoverResult r;
  std::vector<double> best;
  if (k == 1) {
    best = {1.0};
  } else {
    auto f = [&g, &truth, objective](std::span<const double> a) {
      return maximization_objective(g, truth, a, objective);
    };
    const auto basis = detail::basis_vectors(k);
    r.opt = multistart(detail::make_problem(k, f, opt), opt.starts, opt.seed, basis);
    best = r.opt.best_alpha;
  }

  std::vector<std::vector<double>> slice_h;
  for (std::size_t j = 0; j < k; ++j) {
    slice_h.push_back(detail::scaled_holding(g, truth, AlphaVector::basis(k, j).coeffs(),
                                             opt.threads));
  }
  auto opt_h = detail::scaled_holding(g, truth, best, opt.threads);
  std::optional<std::vector<double>> pristine_h;
  if (pristine) {
    if (pristine->num_metrics() != 1 || pristine->num_vertices() != g.num_vertices()) {
      throw DataError("pristine graph must have one metric and the same vertex set");
    }
    const double one = 1.0;
    pristine_h = detail::scaled_holding(*pristine, truth, std::span<const double>(&one, 1),
                                        opt.threads);
  }

  double range = std::max(detail::max_abs(slice_h.front()), detail::max_abs(opt_h));
  if (pristine_h) range = std::max(range, detail::max_abs(*pristine_h));
  if (range == 0.0) range = 1.0;
  const std::pair<double, double> hist_range{-range, range};
  for (auto& h : slice_h) {
    r.slices.push_back(make_holding_report(std::move(h), kDefaultHistogramBins, hist_range));
  }
  r.optimized = make_holding_report(std::move(opt_h), kDefaultHistogramBins, hist_range);
  if (pristine_h) {
    r.pristine = make_holding_report(std::move(*pristine_h), kDefaultHistogramBins, hist_range);
  }
  for (std::size_t j = 0; j < k && k > 1; ++j) {
    if (r.slices[j].fraction_positive > r.optimized.fraction_positive) {
      best = AlphaVector::basis(k, j).as(Normalization::kSimplex);
      r.optimized = r.slices[j];
      r.basis_fallback = true;
    }
  }
  r.alpha = AlphaVector::simplex(best);
  r.alpha_max_norm = r.alpha.max_norm();

  auto& rep = r.report;
  rep.id = "recover";
  rep.inputs = {{"objective", to_json(objective)},
                {"optimizer", opt.to_json()},
                {"seed", opt.seed},
                {"n_vertices", g.num_vertices()},
                {"n_edges", g.num_edges()},
                {"metrics", g.metric_names()}};
  double slice_mean = 0.0;
  for (const auto& s : r.slices) slice_mean += s.fraction_positive;
  slice_mean /= static_cast<double>(k);
  rep.summary = {{"alpha", r.alpha.as(Normalization::kSimplex)},
                 {"alpha_max_norm", r.alpha_max_norm},
                 {"fraction_positive_optimized", r.optimized.fraction_positive},
                 {"fraction_positive_perturbed_average", slice_mean},
                 {"basis_fallback", r.basis_fallback},
                 {"evaluations", r.opt.evaluations},
                 {"objective_value", r.opt.best_value},
                 {"wall_seconds", r.opt.wall_seconds}};
  if (r.pristine) rep.summary["fraction_positive_pristine"] = r.pristine->fraction_positive;
  for (std::size_t j = 0; j < k; ++j) {
    rep.records.push_back({{"metric", g.metric_names()[j]},
                           {"fraction_positive", r.slices[j].fraction_positive},
                           {"seed", opt.seed}});
  }

  CsvTable alpha_table{{"metric", "alpha", "alpha_max_norm", "slice_fraction_positive"}, {}};
  for (std::size_t j = 0; j < k; ++j) {
    alpha_table.add(g.metric_names()[j], r.alpha[j], r.alpha_max_norm[j],
                    r.slices[j].fraction_positive);
  }
  rep.tables["alpha"] = std::move(alpha_table);

  CsvTable hist{{"bin_left", "bin_right", "perturbed", "pristine", "optimized"}, {}};
  const auto& h0 = r.slices.front().histogram;
  for (std::size_t b = 0; b < h0.counts.size(); ++b) {
    hist.add(h0.bin_left(b), h0.bin_right(b), h0.counts[b],
             r.pristine ? r.pristine->histogram.counts[b] : std::size_t{0},
             r.optimized.histogram.counts[b]);
  }
  rep.tables["holding_histograms"] = std::move(hist);
  return r;
}

// ---------------------------------------------------------------------------
// Inverse problem

struct InverseResult {
  AlphaVector alpha;
  double vi = 0.0;
  std::vector<double> basis_vi;  // VI of the clustering at each e_k
  OptResult opt;
  ExperimentReport report;
};

// Minimizes VI(cluster(collapse(g, alpha)), truth) by maximizing -VI.
inline InverseResult inverse_recover(const MultiGraph& g, const Clustering& truth,
                                     const ClustererConfig& clusterer, const OptParams& opt) {
  detail::check_clustering(g, truth);
  const std::size_t k = g.num_metrics();
  auto vi_at = [&g, &truth, clusterer](std::span<const double> a) {
    return variation_of_information(cluster_with_alpha(g, a, clusterer), truth);
  };
  InverseResult r;
  const auto basis = detail::basis_vectors(k);
  r.opt = multistart(detail::make_problem(k, [&](std::span<const double> a) { return -vi_at(a); },
                                          opt),
                     opt.starts, opt.seed, basis);
  r.alpha = AlphaVector::simplex(r.opt.best_alpha);
  r.vi = -r.opt.best_value;
  for (const auto& b : basis) r.basis_vi.push_back(vi_at(b));

  auto& rep = r.report;
  rep.id = "inverse";
  rep.inputs = {{"clusterer", to_json(clusterer)}, {"optimizer", opt.to_json()},
                {"seed", opt.seed}, {"n_vertices", g.num_vertices()},
                {"n_edges", g.num_edges()}};
  std::vector<double> sorted_vi = r.basis_vi;
  std::sort(sorted_vi.begin(), sorted_vi.end());
  const double median = sorted_vi.size() % 2 ? sorted_vi[sorted_vi.size() / 2]
                                             : 0.5 * (sorted_vi[sorted_vi.size() / 2 - 1] +
                                                      sorted_vi[sorted_vi.size() / 2]);
  rep.summary = {{"alpha", r.alpha.as(Normalization::kSimplex)},
                 {"alpha_max_norm", r.alpha.max_norm()},
                 {"vi", r.vi},
                 {"basis_vi_median", median},
                 {"evaluations", r.opt.evaluations},
                 {"wall_seconds", r.opt.wall_seconds}};
  CsvTable trace{{"eval", "start"}, {}};
  detail::add_alpha_columns(trace.columns, k);
  trace.columns.push_back("vi");
  for (const auto& t : r.opt.trace) {
    std::vector<std::string> row{CsvTable::cell(t.eval), CsvTable::cell(t.start)};
    detail::append_cells(row, t.alpha);
    row.push_back(CsvTable::cell(-t.value));
    trace.add_row(std::move(row));
    rep.records.push_back({{"eval", t.eval}, {"start", t.start}, {"alpha", t.alpha},
                           {"vi", -t.value}, {"seed", opt.seed}});
  }
  rep.tables["trace"] = std::move(trace);
  return r;
}

// ---------------------------------------------------------------------------
// Trade-off sweep

struct ParetoPoint {
  double lambda = 0.0;
  AlphaVector alpha;
  double fraction_positive = 0.0;
  double modularity = 0.0;
  double normalized_modularity = 0.0;
  bool dominated = false;
};

struct ParetoResult {
  std::vector<ParetoPoint> points;  // in lambda-grid order
  double reference_modularity = 0.0;
  ExperimentReport report;

  std::vector<ParetoPoint> frontier() const {
    std::vector<ParetoPoint> f;
    for (const auto& p : points) {
      if (!p.dominated) f.push_back(p);
    }
    std::sort(f.begin(), f.end(), [](const auto& a, const auto& b) {
      return a.fraction_positive < b.fraction_positive;
    });
    return f;
  }
};

inline void flag_dominated(std::vector<ParetoPoint>& pts) {
  for (auto& p : pts) {
    p.dominated = std::any_of(pts.begin(), pts.end(), [&](const ParetoPoint& q) {
      return q.fraction_positive >= p.fraction_positive &&
             q.normalized_modularity >= p.normalized_modularity &&
             (q.fraction_positive > p.fraction_positive ||
              q.normalized_modularity > p.normalized_modularity);
    });
  }
}

// For each lambda, maximizes (1-lambda) * normalized arctan objective
// + lambda * modularity of the ground truth. Modularity is normalized by the
// ground truth's modularity under uniform aggregation.
inline ParetoResult pareto_sweep(const MultiGraph& g, const Clustering& truth,
                                 std::span<const double> lambdas, const ObjectiveConfig& base,
                                 const OptParams& opt) {
  if (lambdas.empty()) throw UsageError("lambda grid is empty");
  for (double l : lambdas) {
    if (!(l >= 0.0 && l <= 1.0)) throw UsageError(fmt::format("lambda {} outside [0,1]", l));
  }
  detail::check_clustering(g, truth);
  const std::size_t k = g.num_metrics();
  ParetoResult r;
  r.reference_modularity = modularity(g, AlphaVector::uniform(k).coeffs(), truth);
  r.points.resize(lambdas.size());
  const auto basis = detail::basis_vectors(k);
  OptParams inner = opt;
  inner.threads = 1;
  detail::parallel_for(lambdas.size(), opt.threads, [&](std::size_t i) {
    ObjectiveConfig cfg = base;
    cfg.variant = ObjectiveVariant::kBlend;
    cfg.blend_lambda = lambdas[i];
    cfg.threads = 1;
    std::vector<double> best{1.0};
    if (k > 1) {
      auto f = [&g, &truth, cfg](std::span<const double> a) {
        return blended_objective(g, truth, a, cfg);
      };
      best = multistart(detail::make_problem(k, f, inner), inner.starts, inner.seed, basis)
                 .best_alpha;
    }
    auto& p = r.points[i];
    p.lambda = lambdas[i];
    p.alpha = AlphaVector::simplex(best);
    p.fraction_positive = count_positive(g, truth, best).second.fraction_positive;
    p.modularity = modularity(g, best, truth);
    p.normalized_modularity = normalized_modularity(p.modularity, r.reference_modularity);
  });
  flag_dominated(r.points);

  auto& rep = r.report;
  rep.id = "pareto";
  rep.inputs = {{"objective", to_json(base)}, {"optimizer", opt.to_json()}, {"seed", opt.seed},
                {"lambdas", std::vector<double>(lambdas.begin(), lambdas.end())}};
  CsvTable t{{"lambda", "fraction_positive", "normalized_modularity", "modularity", "dominated"},
             {}};
  detail::add_alpha_columns(t.columns, k);
  for (const auto& p : r.points) {
    std::vector<std::string> row{CsvTable::cell(p.lambda), CsvTable::cell(p.fraction_positive),
                                 CsvTable::cell(p.normalized_modularity),
                                 CsvTable::cell(p.modularity), CsvTable::cell(p.dominated)};
    detail::append_cells(row, p.alpha.coeffs());
    t.add_row(std::move(row));
    rep.records.push_back({{"lambda", p.lambda},
                           {"fraction_positive", p.fraction_positive},
                           {"normalized_modularity", p.normalized_modularity},
                           {"dominated", p.dominated},
                           {"alpha", p.alpha.as(Normalization::kSimplex)},
                           {"seed", opt.seed}});
  }
  rep.tables["frontier"] = std::move(t);
  const auto f = r.frontier();
  auto span_of = [&](auto member) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : f) {
      lo = std::min(lo, p.*member);
      hi = std::max(hi, p.*member);
    }
    return hi - lo;
  };
  rep.summary = {{"reference_modularity", r.reference_modularity},
                 {"frontier_points", f.size()},
                 {"fraction_span", span_of(&ParetoPoint::fraction_positive)},
                 {"normalized_modularity_span", span_of(&ParetoPoint::normalized_modularity)}};
  return r;
}

// ---------------------------------------------------------------------------
// Objective vs VI correlation

// Spearman rank correlation with average ranks for ties. NaN when either
// sample is constant.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw UsageError("spearman needs samples of equal length");
  if (x.size() < 3) throw UsageError("spearman needs at least 3 samples");
  auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

struct CorrelationSample {
  std::vector<double> alpha;
  double vi = 0.0;
  std::vector<double> objective;  // one value per beta
};

// Spearman correlation between the objective at each beta and -VI.
inline std::vector<double> correlate_samples(std::span<const CorrelationSample> samples,
                                             std::size_t n_betas) {
  if (samples.size() < 3) throw UsageError("correlation needs at least 3 alpha samples");
  std::vector<double> neg_vi;
  for (const auto& s : samples) neg_vi.push_back(-s.vi);
  std::vector<double> out;
  for (std::size_t b = 0; b < n_betas; ++b) {
    std::vector<double> obj;
    for (const auto& s : samples) obj.push_back(s.objective.at(b));
    out.push_back(spearman(obj, neg_vi));
  }
  return out;
}

struct CorrelationResult {
  std::vector<double> betas;
  std::vector<double> spearman;
  std::vector<CorrelationSample> samples;
  ExperimentReport report;
};

// Samples n_alpha uniform simplex points; at each, clusters the collapsed
// graph and records its VI to the truth, and the arctan objective of the
// truth at every beta.
inline CorrelationResult correlation_study(const MultiGraph& g, const Clustering& truth,
                                           std::span<const double> betas, std::size_t n_alpha,
                                           const ClustererConfig& clusterer, std::uint64_t seed,
                                           WeightScaling scaling = WeightScaling::kUnitMean,
                                           unsigned threads = 1) {
  if (betas.empty()) throw UsageError("beta grid is empty");
  if (n_alpha < 3) throw UsageError("correlation study needs at least 3 alpha samples");
  detail::check_clustering(g, truth);
  const std::size_t k = g.num_metrics();
  CorrelationResult r;
  r.betas.assign(betas.begin(), betas.end());
  std::mt19937_64 rng(seed);
  r.samples.resize(n_alpha);
  for (auto& s : r.samples) s.alpha = sample_simplex(k, rng);
  detail::parallel_for(n_alpha, threads, [&](std::size_t i) {
    auto& s = r.samples[i];
    s.vi = variation_of_information(cluster_with_alpha(g, s.alpha, clusterer), truth);
    const auto h = holding_powers(g, truth, s.alpha);
    const double scale = detail::scale_factor(g, s.alpha, scaling);
    for (double beta : r.betas) s.objective.push_back(arctan_sum(h, beta * scale));
  });
  r.spearman = correlate_samples(r.samples, r.betas.size());

  auto& rep = r.report;
  rep.id = "correlation";
  rep.inputs = {{"betas", r.betas},
                {"n_alpha", n_alpha},
                {"clusterer", to_json(clusterer)},
                {"scaling", scaling == WeightScaling::kUnitMean ? "unit_mean" : "none"},
                {"seed", seed}};
  CsvTable corr{{"beta", "spearman"}, {}};
  for (std::size_t b = 0; b < r.betas.size(); ++b) corr.add(r.betas[b], r.spearman[b]);
  rep.tables["spearman"] = std::move(corr);
  CsvTable samples{{"sample", "vi"}, {}};
  for (std::size_t b = 0; b < r.betas.size(); ++b) {
    samples.columns.push_back(fmt::format("objective_{}", b + 1));
  }
  detail::add_alpha_columns(samples.columns, k);
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const auto& s = r.samples[i];
    std::vector<std::string> row{CsvTable::cell(i), CsvTable::cell(s.vi)};
    detail::append_cells(row, s.objective);
    detail::append_cells(row, s.alpha);
    samples.add_row(std::move(row));
    rep.records.push_back({{"sample", i}, {"alpha", s.alpha}, {"vi", s.vi},
                           {"objective", s.objective}, {"seed", seed}});
  }
  rep.tables["samples"] = std::move(samples);
  nlohmann::json per_beta = nlohmann::json::array();
  for (std::size_t b = 0; b < r.betas.size(); ++b) {
    per_beta.push_back({{"beta", r.betas[b]},
                        {"spearman", std::isnan(r.spearman[b]) ? nlohmann::json()
                                                               : nlohmann::json(r.spearman[b])}});
  }
  rep.summary = {{"spearman", per_beta}};
  return r;
}

// ---------------------------------------------------------------------------
// Scaling

enum class ScalingMode {
  kEdges,    // sizes are vertex counts; time one objective evaluation
  kMetrics,  // sizes are metric counts at fixed n; also count optimizer evaluations
};

struct ScalingPoint {
  std::size_t n = 0;
  std::size_t edges = 0;
  std::size_t metrics = 0;
  double mean_seconds = 0.0;
  std::vector<double> samples;  // one per rep
  std::size_t evaluations = 0;  // kMetrics only
};

struct ScalingResult {
  std::vector<ScalingPoint> points;
  double slope = 0.0;  // log-log slope of time vs |E| (or evaluations vs K)
  ExperimentReport report;
};

inline double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw UsageError("slope needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
  }
  return sxy / sxx;
}

// Best of `inner` back-to-back calls, in seconds, on a monotonic clock.
inline double time_best_of(const std::function<void()>& fn, int inner = 3) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < inner; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

inline ScalingResult scaling_study(std::span<const std::size_t> sizes, const BenchSpec& tmpl,
                                   std::size_t reps, ScalingMode mode = ScalingMode::kEdges,
                                   const OptParams& opt = {}) {
  if (sizes.size() < 2) throw UsageError("scaling study needs at least two sizes");
  if (reps < 1) throw UsageError("scaling study needs reps >= 1");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw UsageError("scaling sizes must be increasing");
  }
  ScalingResult r;
  const auto objective = default_holding_objective();
  volatile double sink = 0.0;
  for (std::size_t size : sizes) {
    BenchSpec spec = tmpl;
    if (mode == ScalingMode::kEdges) {
      spec.n = size;
      spec.min_cluster_size = spec.max_cluster_size = 0;
    } else {
      spec.num_metrics = size;
    }
    const auto bench = generate(spec);
    const auto& g = bench.graph;
    const auto alpha = AlphaVector::uniform(g.num_metrics());
    ScalingPoint p{spec.n, g.num_edges(), g.num_metrics(), 0.0, {}, 0};
    for (std::size_t rep = 0; rep < reps; ++rep) {
      p.samples.push_back(time_best_of(
          [&] { sink = sink + arctan_objective(g, bench.planted, alpha.coeffs(), objective); }));
    }
    p.mean_seconds = std::accumulate(p.samples.begin(), p.samples.end(), 0.0) /
                     static_cast<double>(reps);
    if (mode == ScalingMode::kMetrics) {
      auto f = [&g, &bench, objective](std::span<const double> a) {
        return maximization_objective(g, bench.planted, a, objective);
      };
      p.evaluations = pattern_search(detail::make_problem(g.num_metrics(), f, opt), opt.seed)
                          .evaluations;
    }
    r.points.push_back(std::move(p));
  }
  std::vector<double> xs, ys;
  for (const auto& p : r.points) {
    if (mode == ScalingMode::kEdges) {
      xs.push_back(static_cast<double>(p.edges));
      ys.push_back(p.mean_seconds);
    } else {
      xs.push_back(static_cast<double>(p.metrics));
      ys.push_back(static_cast<double>(std::max<std::size_t>(p.evaluations, 1)));
    }
  }
  r.slope = loglog_slope(xs, ys);

  auto& rep = r.report;
  rep.id = "scaling";
  rep.inputs = {{"mode", mode == ScalingMode::kEdges ? "edges" : "metrics"},
                {"sizes", std::vector<std::size_t>(sizes.begin(), sizes.end())},
                {"reps", reps},
                {"spec", to_json(tmpl)},
                {"seed", tmpl.seed}};
  CsvTable t{{"n", "edges", "metrics", "mean_seconds", "evaluations"}, {}};
  for (const auto& p : r.points) {
    t.add(p.n, p.edges, p.metrics, p.mean_seconds, p.evaluations);
    rep.records.push_back({{"n", p.n}, {"edges", p.edges}, {"metrics", p.metrics},
                           {"samples", p.samples}, {"evaluations", p.evaluations},
                           {"seed", tmpl.seed}});
  }
  rep.tables["timings"] = std::move(t);
  rep.summary = {{"loglog_slope", r.slope}};
  return r;
}

// ---------------------------------------------------------------------------
// Positive-holding fractions across benchmark sizes and seeds

struct RecoveryRow {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t clusters = 0;
  double ground_truth = 0.0;
  double optimized = 0.0;
  double perturbed_average = 0.0;
  double perturbed_negative = 0.0;  // fraction below 0, metric 1
  double optimized_negative = 0.0;
};

struct RecoveryTable {
  std::vector<RecoveryRow> rows;
  ExperimentReport report;
};

inline RecoveryTable recovery_table(std::span<const std::size_t> sizes,
                                    std::span<const std::uint64_t> seeds, const BenchSpec& tmpl,
                                    const ObjectiveConfig& objective, const OptParams& opt) {
  if (sizes.empty() || seeds.empty()) throw UsageError("need at least one size and one seed");
  RecoveryTable t;
  t.rows.resize(sizes.size() * seeds.size());
  OptParams inner = opt;
  inner.threads = 1;
  detail::parallel_for(t.rows.size(), opt.threads, [&](std::size_t i) {
    BenchSpec spec = tmpl;
    spec.n = sizes[i / seeds.size()];
    spec.seed = seeds[i % seeds.size()];
    spec.min_cluster_size = spec.max_cluster_size = 0;
    const auto bench = generate(spec);
    OptParams run_opt = inner;
    run_opt.seed = spec.seed;
    const auto rec = recover_weights(bench.graph, bench.planted, objective, run_opt,
                                     &bench.pristine);
    double avg = 0.0;
    for (const auto& s : rec.slices) avg += s.fraction_positive;
    avg /= static_cast<double>(rec.slices.size());
    t.rows[i] = {spec.n,
                 spec.seed,
                 bench.planted.num_clusters(),
                 rec.pristine->fraction_positive,
                 rec.optimized.fraction_positive,
                 avg,
                 rec.slices.front().fraction_negative(),
                 rec.optimized.fraction_negative()};
  });

  auto& rep = t.report;
  rep.id = "recovery";
  rep.inputs = {{"sizes", std::vector<std::size_t>(sizes.begin(), sizes.end())},
                {"seeds", std::vector<std::uint64_t>(seeds.begin(), seeds.end())},
                {"spec", to_json(tmpl)},
                {"objective", to_json(objective)},
                {"optimizer", opt.to_json()}};
  CsvTable csv{{"n", "seed", "clusters", "ground_truth", "optimized", "perturbed_average"}, {}};
  nlohmann::json per_size = nlohmann::json::array();
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    double gt = 0, op = 0, pa = 0;
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      const auto& row = t.rows[s * seeds.size() + j];
      gt += row.ground_truth;
      op += row.optimized;
      pa += row.perturbed_average;
    }
    const double m = static_cast<double>(seeds.size());
    per_size.push_back({{"n", sizes[s]}, {"ground_truth", gt / m}, {"optimized", op / m},
                        {"perturbed_average", pa / m}});
  }
  for (const auto& row : t.rows) {
    csv.add(row.n, row.seed, row.clusters, row.ground_truth, row.optimized,
            row.perturbed_average);
    rep.records.push_back({{"n", row.n}, {"seed", row.seed}, {"clusters", row.clusters},
                           {"ground_truth", row.ground_truth}, {"optimized", row.optimized},
                           {"perturbed_average", row.perturbed_average}});
  }
  rep.tables["fractions"] = std::move(csv);
  rep.summary = {{"seed_averages", per_size}};
  return t;
}

}  // namespace edgeblend

#endif  // EDGEBLEND_EXPERIMENTS_HPP_
