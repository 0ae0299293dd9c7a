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

#ifndef EDGEBLEND_OBJECTIVE_HPP_
#define EDGEBLEND_OBJECTIVE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "edgeblend/error.hpp"
#include "edgeblend/graph.hpp"
#include "edgeblend/metrics.hpp"

namespace edgeblend {

enum class ObjectiveVariant { kArctanHolding, kCountPositive, kCutWeight, kModularity, kBlend };

// kUnitMean divides composite weights by their mean before holding powers are
// taken, so beta acts on a fixed scale regardless of alpha or metric units.
enum class WeightScaling { kNone, kUnitMean };

struct ObjectiveConfig {
  double beta = 1.0;
  ObjectiveVariant variant = ObjectiveVariant::kArctanHolding;
  double blend_lambda = 0.0;  // weight on modularity for kBlend
  WeightScaling scaling = WeightScaling::kNone;
  unsigned threads = 1;

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw UsageError(fmt::format("beta must be positive, got {}", beta));
    }
    if (!(blend_lambda >= 0.0 && blend_lambda <= 1.0)) {
      throw UsageError(fmt::format("blend lambda must lie in [0,1], got {}", blend_lambda));
    }
  }
};

// Sum with a fixed binary reduction tree; the result depends only on the
// input order, not on how the terms were produced.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

inline double pull(const MultiGraph& g, VertexId v, Label k, const Clustering& c,
                   std::span<const double> alpha) {
  check_alpha_dimension(g, alpha.size());
  double s = 0.0;
  for (const auto& inc : g.neighbors(v)) {
    if (c[inc.neighbor] == k) s += composite_weight_unchecked(g, inc.edge, alpha);
  }
  return s;
}

namespace detail {

// Per-vertex pull accumulator; `touched` lists the clusters with a nonzero
// slot so a reset costs O(deg v).
class PullScratch {
 public:
  explicit PullScratch(std::size_t num_clusters) : pull_(num_clusters, 0.0), used_(num_clusters) {}

  double holding(const MultiGraph& g, VertexId v, const Clustering& c,
                 std::span<const double> alpha) {
    const Label own = c[v];
    for (const auto& inc : g.neighbors(v)) {
      const Label k = c[inc.neighbor];
      if (!used_[k]) {
        used_[k] = true;
        touched_.push_back(k);
      }
      pull_[k] += composite_weight_unchecked(g, inc.edge, alpha);
    }
    // A foreign cluster with no neighbor of v contributes a pull of 0; with a
    // single cluster overall the foreign max is defined as 0.
    std::size_t foreign_adjacent = 0;
    double foreign_max = -std::numeric_limits<double>::infinity();
    for (Label k : touched_) {
      if (k == own) continue;
      ++foreign_adjacent;
      foreign_max = std::max(foreign_max, pull_[k]);
    }
    if (foreign_adjacent + 1 < c.num_clusters() || foreign_adjacent == 0) {
      foreign_max = std::max(foreign_max, 0.0);
    }
    const double h = (used_[own] ? pull_[own] : 0.0) - foreign_max;
    for (Label k : touched_) {
      pull_[k] = 0.0;
      used_[k] = false;
    }
    touched_.clear();
    return h;
  }

 private:
  std::vector<double> pull_;
  std::vector<bool> used_;
  std::vector<Label> touched_;
};

inline void check_clustering(const MultiGraph& g, const Clustering& c) {
  if (c.size() != g.num_vertices()) {
    throw DataError(fmt::format("clustering covers {} vertices, graph has {}", c.size(),
                                g.num_vertices()));
  }
}

inline double scale_factor(const MultiGraph& g, std::span<const double> alpha,
                           WeightScaling scaling) {
  if (scaling == WeightScaling::kNone) return 1.0;
  const double mean = mean_composite_weight(g, alpha);
  return mean > 0.0 ? 1.0 / mean : 1.0;
}

}  // namespace detail

// Own-cluster pull minus the largest pull of any other cluster.
inline double holding_power(const MultiGraph& g, VertexId v, const Clustering& c,
                            std::span<const double> alpha) {
  check_alpha_dimension(g, alpha.size());
  detail::check_clustering(g, c);
  detail::PullScratch scratch(c.num_clusters());
  return scratch.holding(g, v, c, alpha);
}

// Holding power of every vertex in O(|E| K). With threads > 1 the vertex
// range is split into contiguous blocks; values do not depend on the split.
inline std::vector<double> holding_powers(const MultiGraph& g, const Clustering& c,
                                          std::span<const double> alpha,
                                          unsigned threads = 1) {
  check_alpha_dimension(g, alpha.size());
  detail::check_clustering(g, c);
  const std::size_t n = g.num_vertices();
  std::vector<double> h(n);
  auto run = [&](std::size_t lo, std::size_t hi) {
    detail::PullScratch scratch(c.num_clusters());
    for (std::size_t v = lo; v < hi; ++v) {
      h[v] = scratch.holding(g, static_cast<VertexId>(v), c, alpha);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    run(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t block = (n + workers - 1) / workers;
    for (std::size_t lo = 0; lo < n; lo += block) {
      pool.emplace_back(run, lo, std::min(n, lo + block));
    }
  }
  return h;
}

inline double arctan_sum(std::span<const double> holding, double beta) {
  std::vector<double> terms(holding.size());
  for (std::size_t i = 0; i < holding.size(); ++i) terms[i] = std::atan(beta * holding[i]);
  return pairwise_sum(terms);
}

inline double arctan_objective(const MultiGraph& g, const Clustering& c,
                               std::span<const double> alpha, const ObjectiveConfig& cfg) {
  cfg.validate();
  auto h = holding_powers(g, c, alpha, cfg.threads);
  const double scale = detail::scale_factor(g, alpha, cfg.scaling);
  return arctan_sum(h, cfg.beta * scale);
}

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  double bin_width() const { return counts.empty() ? 0.0 : (hi - lo) / counts.size(); }
  double bin_left(std::size_t i) const { return lo + bin_width() * i; }
  double bin_right(std::size_t i) const {
    return i + 1 == counts.size() ? hi : lo + bin_width() * (i + 1);
  }
  std::size_t total() const {
    std::size_t s = 0;
    for (auto x : counts) s += x;
    return s;
  }
};

// Values outside [lo, hi] land in the end bins.
inline Histogram make_histogram(std::span<const double> values, double lo, double hi,
                                std::size_t bins) {
  if (bins == 0 || !(hi > lo)) throw UsageError("histogram needs bins > 0 and hi > lo");
  Histogram hist{lo, hi, std::vector<std::size_t>(bins, 0)};
  const double width = (hi - lo) / static_cast<double>(bins);
  for (double x : values) {
    const double pos = std::floor((x - lo) / width);
    const auto idx = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    ++hist.counts[idx];
  }
  return hist;
}

inline std::string histogram_csv(const Histogram& h, char sep = ',') {
  std::string out = fmt::format("bin_left{0}bin_right{0}count\n", sep);
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    out += fmt::format("{:.17g}{}{:.17g}{}{}\n", h.bin_left(i), sep, h.bin_right(i), sep,
                       h.counts[i]);
  }
  return out;
}

struct HoldingReport {
  std::vector<double> holding;
  std::size_t positive = 0;
  double fraction_positive = 0.0;
  Histogram histogram;

  double fraction_negative() const {
    if (holding.empty()) return 0.0;
    const auto neg = std::count_if(holding.begin(), holding.end(), [](double h) { return h < 0; });
    return static_cast<double>(neg) / static_cast<double>(holding.size());
  }
};

inline constexpr std::size_t kDefaultHistogramBins = 40;

// Builds the report; the histogram spans [-r, r] with r = max |H| unless an
// explicit range is given.
inline HoldingReport make_holding_report(std::vector<double> holding,
                                         std::size_t bins = kDefaultHistogramBins,
                                         std::optional<std::pair<double, double>> range = {}) {
  HoldingReport r;
  r.positive = static_cast<std::size_t>(
      std::count_if(holding.begin(), holding.end(), [](double h) { return h > 0.0; }));
  r.fraction_positive =
      holding.empty() ? 0.0 : static_cast<double>(r.positive) / static_cast<double>(holding.size());
  if (!range) {
    double span = 0.0;
    for (double h : holding) span = std::max(span, std::abs(h));
    if (span == 0.0) span = 1.0;
    range = std::pair{-span, span};
  }
  r.histogram = make_histogram(holding, range->first, range->second, bins);
  r.holding = std::move(holding);
  return r;
}

// Number of vertices with strictly positive holding power.
inline std::pair<std::size_t, HoldingReport> count_positive(const MultiGraph& g,
                                                            const Clustering& c,
                                                            std::span<const double> alpha,
                                                            unsigned threads = 1) {
  auto report = make_holding_report(holding_powers(g, c, alpha, threads));
  const std::size_t count = report.positive;
  return {count, std::move(report)};
}

// S^k: metric-k weight summed over cut edges.
inline std::vector<double> cut_slice_sums(const MultiGraph& g, const Clustering& c) {
  detail::check_clustering(g, c);
  std::vector<double> s(g.num_metrics(), 0.0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (c[g.edge(e).u] == c[g.edge(e).v]) continue;
    const auto w = g.weights(e);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += w[k];
  }
  return s;
}

inline double cut_weight_objective(const MultiGraph& g, const Clustering& c,
                                   std::span<const double> alpha) {
  check_alpha_dimension(g, alpha.size());
  const auto s = cut_slice_sums(g, c);
  double total = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) total += alpha[k] * s[k];
  return total;
}

// (1 - lambda) * arctan objective / (n pi / 2) + lambda * modularity.
inline double blended_objective(const MultiGraph& g, const Clustering& c,
                                std::span<const double> alpha, const ObjectiveConfig& cfg) {
  cfg.validate();
  const double lambda = cfg.blend_lambda;
  double value = 0.0;
  if (lambda < 1.0) {
    const double n = static_cast<double>(std::max<std::size_t>(g.num_vertices(), 1));
    value += (1.0 - lambda) * arctan_objective(g, c, alpha, cfg) / (n * std::numbers::pi / 2.0);
  }
  if (lambda > 0.0) value += lambda * modularity(g, alpha, c);
  return value;
}

// Value of the configured variant, oriented so that larger is better
// (the cut weight is negated).
inline double maximization_objective(const MultiGraph& g, const Clustering& c,
                                     std::span<const double> alpha, const ObjectiveConfig& cfg) {
  switch (cfg.variant) {
    case ObjectiveVariant::kArctanHolding:
      return arctan_objective(g, c, alpha, cfg);
    case ObjectiveVariant::kCountPositive: {
      const auto h = holding_powers(g, c, alpha, cfg.threads);
      return static_cast<double>(std::count_if(h.begin(), h.end(), [](double x) { return x > 0; }));
    }
    case ObjectiveVariant::kCutWeight:
      return -cut_weight_objective(g, c, alpha);
    case ObjectiveVariant::kModularity:
      return modularity(g, alpha, c);
    case ObjectiveVariant::kBlend:
      return blended_objective(g, c, alpha, cfg);
  }
  throw UsageError("unknown objective variant");
}

}  // namespace edgeblend

#endif  // EDGEBLEND_OBJECTIVE_HPP_
