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

#ifndef EDGEBLEND_SYNTHGEN_HPP_
#define EDGEBLEND_SYNTHGEN_HPP_

// Planted-partition benchmarks with topological and weight mixing, and the
// additive/multiplicative edge-weight noise used to derive K noisy metric
// copies from one clean weighting.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <tuple>
#include <unordered_set>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

#include "edgeblend/error.hpp"
#include "edgeblend/graph.hpp"

namespace edgeblend {

// w <- nu * (w + sigma), sigma ~ U(-f w_a, f w_a), nu ~ U(lo, hi), negatives
// clamped to 0. w_a is the mean weight of the clean graph.
struct NoiseParams {
  double additive_factor = 2.0;
  double mult_lo = 0.0;
  double mult_hi = 1.0;

  static NoiseParams none() { return {0.0, 1.0, 1.0}; }

  void validate() const {
    if (!(additive_factor >= 0.0)) throw UsageError("additive noise factor must be >= 0");
    if (!(mult_lo >= 0.0 && mult_lo <= mult_hi)) {
      throw UsageError("multiplicative noise range must satisfy 0 <= lo <= hi");
    }
  }
};

struct BenchSpec {
  std::size_t n = 500;
  double avg_degree = 30.0;
  double mu_t = 0.7;
  double mu_w = 0.75;
  std::size_t num_metrics = 10;
  NoiseParams noise;
  std::size_t min_cluster_size = 0;  // 0: n / 30
  std::size_t max_cluster_size = 0;  // 0: n / 10
  std::uint64_t seed = 1;

  std::size_t resolved_min() const {
    return min_cluster_size ? min_cluster_size : std::max<std::size_t>(1, n / 30);
  }
  std::size_t resolved_max() const {
    return max_cluster_size ? max_cluster_size : std::max<std::size_t>(resolved_min(), n / 10);
  }

  void validate() const {
    if (n < 2) throw UsageError("benchmark needs at least 2 vertices");
    if (!(mu_t >= 0.0 && mu_t <= 1.0)) throw UsageError("mu_t must lie in [0,1]");
    if (!(mu_w >= 0.0 && mu_w <= 1.0)) throw UsageError("mu_w must lie in [0,1]");
    if (!(avg_degree > 0.0 && avg_degree < static_cast<double>(n))) {
      throw DataError(fmt::format("average degree {} infeasible for {} vertices", avg_degree, n));
    }
    if (num_metrics < 1) throw UsageError("need at least one metric copy");
    if (resolved_min() > resolved_max() || resolved_max() > n) {
      throw DataError(fmt::format("cluster size bounds [{}, {}] infeasible for {} vertices",
                                  resolved_min(), resolved_max(), n));
    }
    noise.validate();
  }
};

inline nlohmann::json to_json(const BenchSpec& s) {
  return {{"n", s.n},
          {"avg_degree", s.avg_degree},
          {"mu_t", s.mu_t},
          {"mu_w", s.mu_w},
          {"num_metrics", s.num_metrics},
          {"noise",
           {{"additive_factor", s.noise.additive_factor},
            {"mult_lo", s.noise.mult_lo},
            {"mult_hi", s.noise.mult_hi}}},
          {"min_cluster_size", s.resolved_min()},
          {"max_cluster_size", s.resolved_max()},
          {"seed", s.seed}};
}

struct Benchmark {
  MultiGraph graph;     // K perturbed copies
  Clustering planted;
  MultiGraph pristine;  // single clean metric
};

namespace detail {

template <typename Rng>
double draw_uniform(double lo, double hi, Rng& rng) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

template <typename Rng>
std::size_t draw_count(double expected, Rng& rng) {
  const double base = std::floor(expected);
  const double frac = expected - base;
  return static_cast<std::size_t>(base) +
         (frac > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < frac ? 1 : 0);
}

// Uniform sizes within [lo, hi] summing to n; a remainder that cannot form
// its own cluster is folded into the last one.
template <typename Rng>
std::vector<std::size_t> draw_cluster_sizes(std::size_t n, std::size_t lo, std::size_t hi,
                                            Rng& rng) {
  std::vector<std::size_t> sizes;
  std::size_t remaining = n;
  std::uniform_int_distribution<std::size_t> pick(lo, hi);
  while (remaining > 0) {
    if (remaining <= hi) {
      if (remaining >= lo || sizes.empty()) {
        sizes.push_back(remaining);
      } else {
        sizes.back() += remaining;
      }
      break;
    }
    std::size_t s = pick(rng);
    if (remaining - s < lo && remaining - lo >= lo) s = remaining - lo;
    sizes.push_back(s);
    remaining -= s;
  }
  return sizes;
}

// Random stub matching: shuffle, pair neighbors, return rejected stubs to the
// pool and retry. Stubs still unmatched after the last round are dropped.
template <typename Rng, typename Accept>
void match_stubs(std::vector<VertexId> stubs, Rng& rng, Accept&& accept) {
  constexpr int kRounds = 50;
  for (int round = 0; round < kRounds && stubs.size() >= 2; ++round) {
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<VertexId> rejected;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      if (!accept(stubs[i], stubs[i + 1])) {
        rejected.push_back(stubs[i]);
        rejected.push_back(stubs[i + 1]);
      }
    }
    if (stubs.size() % 2 == 1) rejected.push_back(stubs.back());
    if (rejected.size() == stubs.size()) break;
    stubs = std::move(rejected);
  }
}

}  // namespace detail

// Applies the noise model K times to a single-metric graph. Draw order:
// for each edge, for each copy, sigma then nu.
inline MultiGraph perturb(const MultiGraph& g, std::size_t k, const NoiseParams& noise,
                          std::uint64_t seed) {
  if (g.num_metrics() != 1) throw DataError("perturb expects a single-metric graph");
  if (k < 1) throw UsageError("perturb needs at least one copy");
  noise.validate();
  double mean = 0.0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) mean += g.weights(e)[0];
  if (g.num_edges() > 0) mean /= static_cast<double>(g.num_edges());
  const double spread = noise.additive_factor * mean;

  std::vector<std::string> names;
  for (std::size_t j = 1; j <= k; ++j) names.push_back(fmt::format("m{}", j));
  MultiGraphBuilder b(std::move(names), g.num_vertices());
  std::mt19937_64 rng(seed);
  std::vector<double> w(k);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const double base = g.weights(e)[0];
    for (std::size_t j = 0; j < k; ++j) {
      const double sigma = detail::draw_uniform(-spread, spread, rng);
      const double nu = detail::draw_uniform(noise.mult_lo, noise.mult_hi, rng);
      w[j] = std::max(0.0, nu * (base + sigma));
    }
    b.add_edge(g.edge(e).u, g.edge(e).v, w);
  }
  return std::move(b).build();
}

inline Benchmark generate(const BenchSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const std::size_t n = spec.n;

  const auto sizes = detail::draw_cluster_sizes(n, spec.resolved_min(), spec.resolved_max(), rng);
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), VertexId{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Label> label(n);
  std::vector<std::vector<VertexId>> members(sizes.size());
  for (std::size_t c = 0, pos = 0; c < sizes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i, ++pos) {
      label[perm[pos]] = static_cast<Label>(c);
      members[c].push_back(perm[pos]);
    }
  }

  // Edges as (u, v, internal?) before weights are known.
  std::vector<std::tuple<VertexId, VertexId, bool>> edges;
  std::unordered_set<std::uint64_t> present;
  auto try_add = [&](VertexId u, VertexId v, bool internal) {
    if (u == v || !present.insert(detail::pair_key(u, v)).second) return false;
    edges.emplace_back(u, v, internal);
    return true;
  };

  const double k_in = (1.0 - spec.mu_t) * spec.avg_degree;
  const double k_out = spec.mu_t * spec.avg_degree;
  std::vector<VertexId> out_stubs;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    std::vector<VertexId> in_stubs;
    const double in_cap = static_cast<double>(sizes[c] - 1);
    const double out_cap = static_cast<double>(n - sizes[c]);
    for (VertexId v : members[c]) {
      in_stubs.insert(in_stubs.end(), detail::draw_count(std::min(k_in, in_cap), rng), v);
      out_stubs.insert(out_stubs.end(), detail::draw_count(std::min(k_out, out_cap), rng), v);
    }
    detail::match_stubs(std::move(in_stubs), rng,
                        [&](VertexId u, VertexId v) { return try_add(u, v, true); });
  }
  detail::match_stubs(std::move(out_stubs), rng, [&](VertexId u, VertexId v) {
    return label[u] != label[v] && try_add(u, v, false);
  });

  // Intra weight 1; inter weight chosen so a fraction mu_w of the total
  // weighted degree is external.
  std::size_t e_in = 0, e_out = 0;
  for (const auto& [u, v, internal] : edges) (internal ? e_in : e_out)++;
  double w_out = 1.0;
  if (e_in > 0 && e_out > 0) {
    if (spec.mu_w >= 1.0) throw DataError("mu_w = 1 is infeasible with intra-cluster edges");
    w_out = spec.mu_w * static_cast<double>(e_in) /
            ((1.0 - spec.mu_w) * static_cast<double>(e_out));
  }

  std::sort(edges.begin(), edges.end());
  MultiGraphBuilder b({"pristine"}, n);
  for (const auto& [u, v, internal] : edges) {
    const double w = internal ? 1.0 : w_out;
    b.add_edge(u, v, std::span<const double>(&w, 1));
  }
  Benchmark bench;
  bench.pristine = std::move(b).build();
  bench.planted = Clustering::from_raw(label);
  bench.graph = perturb(bench.pristine, spec.num_metrics, spec.noise,
                        spec.seed ^ 0xd1b54a32d192ed03ULL);
  return bench;
}

}  // namespace edgeblend

#endif  // EDGEBLEND_SYNTHGEN_HPP_
