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

#ifndef EDGEBLEND_CLUSTERER_HPP_
#define EDGEBLEND_CLUSTERER_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "edgeblend/error.hpp"
#include "edgeblend/graph.hpp"
#include "edgeblend/metrics.hpp"

namespace edgeblend {

enum class ClusterMethod { kGreedyModularity, kLabelPropagation };

struct ClustererConfig {
  ClusterMethod method = ClusterMethod::kGreedyModularity;
  // Greedy only: stop merging at this many clusters, merging past the point
  // of no positive gain if needed.
  std::optional<std::size_t> target_clusters;
  std::uint64_t seed = 0;
  std::size_t max_passes = 20;
  // Recompute modularity around every refinement move and throw if a move
  // fails to increase it. Quadratic; for tests.
  bool verify_moves = false;

  void validate(std::size_t n) const {
    if (target_clusters && (*target_clusters < 1 || *target_clusters > n)) {
      throw UsageError(
          fmt::format("target cluster count {} outside [1, {}]", *target_clusters, n));
    }
  }
};

namespace detail {

// Minimum modularity increase for a refinement move.
inline constexpr double kMoveEpsilon = 1e-13;

// Pairwise merging of clusters by largest modularity gain, starting from an
// initial partition (labels 0..k-1).
class GreedyAgglomeration {
 public:
  GreedyAgglomeration(const WeightedGraph& g, std::vector<Label> initial)
      : g_(g), m_(g.total_weight()), initial_(std::move(initial)) {
    const std::size_t k =
        initial_.empty() ? 0 : *std::max_element(initial_.begin(), initial_.end()) + 1;
    degree_.assign(k, 0.0);
    links_.resize(k);
    version_.assign(k, 0);
    alive_.assign(k, true);
    parent_.resize(k);
    std::iota(parent_.begin(), parent_.end(), Label{0});
    for (VertexId v = 0; v < g.num_vertices(); ++v) degree_[initial_[v]] += g.weighted_degree(v);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const Label a = initial_[g.edges()[e].u], b = initial_[g.edges()[e].v];
      if (a == b) continue;
      links_[a][b] += g.weight(e);
      links_[b][a] += g.weight(e);
    }
    for (Label a = 0; a < links_.size(); ++a) {
      for (const auto& [b, w] : links_[a]) {
        if (a < b) push(a, b);
      }
    }
    count_ = k;
  }

  std::vector<Label> run(std::optional<std::size_t> target) {
    const std::size_t floor = target.value_or(1);
    while (count_ > floor) {
      auto best = pop_valid();
      if (!best) {
        if (!target) break;
        merge_smallest_pair();
        continue;
      }
      const auto [gain, a, b] = *best;
      if (!(gain > 0.0) && !target) break;
      merge(a, b);
    }
    std::vector<Label> labels(g_.num_vertices());
    for (VertexId v = 0; v < labels.size(); ++v) labels[v] = find(initial_[v]);
    return labels;
  }

 private:
  struct Entry {
    double gain;
    Label a, b;
    std::uint32_t va, vb;
  };
  // Largest gain first; equal gains resolved towards the lowest (a, b).
  struct Worse {
    bool operator()(const Entry& x, const Entry& y) const {
      if (x.gain != y.gain) return x.gain < y.gain;
      return std::tie(x.a, x.b) > std::tie(y.a, y.b);
    }
  };

  double gain(Label a, Label b, double w_ab) const {
    return w_ab / m_ - degree_[a] * degree_[b] / (2.0 * m_ * m_);
  }

  void push(Label a, Label b) {
    if (a > b) std::swap(a, b);
    heap_.push({gain(a, b, links_[a].at(b)), a, b, version_[a], version_[b]});
  }

  std::optional<std::tuple<double, Label, Label>> pop_valid() {
    while (!heap_.empty()) {
      const Entry e = heap_.top();
      heap_.pop();
      if (alive_[e.a] && alive_[e.b] && version_[e.a] == e.va && version_[e.b] == e.vb) {
        return std::tuple{e.gain, e.a, e.b};
      }
    }
    return std::nullopt;
  }

  void merge_smallest_pair() {
    std::vector<Label> live;
    for (Label c = 0; c < alive_.size(); ++c) {
      if (alive_[c]) live.push_back(c);
    }
    std::partial_sort(live.begin(), live.begin() + 2, live.end(), [&](Label x, Label y) {
      return std::tie(degree_[x], x) < std::tie(degree_[y], y);
    });
    merge(std::min(live[0], live[1]), std::max(live[0], live[1]));
  }

  void merge(Label a, Label b) {
    // Keep the cluster with more neighbors so the smaller map is folded in.
    Label keep = a, gone = b;
    if (links_[b].size() > links_[a].size()) std::swap(keep, gone);
    for (const auto& [c, w] : links_[gone]) {
      if (c == keep) continue;
      links_[keep][c] += w;
      links_[c].erase(gone);
      links_[c][keep] += w;
    }
    links_[keep].erase(gone);
    links_[gone].clear();
    degree_[keep] += degree_[gone];
    alive_[gone] = false;
    parent_[gone] = keep;
    ++version_[keep];
    --count_;
    for (const auto& [c, w] : links_[keep]) push(keep, c);
  }

  Label find(Label v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  const WeightedGraph& g_;
  double m_;
  std::vector<Label> initial_;
  std::vector<double> degree_;
  std::vector<std::unordered_map<Label, double>> links_;
  std::vector<std::uint32_t> version_;
  std::vector<bool> alive_;
  std::vector<Label> parent_;
  std::size_t count_ = 0;
  std::priority_queue<Entry, std::vector<Entry>, Worse> heap_;
};

// Multilevel local moving: vertices move to the neighboring cluster with the
// largest modularity gain, clusters are contracted into super-vertices, and
// the process repeats on the contracted graph until no vertex moves. Returns
// compacted labels.
class LocalMoving {
 public:
  explicit LocalMoving(const WeightedGraph& g) : two_m_(2.0 * g.total_weight()) {
    const std::size_t n = g.num_vertices();
    adj_.resize(n);
    degree_.assign(n, 0.0);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      const auto [u, v] = g.edges()[e];
      adj_[u].emplace_back(v, g.weight(e));
      adj_[v].emplace_back(u, g.weight(e));
    }
    for (VertexId v = 0; v < n; ++v) degree_[v] = g.weighted_degree(v);
  }

  std::vector<Label> run(std::uint64_t seed, std::size_t max_passes) {
    std::vector<Label> top(adj_.size());
    std::iota(top.begin(), top.end(), Label{0});
    for (std::uint64_t level = 0;; ++level) {
      std::vector<Label> labels(adj_.size());
      std::iota(labels.begin(), labels.end(), Label{0});
      if (!move_vertices(labels, seed + level, max_passes)) break;
      const auto compact = Clustering::from_raw(labels);
      for (auto& t : top) t = compact[t];
      contract(compact);
    }
    return top;
  }

 private:
  bool move_vertices(std::vector<Label>& labels, std::uint64_t seed, std::size_t max_passes) {
    const std::size_t n = adj_.size();
    std::vector<double> total(degree_);
    std::vector<double> link(n, 0.0);
    std::vector<bool> seen(n, false);
    std::vector<Label> touched;
    std::vector<VertexId> order(n);
    std::iota(order.begin(), order.end(), VertexId{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    bool any = false;
    for (std::size_t pass = 0; pass < max_passes; ++pass) {
      bool moved = false;
      for (VertexId v : order) {
        const Label own = labels[v];
        const double dv = degree_[v];
        for (const auto& [u, w] : adj_[v]) {
          const Label k = labels[u];
          if (!seen[k]) {
            seen[k] = true;
            touched.push_back(k);
          }
          link[k] += w;
        }
        total[own] -= dv;
        Label best = own;
        double best_gain = link[own] - dv * total[own] / two_m_;
        for (Label k : touched) {
          const double gain = link[k] - dv * total[k] / two_m_;
          if (gain > best_gain + kMoveEpsilon * two_m_) {
            best_gain = gain;
            best = k;
          }
        }
        total[best] += dv;
        for (Label k : touched) {
          link[k] = 0.0;
          seen[k] = false;
        }
        touched.clear();
        if (best != own) {
          labels[v] = best;
          moved = any = true;
        }
      }
      if (!moved) break;
    }
    return any;
  }

  void contract(const Clustering& c) {
    const std::size_t k = c.num_clusters();
    std::vector<std::unordered_map<Label, double>> acc(k);
    std::vector<double> degree(k, 0.0);
    for (VertexId v = 0; v < adj_.size(); ++v) {
      degree[c[v]] += degree_[v];
      for (const auto& [u, w] : adj_[v]) {
        if (c[u] != c[v]) acc[c[v]][c[u]] += w;
      }
    }
    std::vector<std::vector<std::pair<Label, double>>> adj(k);
    for (Label a = 0; a < k; ++a) {
      adj[a].assign(acc[a].begin(), acc[a].end());
      std::sort(adj[a].begin(), adj[a].end());
    }
    adj_ = std::move(adj);
    degree_ = std::move(degree);
  }

  double two_m_;
  std::vector<std::vector<std::pair<Label, double>>> adj_;  // no self entries
  std::vector<double> degree_;  // includes weight internal to a super-vertex
};

inline std::vector<VertexId> shuffled_vertices(std::size_t n, std::uint64_t seed) {
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// Moves single vertices to the neighboring cluster with the largest
// modularity gain until a pass makes no move. With keep_count set, a move may
// not empty its source cluster. Emptied labels are compacted by the caller.
inline void refine_moves(const WeightedGraph& g, std::vector<Label>& labels,
                         const ClustererConfig& cfg, bool keep_count) {
  const std::size_t n = g.num_vertices();
  const double m = g.total_weight();
  std::vector<double> cluster_degree(n, 0.0);
  std::vector<std::size_t> cluster_size(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    cluster_degree[labels[v]] += g.weighted_degree(v);
    ++cluster_size[labels[v]];
  }

  std::vector<double> link(n, 0.0);
  std::vector<Label> touched;
  const auto order = shuffled_vertices(n, cfg.seed);
  for (std::size_t pass = 0; pass < cfg.max_passes; ++pass) {
    bool moved = false;
    for (VertexId v : order) {
      const Label own = labels[v];
      if (keep_count && cluster_size[own] == 1) continue;
      const double dv = g.weighted_degree(v);
      for (const auto& inc : g.neighbors(v)) {
        const Label k = labels[inc.neighbor];
        if (link[k] == 0.0) touched.push_back(k);
        link[k] += g.weight(inc.edge);
      }
      const double own_rest = cluster_degree[own] - dv;
      Label best = own;
      double best_gain = kMoveEpsilon;
      for (Label k : touched) {
        if (k == own) continue;
        const double gain =
            (link[k] - link[own]) / m - dv * (cluster_degree[k] - own_rest) / (2.0 * m * m);
        if (gain > best_gain || (gain == best_gain && best != own && k < best)) {
          best_gain = gain;
          best = k;
        }
      }
      for (Label k : touched) link[k] = 0.0;
      touched.clear();
      if (best == own) continue;

      const double before = cfg.verify_moves ? modularity(g, Clustering::from_raw(labels)) : 0.0;
      labels[v] = best;
      cluster_degree[own] -= dv;
      cluster_degree[best] += dv;
      --cluster_size[own];
      ++cluster_size[best];
      moved = true;
      if (cfg.verify_moves) {
        const double after = modularity(g, Clustering::from_raw(labels));
        if (!(after > before)) {
          throw NumericalError(fmt::format(
              "refinement move of vertex {} changed modularity {} -> {}", v, before, after));
        }
      }
    }
    if (!moved) break;
  }
}

inline std::vector<Label> label_propagation(const WeightedGraph& g, const ClustererConfig& cfg) {
  const std::size_t n = g.num_vertices();
  std::vector<Label> labels(n);
  std::iota(labels.begin(), labels.end(), Label{0});
  std::vector<double> score(n, 0.0);
  std::vector<Label> touched;
  const auto order = shuffled_vertices(n, cfg.seed);
  for (std::size_t pass = 0; pass < cfg.max_passes; ++pass) {
    bool changed = false;
    for (VertexId v : order) {
      for (const auto& inc : g.neighbors(v)) {
        const Label k = labels[inc.neighbor];
        if (score[k] == 0.0) touched.push_back(k);
        score[k] += g.weight(inc.edge);
      }
      // Ties keep the current label if it is among the best, else take the
      // lowest label.
      double top = 0.0;
      for (Label k : touched) top = std::max(top, score[k]);
      Label best = labels[v];
      if (top > 0.0 && score[best] < top) {
        best = static_cast<Label>(n);
        for (Label k : touched) {
          if (score[k] == top) best = std::min(best, k);
        }
      }
      for (Label k : touched) score[k] = 0.0;
      touched.clear();
      if (best != labels[v]) {
        labels[v] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return labels;
}

}  // namespace detail

// Forward problem: partition a single-weight graph.
inline Clustering cluster(const WeightedGraph& g, const ClustererConfig& cfg = {}) {
  if (g.num_vertices() == 0) throw DataError("cannot cluster an empty graph");
  if (!(g.total_weight() > 0.0)) throw DataError("cannot cluster a graph with zero total weight");
  cfg.validate(g.num_vertices());
  std::vector<Label> labels;
  if (cfg.method == ClusterMethod::kLabelPropagation) {
    labels = detail::label_propagation(g, cfg);
  } else {
    labels = detail::LocalMoving(g).run(cfg.seed, cfg.max_passes);
    const std::size_t found = Clustering::from_raw(labels).num_clusters();
    if (cfg.target_clusters && *cfg.target_clusters > found) {
      std::iota(labels.begin(), labels.end(), Label{0});
    }
    labels = detail::GreedyAgglomeration(g, std::move(labels)).run(cfg.target_clusters);
    detail::refine_moves(g, labels, cfg, cfg.target_clusters.has_value());
  }
  return Clustering::from_raw(labels);
}

inline Clustering cluster_with_alpha(const MultiGraph& g, std::span<const double> alpha,
                                     const ClustererConfig& cfg = {}) {
  return cluster(collapse(g, alpha), cfg);
}

}  // namespace edgeblend

#endif  // EDGEBLEND_CLUSTERER_HPP_
