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

#ifndef EDGEBLEND_GRAPH_HPP_
#define EDGEBLEND_GRAPH_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "edgeblend/error.hpp"

namespace edgeblend {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using Label = std::uint32_t;

struct Edge {
  VertexId u;
  VertexId v;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

namespace detail {

inline std::uint64_t pair_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Compressed adjacency shared by the multi-metric and single-weight graphs.
// Every edge appears in exactly two rows.
struct Adjacency {
  std::vector<std::size_t> offsets;
  std::vector<Incidence> entries;

  static Adjacency build(std::size_t n, std::span<const Edge> edges) {
    Adjacency adj;
    adj.offsets.assign(n + 1, 0);
    for (const auto& e : edges) {
      ++adj.offsets[e.u + 1];
      ++adj.offsets[e.v + 1];
    }
    std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
    adj.entries.resize(2 * edges.size());
    std::vector<std::size_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
    for (EdgeId id = 0; id < edges.size(); ++id) {
      const auto& e = edges[id];
      adj.entries[cursor[e.u]++] = {e.v, id};
      adj.entries[cursor[e.v]++] = {e.u, id};
    }
    return adj;
  }

  std::span<const Incidence> row(VertexId v) const {
    return {entries.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }
};

}  // namespace detail

// Undirected simple graph whose edges carry a K-vector of nonnegative metric
// weights. Immutable once built; see MultiGraphBuilder.
class MultiGraph {
 public:
  MultiGraph() = default;

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_metrics() const { return metric_names_.size(); }
  const std::vector<std::string>& metric_names() const { return metric_names_; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const double> weights(EdgeId e) const {
    return {weights_.data() + static_cast<std::size_t>(e) * num_metrics(), num_metrics()};
  }
  // Row-major |E| x K weight matrix.
  std::span<const double> weight_matrix() const { return weights_; }

  std::span<const Incidence> neighbors(VertexId v) const { return adjacency_.row(v); }
  std::size_t degree(VertexId v) const { return neighbors(v).size(); }

  friend bool operator==(const MultiGraph& a, const MultiGraph& b) {
    return a.num_vertices_ == b.num_vertices_ && a.metric_names_ == b.metric_names_ &&
           a.edges_ == b.edges_ && a.weights_ == b.weights_;
  }

 private:
  friend class MultiGraphBuilder;

  std::size_t num_vertices_ = 0;
  std::vector<std::string> metric_names_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  detail::Adjacency adjacency_;
};

class MultiGraphBuilder {
 public:
  explicit MultiGraphBuilder(std::vector<std::string> metric_names, std::size_t num_vertices = 0)
      : num_vertices_(num_vertices), metric_names_(std::move(metric_names)) {
    if (metric_names_.empty()) throw DataError("graph needs at least one metric");
  }

  std::size_t num_metrics() const { return metric_names_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  // Grows the vertex set; never shrinks it.
  void reserve_vertices(std::size_t n) { num_vertices_ = std::max(num_vertices_, n); }

  bool has_edge(VertexId u, VertexId v) const { return seen_.contains(detail::pair_key(u, v)); }

  void add_edge(VertexId u, VertexId v, std::span<const double> w) {
    if (u == v) throw DataError(fmt::format("self-loop on vertex {}", u));
    if (w.size() != num_metrics()) {
      throw DataError(fmt::format("edge {}-{} has {} weights, expected {}", u, v, w.size(),
                                  num_metrics()));
    }
    for (double x : w) {
      if (!std::isfinite(x) || x < 0.0) {
        throw DataError(fmt::format("edge {}-{} has invalid weight {}", u, v, x));
      }
    }
    if (!seen_.insert(detail::pair_key(u, v)).second) {
      throw DataError(fmt::format("duplicate edge {}-{}", u, v));
    }
    if (edges_.size() >= std::numeric_limits<EdgeId>::max()) throw DataError("too many edges");
    edges_.push_back({u, v});
    weights_.insert(weights_.end(), w.begin(), w.end());
    reserve_vertices(static_cast<std::size_t>(std::max(u, v)) + 1);
  }

  MultiGraph build() && {
    MultiGraph g;
    g.num_vertices_ = num_vertices_;
    g.metric_names_ = std::move(metric_names_);
    g.edges_ = std::move(edges_);
    g.weights_ = std::move(weights_);
    g.adjacency_ = detail::Adjacency::build(g.num_vertices_, g.edges_);
    return g;
  }

 private:
  std::size_t num_vertices_;
  std::vector<std::string> metric_names_;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  std::unordered_set<std::uint64_t> seen_;
};

enum class Normalization { kSimplex, kMaxNorm };

// Aggregation coefficients. Always held on the L1 simplex; the max-norm form
// exists only for reporting.
class AlphaVector {
 public:
  AlphaVector() = default;

  // Rescales a nonnegative vector with positive sum onto the simplex.
  static AlphaVector simplex(std::vector<double> raw) {
    if (raw.empty()) throw DataError("alpha must have at least one component");
    double sum = 0.0;
    for (double x : raw) {
      if (!std::isfinite(x) || x < 0.0) {
        throw DataError(fmt::format("alpha component {} is not a nonnegative finite value", x));
      }
      sum += x;
    }
    if (sum <= 0.0) throw DataError("alpha components sum to zero");
    for (double& x : raw) x /= sum;
    AlphaVector a;
    a.coeffs_ = std::move(raw);
    return a;
  }

  static AlphaVector uniform(std::size_t k) { return simplex(std::vector<double>(k, 1.0)); }

  static AlphaVector basis(std::size_t k, std::size_t j) {
    std::vector<double> raw(k, 0.0);
    raw.at(j) = 1.0;
    return simplex(std::move(raw));
  }

  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t j) const { return coeffs_[j]; }
  std::span<const double> coeffs() const { return coeffs_; }

  std::vector<double> as(Normalization mode) const {
    if (mode == Normalization::kSimplex) return coeffs_;
    const double top = *std::max_element(coeffs_.begin(), coeffs_.end());
    std::vector<double> out(coeffs_);
    for (double& x : out) x /= top;
    return out;
  }

  std::vector<double> max_norm() const { return as(Normalization::kMaxNorm); }

  friend bool operator==(const AlphaVector&, const AlphaVector&) = default;

 private:
  std::vector<double> coeffs_;
};

// Hard partition of 0..n-1 with dense labels 0..num_clusters-1.
class Clustering {
 public:
  Clustering() = default;

  // Relabels to 0..k-1 in order of first appearance.
  template <typename T>
  static Clustering from_raw(std::span<const T> raw) {
    Clustering c;
    c.labels_.reserve(raw.size());
    std::unordered_map<T, Label> dense;
    for (const T& x : raw) {
      auto [it, inserted] = dense.try_emplace(x, static_cast<Label>(dense.size()));
      c.labels_.push_back(it->second);
    }
    c.num_clusters_ = dense.size();
    return c;
  }

  template <typename T>
  static Clustering from_raw(const std::vector<T>& raw) {
    return from_raw(std::span<const T>(raw));
  }

  static Clustering all_in_one(std::size_t n) {
    Clustering c;
    c.labels_.assign(n, 0);
    c.num_clusters_ = n > 0 ? 1 : 0;
    return c;
  }

  static Clustering singletons(std::size_t n) {
    Clustering c;
    c.labels_.resize(n);
    std::iota(c.labels_.begin(), c.labels_.end(), Label{0});
    c.num_clusters_ = n;
    return c;
  }

  std::size_t size() const { return labels_.size(); }
  std::size_t num_clusters() const { return num_clusters_; }
  Label operator[](VertexId v) const { return labels_[v]; }
  std::span<const Label> labels() const { return labels_; }

  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes(num_clusters_, 0);
    for (Label l : labels_) ++sizes[l];
    return sizes;
  }

  friend bool operator==(const Clustering&, const Clustering&) = default;

 private:
  std::vector<Label> labels_;
  std::size_t num_clusters_ = 0;
};

// Single-weight view of a graph: the input of the clusterer and of modularity.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  WeightedGraph(std::size_t n, std::vector<Edge> edges, std::vector<double> weights)
      : num_vertices_(n), edges_(std::move(edges)), weights_(std::move(weights)) {
    if (edges_.size() != weights_.size()) throw DataError("edge/weight count mismatch");
    for (const auto& e : edges_) {
      if (e.u >= n || e.v >= n) throw DataError("edge endpoint out of range");
      if (e.u == e.v) throw DataError(fmt::format("self-loop on vertex {}", e.u));
    }
    adjacency_ = detail::Adjacency::build(n, edges_);
    degrees_.assign(n, 0.0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      degrees_[edges_[i].u] += weights_[i];
      degrees_[edges_[i].v] += weights_[i];
      total_weight_ += weights_[i];
    }
  }

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const double> weights() const { return weights_; }
  double weight(EdgeId e) const { return weights_[e]; }
  std::span<const Incidence> neighbors(VertexId v) const { return adjacency_.row(v); }
  double weighted_degree(VertexId v) const { return degrees_[v]; }
  // Sum of edge weights, each edge counted once.
  double total_weight() const { return total_weight_; }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<double> weights_;
  detail::Adjacency adjacency_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
};

inline void check_alpha_dimension(const MultiGraph& g, std::size_t k) {
  if (k != g.num_metrics()) {
    throw DataError(fmt::format("alpha has {} components but the graph has {} metrics", k,
                                g.num_metrics()));
  }
}

// Unchecked inner kernel: sum_j alpha_j * w_e^j.
inline double composite_weight_unchecked(const MultiGraph& g, EdgeId e,
                                         std::span<const double> alpha) {
  const auto w = g.weights(e);
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += alpha[j] * w[j];
  return s;
}

// Accepts arbitrary (unnormalized) coefficient vectors; linear in alpha.
inline double composite_weight(const MultiGraph& g, EdgeId e, std::span<const double> alpha) {
  check_alpha_dimension(g, alpha.size());
  if (e >= g.num_edges()) throw DataError(fmt::format("edge index {} out of range", e));
  return composite_weight_unchecked(g, e, alpha);
}

inline double composite_weight(const MultiGraph& g, EdgeId e, const AlphaVector& alpha) {
  return composite_weight(g, e, alpha.coeffs());
}

inline std::vector<double> composite_weights(const MultiGraph& g, std::span<const double> alpha) {
  check_alpha_dimension(g, alpha.size());
  std::vector<double> out(g.num_edges());
  for (EdgeId e = 0; e < out.size(); ++e) out[e] = composite_weight_unchecked(g, e, alpha);
  return out;
}

inline WeightedGraph collapse(const MultiGraph& g, std::span<const double> alpha) {
  auto w = composite_weights(g, alpha);
  return WeightedGraph(g.num_vertices(), {g.edges().begin(), g.edges().end()}, std::move(w));
}

inline WeightedGraph collapse(const MultiGraph& g, const AlphaVector& alpha) {
  return collapse(g, alpha.coeffs());
}

// Mean composite weight over all edges; 0 for an edgeless graph.
inline double mean_composite_weight(const MultiGraph& g, std::span<const double> alpha) {
  if (g.num_edges() == 0) return 0.0;
  check_alpha_dimension(g, alpha.size());
  double s = 0.0;
  for (EdgeId e = 0; e < g.num_edges(); ++e) s += composite_weight_unchecked(g, e, alpha);
  return s / static_cast<double>(g.num_edges());
}

// Builds a K=1 multigraph with the given metric name from a single-weight view.
inline MultiGraph as_multigraph(const WeightedGraph& wg, std::string metric_name = "w") {
  MultiGraphBuilder b({std::move(metric_name)}, wg.num_vertices());
  for (EdgeId e = 0; e < wg.num_edges(); ++e) {
    const double w = wg.weight(e);
    b.add_edge(wg.edges()[e].u, wg.edges()[e].v, std::span<const double>(&w, 1));
  }
  return std::move(b).build();
}

}  // namespace edgeblend

#endif  // EDGEBLEND_GRAPH_HPP_
