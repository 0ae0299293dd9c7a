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

// Random instances and brute-force reference implementations shared by the
// test suites. The references work on dense matrices and never call library
// code beyond reading graph fields.

#ifndef EDGEBLEND_TESTS_SUPPORT_HPP_
#define EDGEBLEND_TESTS_SUPPORT_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "edgeblend/graph.hpp"

namespace edgeblend::testing {

using Matrix = std::vector<std::vector<double>>;

inline std::vector<std::string> metric_names(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < k; ++j) names.push_back("m" + std::to_string(j + 1));
  return names;
}

// Erdos-Renyi style multigraph with weights in [0, 1) (some exactly 0).
inline MultiGraph random_multigraph(std::size_t n, std::size_t k, double p, std::mt19937_64& rng,
                                    bool ensure_edge = true) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  MultiGraphBuilder b(metric_names(k), n);
  std::vector<double> w(k);
  bool any = false;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (u01(rng) >= p) continue;
      for (auto& x : w) x = u01(rng) < 0.1 ? 0.0 : u01(rng);
      b.add_edge(u, v, w);
      any = true;
    }
  }
  if (ensure_edge && !any && n >= 2) {
    for (auto& x : w) x = 0.5;
    b.add_edge(0, 1, w);
  }
  return std::move(b).build();
}

inline std::vector<int> random_labels(std::size_t n, std::size_t max_clusters,
                                      std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, static_cast<int>(max_clusters) - 1);
  std::vector<int> raw(n);
  for (auto& x : raw) x = pick(rng);
  return raw;
}

inline Clustering random_clustering(std::size_t n, std::size_t max_clusters,
                                    std::mt19937_64& rng) {
  return Clustering::from_raw(random_labels(n, max_clusters, rng));
}

inline std::vector<double> random_alpha(std::size_t k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<double> a(k);
  double s = 0.0;
  for (auto& x : a) s += (x = u01(rng) + 1e-3);
  for (auto& x : a) x /= s;
  return a;
}

inline Matrix dense_composite(const MultiGraph& g, const std::vector<double>& alpha) {
  const std::size_t n = g.num_vertices();
  Matrix a(n, std::vector<double>(n, 0.0));
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    double w = 0.0;
    for (std::size_t j = 0; j < alpha.size(); ++j) w += alpha[j] * g.weights(e)[j];
    a[g.edge(e).u][g.edge(e).v] = w;
    a[g.edge(e).v][g.edge(e).u] = w;
  }
  return a;
}

// VI as the mean over vertices of -ln(|A∩B|/|A|) - ln(|A∩B|/|B|), where A and
// B are the clusters containing the vertex. Quadratic in n.
inline double brute_vi(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double na = 0, nb = 0, nab = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool ia = a[j] == a[i], ib = b[j] == b[i];
      na += ia;
      nb += ib;
      nab += ia && ib;
    }
    s -= std::log(nab / na) + std::log(nab / nb);
  }
  return s / static_cast<double>(n);
}

inline std::vector<int> labels_of(const Clustering& c) {
  return {c.labels().begin(), c.labels().end()};
}

// Ordered-pair modularity on the dense matrix.
inline double brute_modularity(const Matrix& a, const std::vector<int>& c) {
  const std::size_t n = a.size();
  std::vector<double> d(n, 0.0);
  double two_m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i] += a[i][j];
    two_m += d[i];
  }
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (c[i] == c[j]) q += a[i][j] - d[i] * d[j] / two_m;
    }
  }
  return q / two_m;
}

inline double brute_pull(const Matrix& a, const std::vector<int>& c, std::size_t v, int k) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (c[j] == k) s += a[v][j];
  }
  return s;
}

// Own pull minus the largest pull over every other label present.
inline double brute_holding(const Matrix& a, const std::vector<int>& c, std::size_t v) {
  int max_label = 0;
  for (int x : c) max_label = std::max(max_label, x);
  double foreign = 0.0;
  bool any = false;
  for (int k = 0; k <= max_label; ++k) {
    if (k == c[v]) continue;
    bool present = false;
    for (int x : c) present = present || x == k;
    if (!present) continue;
    const double p = brute_pull(a, c, v, k);
    foreign = any ? std::max(foreign, p) : p;
    any = true;
  }
  return brute_pull(a, c, v, c[v]) - foreign;
}

inline MultiGraph two_triangles() {
  MultiGraphBuilder b({"w"}, 6);
  const double one = 1.0;
  for (auto [u, v] : std::vector<std::pair<VertexId, VertexId>>{
           {0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}) {
    b.add_edge(u, v, std::span<const double>(&one, 1));
  }
  return std::move(b).build();
}

// Unit-weight cliques joined in a ring by single bridges.
inline MultiGraph clique_ring(std::size_t cliques = 4, std::size_t size = 4,
                              double bridge = 0.01) {
  MultiGraphBuilder b({"w"}, cliques * size);
  const double one = 1.0;
  const std::span<const double> w(&one, 1);
  const std::span<const double> wb(&bridge, 1);
  for (std::size_t c = 0; c < cliques; ++c) {
    const auto base = static_cast<VertexId>(c * size);
    for (VertexId i = 0; i < size; ++i) {
      for (VertexId j = i + 1; j < size; ++j) b.add_edge(base + i, base + j, w);
    }
    const auto next = static_cast<VertexId>(((c + 1) % cliques) * size);
    b.add_edge(base + static_cast<VertexId>(size - 1), next, wb);
  }
  return std::move(b).build();
}

}  // namespace edgeblend::testing

#endif  // EDGEBLEND_TESTS_SUPPORT_HPP_
