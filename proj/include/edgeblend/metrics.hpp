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

#ifndef EDGEBLEND_METRICS_HPP_
#define EDGEBLEND_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <unordered_map>
#include <vector>

#include <fmt/format.h>

#include "edgeblend/error.hpp"
#include "edgeblend/graph.hpp"

namespace edgeblend {

enum class LogBase { kNats, kBits };

inline double in_base(double nats, LogBase base) {
  return base == LogBase::kBits ? nats / std::numbers::ln2 : nats;
}

// Sparse co-membership counts |C1^k intersect C2^l|.
struct ContingencyTable {
  struct Cell {
    Label row;
    Label col;
    std::size_t count;
  };

  std::size_t n = 0;
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;
  std::vector<Cell> cells;  // nonzero cells only

  static ContingencyTable build(const Clustering& a, const Clustering& b) {
    if (a.size() != b.size()) {
      throw DataError(
          fmt::format("clusterings cover {} and {} vertices", a.size(), b.size()));
    }
    ContingencyTable t;
    t.n = a.size();
    t.row_sums = a.cluster_sizes();
    t.col_sums = b.cluster_sizes();
    const std::size_t rows = a.num_clusters(), cols = b.num_clusters();
    if (rows * cols <= std::max<std::size_t>(4096, 4 * t.n)) {
      std::vector<std::size_t> dense(rows * cols, 0);
      for (VertexId v = 0; v < t.n; ++v) ++dense[a[v] * cols + b[v]];
      for (std::size_t i = 0; i < dense.size(); ++i) {
        if (dense[i] > 0) {
          t.cells.push_back({static_cast<Label>(i / cols), static_cast<Label>(i % cols), dense[i]});
        }
      }
    } else {
      std::unordered_map<std::uint64_t, std::size_t> sparse;
      sparse.reserve(t.n);
      for (VertexId v = 0; v < t.n; ++v) {
        ++sparse[(static_cast<std::uint64_t>(a[v]) << 32) | b[v]];
      }
      t.cells.reserve(sparse.size());
      for (const auto& [key, count] : sparse) {
        t.cells.push_back({static_cast<Label>(key >> 32), static_cast<Label>(key & 0xffffffffu),
                           count});
      }
    }
    return t;
  }
};

namespace detail {

// Summation in sorted order makes the result independent of how the terms
// were enumerated.
inline double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

}  // namespace detail

inline double entropy(const Clustering& c, LogBase base = LogBase::kNats) {
  if (c.size() == 0) return 0.0;
  const double n = static_cast<double>(c.size());
  std::vector<double> terms;
  for (std::size_t s : c.cluster_sizes()) {
    const double p = static_cast<double>(s) / n;
    terms.push_back(-p * std::log(p));
  }
  return in_base(detail::sorted_sum(terms), base);
}

inline double mutual_information(const Clustering& a, const Clustering& b,
                                 LogBase base = LogBase::kNats) {
  const auto t = ContingencyTable::build(a, b);
  if (t.n == 0) return 0.0;
  const double n = static_cast<double>(t.n);
  std::vector<double> terms;
  terms.reserve(t.cells.size());
  for (const auto& cell : t.cells) {
    const double nkl = static_cast<double>(cell.count);
    const double ratio = n * nkl / (static_cast<double>(t.row_sums[cell.row]) *
                                     static_cast<double>(t.col_sums[cell.col]));
    terms.push_back(nkl / n * std::log(ratio));
  }
  return in_base(std::max(0.0, detail::sorted_sum(terms)), base);
}

// d_VI = H(a) + H(b) - 2 I(a, b), evaluated cell by cell as
// sum p_kl [ln(p_k / p_kl) + ln(p_l / p_kl)] so that every term is
// nonnegative and identical clusterings give exactly 0.
inline double variation_of_information(const Clustering& a, const Clustering& b,
                                       LogBase base = LogBase::kNats) {
  const auto t = ContingencyTable::build(a, b);
  if (t.n == 0) return 0.0;
  const double n = static_cast<double>(t.n);
  std::vector<double> terms;
  terms.reserve(t.cells.size());
  for (const auto& cell : t.cells) {
    const double nkl = static_cast<double>(cell.count);
    const double lr = std::log(static_cast<double>(t.row_sums[cell.row]) / nkl);
    const double lc = std::log(static_cast<double>(t.col_sums[cell.col]) / nkl);
    terms.push_back(nkl / n * (lr + lc));
  }
  return in_base(detail::sorted_sum(terms), base);
}

namespace detail {

// Q = sum_c [ W_c / m - (D_c / 2m)^2 ], with W_c the internal weight of
// cluster c (each edge once), D_c its total weighted degree and m the total
// edge weight. Equal to the ordered-pair form
// (1/2m) sum_ij [A_ij - d_i d_j / 2m] delta(c_i, c_j).
template <typename WeightOf>
double modularity_impl(std::size_t n, std::span<const Edge> edges, WeightOf weight_of,
                       const Clustering& c) {
  if (c.size() != n) {
    throw DataError(fmt::format("clustering covers {} vertices, graph has {}", c.size(), n));
  }
  std::vector<double> internal(c.num_clusters(), 0.0);
  std::vector<double> degree(c.num_clusters(), 0.0);
  double m = 0.0;
  for (EdgeId e = 0; e < edges.size(); ++e) {
    const double w = weight_of(e);
    const Label lu = c[edges[e].u], lv = c[edges[e].v];
    m += w;
    degree[lu] += w;
    degree[lv] += w;
    if (lu == lv) internal[lu] += w;
  }
  if (!(m > 0.0)) throw DataError("modularity is undefined for a graph with zero total weight");
  double q = 0.0;
  for (std::size_t k = 0; k < internal.size(); ++k) {
    const double share = degree[k] / (2.0 * m);
    q += internal[k] / m - share * share;
  }
  return q;
}

}  // namespace detail

inline double modularity(const WeightedGraph& g, const Clustering& c) {
  return detail::modularity_impl(g.num_vertices(), g.edges(),
                                 [&](EdgeId e) { return g.weight(e); }, c);
}

// Modularity of the collapsed graph without materializing it.
inline double modularity(const MultiGraph& g, std::span<const double> alpha,
                         const Clustering& c) {
  check_alpha_dimension(g, alpha.size());
  return detail::modularity_impl(
      g.num_vertices(), g.edges(),
      [&](EdgeId e) { return composite_weight_unchecked(g, e, alpha); }, c);
}

inline double normalized_modularity(double q, double q_ground_truth) {
  if (q_ground_truth == 0.0) {
    throw NumericalError("ground-truth modularity is 0; normalized modularity is undefined");
  }
  return q / q_ground_truth;
}

inline double normalized_modularity(const WeightedGraph& g, const Clustering& c,
                                    const Clustering& ground_truth) {
  return normalized_modularity(modularity(g, c), modularity(g, ground_truth));
}

}  // namespace edgeblend

#endif  // EDGEBLEND_METRICS_HPP_
