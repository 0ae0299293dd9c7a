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

#ifndef EDGEBLEND_IO_HPP_
#define EDGEBLEND_IO_HPP_

// Text formats.
//
// Edge list:
//   #metrics <name1> ... <nameK>      required, first non-blank line
//   #vertices <N>                      optional, before any edge
//   # anything else                    comment
//   <u> <v> <w1> ... <wK>              one undirected edge, 0-based ids
//
// Clustering:
//   <vertex> <cluster>                 one line per vertex, '#' comments

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "edgeblend/error.hpp"
#include "edgeblend/graph.hpp"

namespace edgeblend {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace detail

// Writes `content` to a sibling temp file and renames it over `path`, so a
// reader never observes a truncated file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += fmt::format(".tmp.{}", ::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError(fmt::format("cannot open {} for writing", tmp.string()));
    out << content;
    out.flush();
    if (!out) throw DataError(fmt::format("write to {} failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError(fmt::format("cannot rename onto {}", path.string()));
  }
}

inline MultiGraph read_graph(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  std::size_t lineno = 0;
  std::optional<MultiGraphBuilder> builder;
  std::vector<double> w;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok[0].starts_with('#')) {
      if (tok[0] == "#metrics") {
        if (builder) throw ParseError(source, lineno, "repeated #metrics header");
        if (tok.size() < 2) throw ParseError(source, lineno, "#metrics needs at least one name");
        builder.emplace(std::vector<std::string>(tok.begin() + 1, tok.end()));
      } else if (tok[0] == "#vertices") {
        std::size_t n = 0;
        if (!builder) throw ParseError(source, lineno, "#vertices before #metrics");
        if (builder->num_edges() > 0) throw ParseError(source, lineno, "#vertices after edges");
        if (tok.size() != 2 || !detail::parse_number(tok[1], n)) {
          throw ParseError(source, lineno, "malformed #vertices line");
        }
        builder->reserve_vertices(n);
      } else if (tok[0] == "#directed") {
        throw ParseError(source, lineno, "directed graphs are not supported");
      }
      continue;
    }
    if (!builder) throw ParseError(source, lineno, "missing #metrics header");
    const std::size_t k = builder->num_metrics();
    if (tok.size() != k + 2) {
      throw ParseError(source, lineno,
                       fmt::format("expected 2 ids and {} weights, got {} fields", k, tok.size()));
    }
    VertexId u = 0, v = 0;
    if (!detail::parse_number(tok[0], u) || !detail::parse_number(tok[1], v)) {
      throw ParseError(source, lineno, "malformed vertex id");
    }
    w.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      if (!detail::parse_number(tok[j + 2], w[j])) {
        throw ParseError(source, lineno, fmt::format("malformed weight '{}'", tok[j + 2]));
      }
    }
    try {
      builder->add_edge(u, v, w);
    } catch (const DataError& e) {
      throw ParseError(source, lineno, e.what());
    }
  }
  if (!builder) throw ParseError(source, lineno, "missing #metrics header");
  return std::move(*builder).build();
}

inline MultiGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return read_graph(in, path.string());
}

// Weights are written with 17 significant digits, which round-trips doubles.
inline std::string format_graph(const MultiGraph& g) {
  std::string out = "#metrics";
  for (const auto& name : g.metric_names()) out += " " + name;
  out += fmt::format("\n#vertices {}\n", g.num_vertices());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    out += fmt::format("{} {}", g.edge(e).u, g.edge(e).v);
    for (double x : g.weights(e)) out += fmt::format(" {:.17g}", x);
    out += '\n';
  }
  return out;
}

inline void save_graph(const MultiGraph& g, const std::filesystem::path& path) {
  write_file_atomic(path, format_graph(g));
}

// Labels are compacted to 0..k-1 in order of first appearance when scanning
// vertices 0..n-1.
inline Clustering read_clustering(std::istream& in, std::size_t n_vertices,
                                  const std::string& source = "<stream>") {
  std::vector<std::int64_t> raw(n_vertices);
  std::vector<bool> seen(n_vertices, false);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0].starts_with('#')) continue;
    std::uint64_t v = 0;
    std::int64_t label = 0;
    if (tok.size() != 2 || !detail::parse_number(tok[0], v) ||
        !detail::parse_number(tok[1], label)) {
      throw ParseError(source, lineno, "expected '<vertex> <cluster>'");
    }
    if (v >= n_vertices) {
      throw ParseError(source, lineno,
                       fmt::format("vertex {} out of range (graph has {})", v, n_vertices));
    }
    if (seen[v]) throw ParseError(source, lineno, fmt::format("vertex {} listed twice", v));
    seen[v] = true;
    raw[v] = label;
  }
  for (std::size_t v = 0; v < n_vertices; ++v) {
    if (!seen[v]) throw DataError(fmt::format("{}: vertex {} has no cluster", source, v));
  }
  return Clustering::from_raw(raw);
}

inline Clustering load_clustering(const std::filesystem::path& path, std::size_t n_vertices) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path.string()));
  return read_clustering(in, n_vertices, path.string());
}

inline std::string format_clustering(const Clustering& c) {
  std::string out;
  for (VertexId v = 0; v < c.size(); ++v) out += fmt::format("{} {}\n", v, c[v]);
  return out;
}

inline void save_clustering(const Clustering& c, const std::filesystem::path& path) {
  write_file_atomic(path, format_clustering(c));
}

}  // namespace edgeblend

#endif  // EDGEBLEND_IO_HPP_
