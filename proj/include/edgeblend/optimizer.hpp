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

#ifndef EDGEBLEND_OPTIMIZER_HPP_
#define EDGEBLEND_OPTIMIZER_HPP_

// Derivative-free maximization over the probability simplex by generating-set
// (pattern) search. Each poll evaluates the projected moves x +/- step * e_i
// as one batch; the best improving trial is accepted, otherwise the step
// shrinks. The batch may be evaluated by several threads, but selection walks
// the trials in poll order, so results never depend on the thread count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "edgeblend/error.hpp"

namespace edgeblend {

// Euclidean projection onto {x >= 0, sum x = 1} (sort-and-threshold).
inline std::vector<double> project_to_simplex(std::span<const double> y) {
  const std::size_t k = y.size();
  if (k == 0) return {};
  std::vector<double> u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    cumulative += u[j];
    const double t = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  std::vector<double> x(k);
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    x[j] = std::max(y[j] - theta, 0.0);
    sum += x[j];
  }
  for (double& v : x) v /= sum;
  return x;
}

inline std::vector<double> simplex_barycenter(std::size_t k) {
  return std::vector<double>(k, 1.0 / static_cast<double>(k));
}

// Uniform sample from the simplex, i.e. Dirichlet(1, ..., 1).
template <typename Rng>
std::vector<double> sample_simplex(std::size_t k, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> x(k);
  double sum = 0.0;
  for (double& v : x) {
    v = expo(rng);
    sum += v;
  }
  for (double& v : x) v /= sum;
  return x;
}

using SimplexObjective = std::function<double(std::span<const double>)>;

struct OptProblem {
  std::size_t dimension = 0;
  SimplexObjective objective;  // maximized; must tolerate concurrent calls if threads > 1
  std::vector<double> initial;  // empty means the barycenter
  std::size_t budget = 2000;
  double tolerance = 1e-6;
  double initial_step = 0.25;
  double step_factor = 0.5;
  unsigned threads = 1;

  void validate() const {
    if (dimension == 0) throw UsageError("optimization dimension must be positive");
    if (!objective) throw UsageError("optimization problem has no objective");
    if (budget < 1) throw UsageError("evaluation budget must be at least 1");
    if (!(tolerance > 0.0)) throw UsageError("tolerance must be positive");
    if (!(initial_step > 0.0)) throw UsageError("initial step must be positive");
    if (!(step_factor > 0.0 && step_factor < 1.0)) {
      throw UsageError("step factor must lie in (0,1)");
    }
    if (!initial.empty()) {
      if (initial.size() != dimension) throw UsageError("initial point has wrong dimension");
      double sum = 0.0;
      for (double x : initial) {
        if (!(x >= 0.0)) throw UsageError("initial point is not on the simplex");
        sum += x;
      }
      if (std::abs(sum - 1.0) > 1e-10) throw UsageError("initial point is not on the simplex");
    }
  }
};

struct TraceEntry {
  std::size_t eval = 0;   // 1-based, global across starts
  std::size_t start = 0;  // multistart run that produced this evaluation
  std::vector<double> alpha;
  double value = 0.0;
};

struct OptResult {
  std::vector<double> best_alpha;
  double best_value = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
  std::vector<TraceEntry> trace;
  bool converged = false;
  double final_step = 0.0;
  double wall_seconds = 0.0;
};

namespace detail {

class Evaluator {
 public:
  Evaluator(const SimplexObjective& f, std::vector<TraceEntry>& trace, std::size_t start,
            std::size_t eval_offset)
      : f_(f), trace_(trace), start_(start), offset_(eval_offset) {}

  std::size_t used() const { return used_; }

  // Evaluates the points in order (in parallel when threads > 1) and records
  // them in the trace in that order.
  std::vector<double> batch(const std::vector<std::vector<double>>& points, unsigned threads) {
    std::vector<double> values(points.size());
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), points.size());
    if (workers <= 1) {
      for (std::size_t i = 0; i < points.size(); ++i) values[i] = f_(points[i]);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t i = w; i < points.size(); i += workers) values[i] = f_(points[i]);
        });
      }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      ++used_;
      if (!std::isfinite(values[i])) {
        throw NumericalError(fmt::format("objective returned {} at alpha = ({:.17g})", values[i],
                                         fmt::join(points[i], ", ")));
      }
      trace_.push_back({offset_ + used_, start_, points[i], values[i]});
    }
    return values;
  }

 private:
  const SimplexObjective& f_;
  std::vector<TraceEntry>& trace_;
  std::size_t start_;
  std::size_t offset_;
  std::size_t used_ = 0;
};

struct LocalRun {
  std::vector<double> x;
  double fx;
  std::size_t evaluations;
  bool converged;
  double step;
};

inline LocalRun local_search(const OptProblem& p, std::vector<double> x, std::size_t budget,
                             std::uint64_t seed, std::size_t start, std::size_t eval_offset,
                             std::vector<TraceEntry>& trace) {
  const std::size_t k = p.dimension;
  Evaluator eval(p.objective, trace, start, eval_offset);
  double fx = eval.batch({x}, 1).front();

  std::vector<std::pair<std::size_t, double>> poll;  // (coordinate, sign)
  for (std::size_t i = 0; i < k; ++i) {
    poll.emplace_back(i, +1.0);
    poll.emplace_back(i, -1.0);
  }
  std::mt19937_64 rng(seed);
  std::shuffle(poll.begin(), poll.end(), rng);

  double step = p.initial_step;
  bool converged = false;
  std::vector<std::vector<double>> trials;
  std::vector<double> y(k);
  while (true) {
    if (step < p.tolerance) {
      converged = true;
      break;
    }
    trials.clear();
    for (const auto& [i, sign] : poll) {
      std::copy(x.begin(), x.end(), y.begin());
      y[i] += sign * step;
      auto t = project_to_simplex(y);
      if (t != x) trials.push_back(std::move(t));
    }
    if (trials.empty()) {
      step *= p.step_factor;
      continue;
    }
    const std::size_t left = budget - eval.used();
    if (left == 0) break;
    if (trials.size() > left) trials.resize(left);
    const auto values = eval.batch(trials, p.threads);
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (values[i] > values[best]) best = i;
    }
    if (values[best] > fx) {
      x = std::move(trials[best]);
      fx = values[best];
    } else {
      step *= p.step_factor;
    }
  }
  return {std::move(x), fx, eval.used(), converged, step};
}

}  // namespace detail

// Single pattern search from p.initial (or the barycenter). The seed only
// shuffles the poll order.
inline OptResult pattern_search(const OptProblem& p, std::uint64_t seed) {
  p.validate();
  const auto t0 = std::chrono::steady_clock::now();
  OptResult r;
  auto x0 = p.initial.empty() ? simplex_barycenter(p.dimension) : project_to_simplex(p.initial);
  auto run = detail::local_search(p, std::move(x0), p.budget, seed, 0, 0, r.trace);
  r.best_alpha = std::move(run.x);
  r.best_value = run.fx;
  r.evaluations = run.evaluations;
  r.converged = run.converged;
  r.final_step = run.step;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Runs pattern search from the barycenter, then from each of `extra_starts`,
// then from n_starts - 1 uniform random simplex points. The budget is shared:
// each run receives an equal share of what is left (at least one evaluation,
// earlier starts first). Traces are concatenated
// with TraceEntry::start marking the run.
inline OptResult multistart(const OptProblem& p, std::size_t n_starts, std::uint64_t seed,
                            std::span<const std::vector<double>> extra_starts = {}) {
  p.validate();
  if (n_starts < 1) throw UsageError("multistart needs at least one start");
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::vector<double>> starts;
  starts.push_back(simplex_barycenter(p.dimension));
  for (const auto& s : extra_starts) {
    if (s.size() != p.dimension) throw UsageError("extra start has wrong dimension");
    starts.push_back(project_to_simplex(s));
  }
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 1; i < n_starts; ++i) starts.push_back(sample_simplex(p.dimension, rng));

  OptResult r;
  std::size_t used = 0;
  for (std::size_t s = 0; s < starts.size() && used < p.budget; ++s) {
    const std::size_t share = std::max<std::size_t>(1, (p.budget - used) / (starts.size() - s));
    const std::uint64_t run_seed = s == 0 ? seed : seed + 0x632be59bd9b4e019ULL * s;
    auto run = detail::local_search(p, starts[s], share, run_seed, s, used, r.trace);
    used += run.evaluations;
    if (r.best_alpha.empty() || run.fx > r.best_value) {
      r.best_alpha = std::move(run.x);
      r.best_value = run.fx;
      r.converged = run.converged;
      r.final_step = run.step;
    }
  }
  r.evaluations = used;
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string trace_csv(const OptResult& r, char sep = ',') {
  std::string out = "eval";
  const std::size_t k = r.best_alpha.size();
  for (std::size_t j = 1; j <= k; ++j) out += fmt::format("{}alpha_{}", sep, j);
  out += fmt::format("{}value\n", sep);
  for (const auto& t : r.trace) {
    out += fmt::format("{}", t.eval);
    for (double a : t.alpha) out += fmt::format("{}{:.17g}", sep, a);
    out += fmt::format("{}{:.17g}\n", sep, t.value);
  }
  return out;
}

}  // namespace edgeblend

#endif  // EDGEBLEND_OPTIMIZER_HPP_
