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

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data error,
// 3 numerical abort.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "edgeblend/clusterer.hpp"
#include "edgeblend/experiments.hpp"
#include "edgeblend/graph.hpp"
#include "edgeblend/io.hpp"
#include "edgeblend/metrics.hpp"
#include "edgeblend/objective.hpp"
#include "edgeblend/optimizer.hpp"
#include "edgeblend/synthgen.hpp"

namespace fs = std::filesystem;

namespace edgeblend::cli {
namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Options {
  std::string graph, clusters, pristine, out;
  std::string alpha;
  std::optional<std::size_t> basis;
  std::vector<double> betas;
  std::vector<double> lambdas;
  std::uint64_t seed = 1;
  std::size_t budget = 10000;
  double tol = 1e-4;
  std::size_t starts = 4;
  std::string method = "greedy_modularity";
  std::optional<std::size_t> k;
  unsigned threads = 0;
  std::string format = "csv";
  std::string variant = "arctan";
  bool trace = false;
  bool bits = false;
  // generate
  std::size_t n = 500;
  double avg_degree = 30.0, mu_t = 0.7, mu_w = 0.75;
  double noise_add = 2.0, noise_lo = 0.0, noise_hi = 1.0;
  std::size_t min_size = 0, max_size = 0;
  // correlate / scale
  std::size_t samples = 50;
  std::vector<std::size_t> sizes{500, 1000, 2000, 4000};
  std::size_t reps = 10;
  std::string mode = "edges";
  std::vector<std::string> positional;
};

char separator(const Options& o) { return o.format == "tsv" ? '\t' : ','; }

unsigned resolve_threads(const Options& o) {
  if (o.threads > 0) return o.threads;
  if (const char* env = std::getenv("EDGEBLEND_THREADS")) {
    unsigned t = 0;
    if (detail::parse_number(std::string_view(env), t) && t > 0) return t;
    throw UsageError(fmt::format("EDGEBLEND_THREADS='{}' is not a positive integer", env));
  }
  return 1;
}

std::vector<double> parse_alpha(const std::string& text) {
  std::vector<double> raw;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    const auto trimmed = detail::split_ws(item);
    if (trimmed.size() != 1 || !detail::parse_number(trimmed[0], x)) {
      throw UsageError(fmt::format("cannot parse alpha component '{}'", item));
    }
    raw.push_back(x);
  }
  return raw;
}

// Alpha from --alpha or --basis; uniform when neither is given.
AlphaVector resolve_alpha(const Options& o, std::size_t k) {
  if (o.basis) {
    if (*o.basis < 1 || *o.basis > k) {
      throw UsageError(fmt::format("--basis must lie in [1, {}]", k));
    }
    return AlphaVector::basis(k, *o.basis - 1);
  }
  if (o.alpha.empty()) return AlphaVector::uniform(k);
  auto raw = parse_alpha(o.alpha);
  if (raw.size() != k) {
    throw UsageError(fmt::format("--alpha has {} components, graph has {} metrics", raw.size(), k));
  }
  try {
    return AlphaVector::simplex(std::move(raw));
  } catch (const DataError& e) {
    throw UsageError(e.what());
  }
}

ClustererConfig clusterer_config(const Options& o) {
  ClustererConfig c;
  c.method = o.method == "label_prop" ? ClusterMethod::kLabelPropagation
                                      : ClusterMethod::kGreedyModularity;
  c.target_clusters = o.k;
  c.seed = o.seed;
  return c;
}

OptParams opt_params(const Options& o) {
  OptParams p;
  p.budget = o.budget;
  p.tolerance = o.tol;
  p.starts = o.starts;
  p.seed = o.seed;
  p.threads = resolve_threads(o);
  return p;
}

ObjectiveConfig objective_config(const Options& o) {
  auto cfg = default_holding_objective();
  if (!o.betas.empty()) cfg.beta = o.betas.front();
  if (!o.lambdas.empty()) cfg.blend_lambda = o.lambdas.front();
  static const std::map<std::string, ObjectiveVariant> variants{
      {"arctan", ObjectiveVariant::kArctanHolding},
      {"count", ObjectiveVariant::kCountPositive},
      {"cut", ObjectiveVariant::kCutWeight},
      {"modularity", ObjectiveVariant::kModularity},
      {"blend", ObjectiveVariant::kBlend}};
  cfg.variant = variants.at(o.variant);
  cfg.threads = resolve_threads(o);
  cfg.validate();
  return cfg;
}

void ensure_output_dir(const std::string& out) {
  if (out.empty()) return;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw UsageError(fmt::format("cannot use '{}' as an output directory", out));
  }
}

void ensure_output_file(const std::string& out) {
  if (out.empty()) throw UsageError("--out is required");
  const auto parent = fs::path(out).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw UsageError(fmt::format("directory of '{}' does not exist", out));
  }
}

void emit(const ExperimentReport& rep, const Options& o) {
  std::cout << rep.summary_text();
  if (!o.out.empty()) {
    for (const auto& p : rep.write(o.out, separator(o))) {
      std::cout << "wrote " << p.string() << "\n";
    }
  }
}

// ---------------------------------------------------------------------------

int cmd_generate(const Options& o) {
  ensure_output_dir(o.out);
  BenchSpec spec;
  spec.n = o.n;
  spec.avg_degree = o.avg_degree;
  spec.mu_t = o.mu_t;
  spec.mu_w = o.mu_w;
  spec.num_metrics = o.k.value_or(10);
  spec.noise = {o.noise_add, o.noise_lo, o.noise_hi};
  spec.min_cluster_size = o.min_size;
  spec.max_cluster_size = o.max_size;
  spec.seed = o.seed;
  const auto bench = generate(spec);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  save_graph(bench.graph, dir / "bench.edges");
  save_graph(bench.pristine, dir / "pristine.edges");
  save_clustering(bench.planted, dir / "planted.clu");
  write_file_atomic(dir / "bench.spec.json", to_json(spec).dump(2) + "\n");
  fmt::print("seed: {}\nvertices: {}\nedges: {}\nclusters: {}\nmetrics: {}\n", spec.seed,
             bench.graph.num_vertices(), bench.graph.num_edges(), bench.planted.num_clusters(),
             bench.graph.num_metrics());
  fmt::print("wrote {}\n", (dir / "bench.edges").string());
  return kOk;
}

int cmd_perturb(const Options& o) {
  ensure_output_file(o.out);
  const auto g = load_graph(o.graph);
  const auto out = perturb(g, o.k.value_or(10), {o.noise_add, o.noise_lo, o.noise_hi}, o.seed);
  save_graph(out, o.out);
  fmt::print("seed: {}\nmetrics: {}\nwrote {}\n", o.seed, out.num_metrics(), o.out);
  return kOk;
}

int cmd_collapse(const Options& o) {
  ensure_output_file(o.out);
  const auto g = load_graph(o.graph);
  const auto alpha = resolve_alpha(o, g.num_metrics());
  save_graph(as_multigraph(collapse(g, alpha), "composite"), o.out);
  fmt::print("alpha: {}\nwrote {}\n", fmt::join(alpha.coeffs(), ","), o.out);
  return kOk;
}

int cmd_cluster(const Options& o) {
  if (!o.out.empty()) ensure_output_file(o.out);
  const auto g = load_graph(o.graph);
  const auto alpha = resolve_alpha(o, g.num_metrics());
  const auto wg = collapse(g, alpha);
  const auto c = cluster(wg, clusterer_config(o));
  fmt::print("seed: {}\nclusters: {}\nmodularity: {:.17g}\n", o.seed, c.num_clusters(),
             modularity(wg, c));
  if (!o.out.empty()) {
    save_clustering(c, o.out);
    fmt::print("wrote {}\n", o.out);
  }
  return kOk;
}

int cmd_compare(const Options& o) {
  if (o.positional.size() != 3) {
    throw UsageError("compare expects: <a.clu> <b.clu> <graph.edges>");
  }
  const auto g = load_graph(o.positional[2]);
  const auto a = load_clustering(o.positional[0], g.num_vertices());
  const auto b = load_clustering(o.positional[1], g.num_vertices());
  const auto base = o.bits ? LogBase::kBits : LogBase::kNats;
  const auto alpha = resolve_alpha(o, g.num_metrics());
  const auto wg = collapse(g, alpha);
  const double qa = modularity(wg, a), qb = modularity(wg, b);
  fmt::print("VI {:.17g}\n", variation_of_information(a, b, base));
  fmt::print("MI {:.17g}\n", mutual_information(a, b, base));
  fmt::print("H_a {:.17g}\nH_b {:.17g}\n", entropy(a, base), entropy(b, base));
  fmt::print("Q_a {:.17g}\nQ_b {:.17g}\n", qa, qb);
  fmt::print("Q_a/Q_b {:.17g}\n", normalized_modularity(qa, qb));
  return kOk;
}

int cmd_holding(const Options& o) {
  const auto g = load_graph(o.graph);
  const auto c = load_clustering(o.clusters, g.num_vertices());
  const auto alpha = resolve_alpha(o, g.num_metrics());
  const auto cfg = objective_config(o);
  auto [count, report] = count_positive(g, c, alpha.coeffs(), cfg.threads);
  fmt::print("alpha: {}\n", fmt::join(alpha.coeffs(), ","));
  fmt::print("positive: {}\nfraction_positive: {:.17g}\n", count, report.fraction_positive);
  fmt::print("arctan_objective: {:.17g}\n", arctan_objective(g, c, alpha.coeffs(), cfg));
  fmt::print("cut_weight: {:.17g}\n", cut_weight_objective(g, c, alpha.coeffs()));
  if (!o.out.empty()) {
    ensure_output_dir(o.out);
    const auto path = fs::path(o.out) / (o.format == "tsv" ? "holding_histogram.tsv"
                                                           : "holding_histogram.csv");
    write_file_atomic(path, histogram_csv(report.histogram, separator(o)));
    fmt::print("wrote {}\n", path.string());
  }
  return kOk;
}

int cmd_recover(const Options& o) {
  ensure_output_dir(o.out);
  const auto g = load_graph(o.graph);
  const auto c = load_clustering(o.clusters, g.num_vertices());
  std::optional<MultiGraph> pristine;
  if (!o.pristine.empty()) pristine = load_graph(o.pristine);
  const auto r = recover_weights(g, c, objective_config(o), opt_params(o),
                                 pristine ? &*pristine : nullptr);
  emit(r.report, o);
  if (o.trace && !o.out.empty()) {
    const auto path = fs::path(o.out) / (o.format == "tsv" ? "recover_trace.tsv"
                                                           : "recover_trace.csv");
    write_file_atomic(path, trace_csv(r.opt, separator(o)));
    fmt::print("wrote {}\n", path.string());
  }
  return kOk;
}

int cmd_inverse(const Options& o) {
  ensure_output_dir(o.out);
  const auto g = load_graph(o.graph);
  const auto c = load_clustering(o.clusters, g.num_vertices());
  const auto r = inverse_recover(g, c, clusterer_config(o), opt_params(o));
  emit(r.report, o);
  return kOk;
}

int cmd_pareto(const Options& o) {
  ensure_output_dir(o.out);
  const auto g = load_graph(o.graph);
  const auto c = load_clustering(o.clusters, g.num_vertices());
  std::vector<double> lambdas = o.lambdas;
  if (lambdas.empty()) lambdas = {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0};
  auto cfg = default_holding_objective();
  if (!o.betas.empty()) cfg.beta = o.betas.front();
  const auto r = pareto_sweep(g, c, lambdas, cfg, opt_params(o));
  emit(r.report, o);
  return kOk;
}

int cmd_correlate(const Options& o) {
  ensure_output_dir(o.out);
  const auto g = load_graph(o.graph);
  const auto c = load_clustering(o.clusters, g.num_vertices());
  std::vector<double> betas = o.betas;
  if (betas.empty()) betas = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0, 1000.0};
  auto cc = clusterer_config(o);
  if (!cc.target_clusters) cc.target_clusters = c.num_clusters();
  const auto r = correlation_study(g, c, betas, o.samples, cc, o.seed, WeightScaling::kUnitMean,
                                   resolve_threads(o));
  emit(r.report, o);
  return kOk;
}

int cmd_scale(const Options& o) {
  ensure_output_dir(o.out);
  BenchSpec tmpl;
  tmpl.n = o.n;
  tmpl.avg_degree = o.avg_degree;
  tmpl.mu_t = o.mu_t;
  tmpl.mu_w = o.mu_w;
  tmpl.num_metrics = o.k.value_or(10);
  tmpl.seed = o.seed;
  const auto mode = o.mode == "metrics" ? ScalingMode::kMetrics : ScalingMode::kEdges;
  const auto r = scaling_study(o.sizes, tmpl, o.reps, mode, opt_params(o));
  emit(r.report, o);
  return kOk;
}

// ---------------------------------------------------------------------------

void add_graph(CLI::App* app, Options& o, bool required = true) {
  auto* opt = app->add_option("--graph", o.graph, "Edge-list file (#metrics header)")
                  ->check(CLI::ExistingFile);
  if (required) opt->required();
}

void add_clusters(CLI::App* app, Options& o) {
  app->add_option("--clusters", o.clusters, "Ground-truth clustering file ('vertex cluster')")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_alpha(CLI::App* app, Options& o) {
  auto* a = app->add_option("--alpha", o.alpha,
                            "Comma-separated aggregation coefficients (normalized to sum 1); "
                            "default uniform");
  auto* b = app->add_option("--basis", o.basis, "Use the j-th metric alone (1-based)");
  a->excludes(b);
  b->excludes(a);
}

void add_seed(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, "Random seed; every run is deterministic given it");
}

void add_threads(CLI::App* app, Options& o) {
  app->add_option("--threads", o.threads,
                  "Worker cap (default: EDGEBLEND_THREADS, else 1)");
}

void add_format(CLI::App* app, Options& o) {
  app->add_option("--format", o.format, "Table format")
      ->check(CLI::IsMember({"csv", "tsv"}));
}

void add_optimizer(CLI::App* app, Options& o) {
  app->add_option("--budget", o.budget, "Total objective evaluations across all starts")
      ->check(CLI::PositiveNumber);
  app->add_option("--tol", o.tol, "Pattern-search step tolerance")->check(CLI::PositiveNumber);
  app->add_option("--starts", o.starts,
                  "Barycenter plus random starts (basis vectors are always added)")
      ->check(CLI::PositiveNumber);
}

void add_clusterer(CLI::App* app, Options& o) {
  app->add_option("--method", o.method, "Forward clusterer")
      ->check(CLI::IsMember({"greedy_modularity", "label_prop"}));
  app->add_option("--k", o.k, "Target cluster count (greedy_modularity only)")
      ->check(CLI::PositiveNumber);
}

void add_noise(CLI::App* app, Options& o) {
  app->add_option("--noise-add", o.noise_add, "Additive noise range factor (sigma in +/- f*w_a)");
  app->add_option("--noise-mult-lo", o.noise_lo, "Lower end of the multiplicative factor");
  app->add_option("--noise-mult-hi", o.noise_hi, "Upper end of the multiplicative factor");
}

void add_bench_shape(CLI::App* app, Options& o) {
  app->add_option("--n", o.n, "Vertex count")->check(CLI::PositiveNumber);
  app->add_option("--avg-degree", o.avg_degree, "Average degree");
  app->add_option("--mu-t", o.mu_t, "Topological mixing")->check(CLI::Range(0.0, 1.0));
  app->add_option("--mu-w", o.mu_w, "Weight mixing")->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"edgeblend: recover edge-metric aggregation weights that justify a clustering"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto* gen = app.add_subcommand("generate", "Generate a planted-partition multi-metric benchmark");
  add_bench_shape(gen, o);
  gen->add_option("--k", o.k, "Number of noisy metric copies (default 10)")
      ->check(CLI::PositiveNumber);
  gen->add_option("--min-size", o.min_size, "Minimum cluster size (default n/30)");
  gen->add_option("--max-size", o.max_size, "Maximum cluster size (default n/10)");
  add_noise(gen, o);
  add_seed(gen, o);
  gen->add_option("--out", o.out, "Output directory");

  auto* per = app.add_subcommand("perturb", "Derive K noisy metric copies from a 1-metric graph");
  add_graph(per, o);
  per->add_option("--k", o.k, "Number of copies (default 10)")->check(CLI::PositiveNumber);
  add_noise(per, o);
  add_seed(per, o);
  per->add_option("--out", o.out, "Output edge-list file")->required();

  auto* col = app.add_subcommand("collapse", "Write the composite single-weight graph");
  add_graph(col, o);
  add_alpha(col, o);
  col->add_option("--out", o.out, "Output edge-list file")->required();

  auto* clu = app.add_subcommand("cluster", "Cluster the composite graph");
  add_graph(clu, o);
  add_alpha(clu, o);
  add_clusterer(clu, o);
  add_seed(clu, o);
  clu->add_option("--out", o.out, "Output clustering file");

  auto* cmp = app.add_subcommand("compare", "VI and modularity of two clusterings");
  cmp->add_option("files", o.positional, "<a.clu> <b.clu> <graph.edges>")
      ->expected(3)
      ->required()
      ->check(CLI::ExistingFile);
  add_alpha(cmp, o);
  cmp->add_flag("--bits", o.bits, "Report information in bits instead of nats");

  auto* hold = app.add_subcommand("holding", "Holding-power report for a given alpha");
  add_graph(hold, o);
  add_clusters(hold, o);
  add_alpha(hold, o);
  hold->add_option("--beta", o.betas, "Arctan steepness (on unit-mean weights)")->expected(1);
  add_threads(hold, o);
  add_format(hold, o);
  hold->add_option("--out", o.out, "Directory for the histogram table");

  auto* rec = app.add_subcommand("recover", "Recover alpha maximizing a justification objective");
  add_graph(rec, o);
  add_clusters(rec, o);
  rec->add_option("--pristine", o.pristine, "Optional clean 1-metric graph for the histograms")
      ->check(CLI::ExistingFile);
  rec->add_option("--variant", o.variant, "Objective")
      ->check(CLI::IsMember({"arctan", "count", "cut", "modularity", "blend"}));
  rec->add_option("--beta", o.betas, "Arctan steepness (on unit-mean weights)")->expected(1);
  rec->add_option("--lambda", o.lambdas, "Modularity weight for --variant blend")->expected(1);
  add_optimizer(rec, o);
  add_seed(rec, o);
  add_threads(rec, o);
  add_format(rec, o);
  rec->add_flag("--trace", o.trace, "Also write the optimizer trace table");
  rec->add_option("--out", o.out, "Output directory");

  auto* inv = app.add_subcommand("inverse", "Recover alpha by minimizing VI of the clusterer output");
  add_graph(inv, o);
  add_clusters(inv, o);
  add_clusterer(inv, o);
  add_optimizer(inv, o);
  add_seed(inv, o);
  add_threads(inv, o);
  add_format(inv, o);
  inv->add_option("--out", o.out, "Output directory");

  auto* par = app.add_subcommand("pareto", "Sweep the holding/modularity blend");
  add_graph(par, o);
  add_clusters(par, o);
  par->add_option("--lambda", o.lambdas, "Blend weights in [0,1] (repeatable)")
      ->check(CLI::Range(0.0, 1.0));
  par->add_option("--beta", o.betas, "Arctan steepness (on unit-mean weights)")->expected(1);
  add_optimizer(par, o);
  add_seed(par, o);
  add_threads(par, o);
  add_format(par, o);
  par->add_option("--out", o.out, "Output directory");

  auto* cor = app.add_subcommand("correlate", "Correlate the arctan objective with -VI");
  add_graph(cor, o);
  add_clusters(cor, o);
  cor->add_option("--beta", o.betas, "Steepness grid (repeatable)")->check(CLI::PositiveNumber);
  cor->add_option("--samples", o.samples, "Number of random alphas (>= 3)");
  add_clusterer(cor, o);
  add_seed(cor, o);
  add_threads(cor, o);
  add_format(cor, o);
  cor->add_option("--out", o.out, "Output directory");

  auto* sca = app.add_subcommand("scale", "Time objective evaluation across graph sizes");
  sca->add_option("--sizes", o.sizes, "Increasing vertex counts (or metric counts)");
  sca->add_option("--reps", o.reps, "Repetitions per size")->check(CLI::PositiveNumber);
  sca->add_option("--mode", o.mode, "Scale vertices or metrics")
      ->check(CLI::IsMember({"edges", "metrics"}));
  add_bench_shape(sca, o);
  sca->add_option("--k", o.k, "Metric count in edges mode (default 10)");
  add_optimizer(sca, o);
  add_seed(sca, o);
  add_format(sca, o);
  sca->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (gen->parsed()) return cmd_generate(o);
    if (per->parsed()) return cmd_perturb(o);
    if (col->parsed()) return cmd_collapse(o);
    if (clu->parsed()) return cmd_cluster(o);
    if (cmp->parsed()) return cmd_compare(o);
    if (hold->parsed()) return cmd_holding(o);
    if (rec->parsed()) return cmd_recover(o);
    if (inv->parsed()) return cmd_inverse(o);
    if (par->parsed()) return cmd_pareto(o);
    if (cor->parsed()) return cmd_correlate(o);
    if (sca->parsed()) return cmd_scale(o);
  } catch (const UsageError& e) {
    std::cerr << "edgeblend: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "edgeblend: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "edgeblend: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

}  // namespace edgeblend::cli

int main(int argc, char** argv) { return edgeblend::cli::run(argc, argv); }
