// Copyright 2026 the releval authors
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

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "releval/core_json.hpp"
#include "releval/harness.hpp"
#include "releval/moments.hpp"
#include "releval/report.hpp"

namespace {

using namespace releval;

constexpr const char* kDefaultsFooter =
    "Defaults across the pipeline: epsilon = 0.01, delta = 0.1, reference sample count N = 100,\n"
    "Monte Carlo resamples per n K = 1000, few-shot demonstrations k = 5 (when a pool is given).";

struct SpaceArgs {
  std::string dataset_path;
  std::string inventory_path;
};

struct RunArgs {
  std::string model_path;
  std::string dataset_path;
  std::string inventory_path;
  std::string out_path;
  std::uint64_t count = 0;
  bool count_set = false;
  bool reference = false;
  std::uint64_t seed = 0;
  std::string cache_dir = "cache";
  std::uint32_t concurrency = 4;
  std::string scorer = "exact_match";
  std::string synthetic_law;
  std::string effect_law;
  std::string effect_dim = "config";
  std::uint32_t examples = 100;
  std::string model_id;
};

struct EstimateArgs {
  std::string matrix_path;
  std::string out_path;
  std::string svg_path;
  double epsilon = 0.01;
  double delta = 0.1;
  std::uint32_t resamples = 1000;
  std::uint64_t seed = 0;
};

struct ReportArgs {
  std::vector<std::string> matrix_paths;
  std::string report_path;
  std::uint32_t n_star = 0;
  bool n_star_set = false;
  std::string out_path;
  std::string table_path;
  std::string title;
};

int effect_dimension_index(const std::string& name) {
  if (name == "config") return -1;
  if (name == "paraphrase") return 0;
  if (name == "enumerator") return 1;
  if (name == "separator") return 2;
  if (name == "order") return 3;
  if (name == "fewshot") return 4;
  if (name == "marker") return 5;
  if (name == "subset") return 6;
  throw EvalError(Errc::validation, "unknown --effect-dim '" + name + "'");
}

int cmd_space(const SpaceArgs& args) {
  DatasetSpec dataset = load_dataset(args.dataset_path);
  DimensionInventory inventory = load_inventory(args.inventory_path, dataset);
  PerturbationSpace space = build_space(dataset, std::move(inventory));

  std::cout << "dataset: " << dataset.id << " (" << task_kind_name(dataset.task_kind) << ", "
            << dataset.examples.size() << " examples)\n";
  std::cout << "cardinality: " << space.cardinality.str() << "\n";
  for (const auto& factor : space.factors)
    std::cout << "  " << factor.name << ": " << factor.count.str() << "\n";
  return 0;
}

std::vector<PerturbationConfig> placeholder_configs(std::uint64_t count) {
  std::vector<PerturbationConfig> configs;
  configs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    PerturbationConfig c;
    c.paraphrase_index = static_cast<std::uint32_t>(i);
    c.config_id = compute_config_id(c);
    configs.push_back(std::move(c));
  }
  return configs;
}

int cmd_run(const RunArgs& args) {
  const bool synthetic = !args.synthetic_law.empty();
  const bool have_space = !args.dataset_path.empty() && !args.inventory_path.empty();
  if (!synthetic && !have_space)
    throw EvalError(Errc::validation, "--dataset and --inventory are required for live runs");
  if (!synthetic && args.model_path.empty())
    throw EvalError(Errc::validation, "--model is required for live runs");

  std::uint64_t count = args.count;
  if (!args.count_set) {
    if (args.reference)
      count = 100;  // reference runs default to N = 100
    else
      throw EvalError(Errc::validation, "--count is required (or pass --reference for N = 100)");
  }

  std::vector<PerturbationConfig> configs;
  std::uint32_t example_count = args.examples;
  DatasetSpec dataset;
  DimensionInventory inventory;
  bool have_dataset = false;
  if (have_space) {
    dataset = load_dataset(args.dataset_path);
    inventory = load_inventory(args.inventory_path, dataset);
    PerturbationSpace space = build_space(dataset, inventory);
    configs = sample_configs(space, count, args.seed);
    example_count = space.subset_active ? space.subset_size
                                        : static_cast<std::uint32_t>(dataset.examples.size());
    have_dataset = true;
  } else {
    configs = placeholder_configs(count);
  }

  ScoreMatrix matrix = [&] {
    if (synthetic) {
      SyntheticModel model;
      model.id = !args.model_id.empty()      ? args.model_id
                 : args.model_path.empty()   ? "synthetic"
                                             : load_model(args.model_path).id;
      model.score_law = parse_law(args.synthetic_law);
      if (!args.effect_law.empty()) {
        PerturbationEffect effect;
        int dim = effect_dimension_index(args.effect_dim);
        effect.dimension = dim < 0 ? std::nullopt : std::optional<int>(dim);
        effect.offset_law = parse_law(args.effect_law);
        model.per_perturbation_effect = std::move(effect);
      }
      ScoreMatrix m = synth_scores(model, configs, example_count, args.seed);
      std::cout << "requests: 0\n";
      return m;
    }
    ModelSpec model = load_model(args.model_path);
    RunOptions options;
    options.scorer_id = args.scorer;
    options.concurrency = args.concurrency;
    options.cache_dir = args.cache_dir;
    RunStats stats;
    ScoreMatrix m = run_evaluation(model, dataset, configs, inventory, options, &stats);
    std::cout << "requests: " << stats.requests_sent << "\n";
    std::cout << "cache hits: " << stats.cache_hits << "\n";
    if (stats.failed_cells > 0)
      std::cout << "missing cells: " << stats.failed_cells << " (retries exhausted)\n";
    return m;
  }();

  write_matrix(matrix, args.out_path);

  RunManifest manifest;
  manifest.model_id = matrix.model_id();
  manifest.dataset_id = have_dataset ? dataset.id : "synthetic";
  manifest.scorer_id = synthetic ? "synthetic:" + args.synthetic_law : args.scorer;
  manifest.seed = args.seed;
  if (!synthetic) {
    ModelSpec model = load_model(args.model_path);
    manifest.model_name = model.model_name;
    manifest.decoding = model.decoding;
  }
  for (const auto& config : configs) manifest.configs.emplace_back(config.config_id, config);
  write_manifest(manifest, manifest_path(args.out_path));

  std::cout << "matrix: " << args.out_path << " (" << matrix.rows() << " x " << matrix.cols()
            << ")\n";
  return 0;
}

int cmd_estimate(const EstimateArgs& args) {
  ScoreMatrix matrix = read_matrix(args.matrix_path);
  std::vector<double> scores = aggregate_rows(matrix);  // IncompleteScores names bad rows

  ReliabilityParams params = ReliabilityParams::validated(
      args.epsilon, args.delta, static_cast<std::uint32_t>(scores.size()), args.resamples,
      args.seed);
  ReliabilityReport report = estimate_n_star(scores, params, matrix.model_id());
  write_report(report, args.out_path);

  auto print_n = [](const char* label, const std::optional<std::uint32_t>& v) {
    std::cout << label << ": " << (v ? std::to_string(*v) : "none") << "\n";
  };
  print_n("n* (first moment)", report.n_star_first);
  print_n("n* (second moment)", report.n_star_second);
  print_n("n* (combined)", report.n_star_combined);
  print_n("stable n* (combined)", report.stable_n_star_combined);
  if (report.unreliable_at_n)
    std::cout << "warning: only n = N satisfied the deviation bound; unreliable at this N\n";

  if (!args.svg_path.empty()) {
    std::vector<ConvergenceSeries> series;
    for (Moment m : {Moment::first, Moment::second}) {
      ConvergenceCurve curve = convergence_curve(report, m);
      series.push_back(ConvergenceSeries{
          m == Moment::first ? "first moment" : "second moment", curve.points, curve.n_star});
    }
    PlotOptions options;
    options.title = "deviation vs resamplings (" + matrix.model_id() + ")";
    emit_convergence(series, params.epsilon, args.svg_path, options);
    std::cout << "convergence plot: " << args.svg_path << "\n";
  }
  std::cout << "report: " << args.out_path << "\n";
  return 0;
}

int cmd_report(const ReportArgs& args) {
  std::optional<std::uint32_t> n_star;
  if (args.n_star_set) n_star = args.n_star;
  if (!args.report_path.empty()) {
    ReliabilityReport rel = read_report(args.report_path);
    // Monte Carlo noise can pass spuriously at small n, so prefer stable n*
    n_star = rel.stable_n_star_combined ? rel.stable_n_star_combined : rel.n_star_combined;
    if (!n_star)
      throw EvalError(Errc::validation,
                      "report '" + args.report_path + "' carries no usable n*");
  }

  std::vector<std::pair<std::string, std::vector<double>>> per_model;
  for (const auto& path : args.matrix_paths) {
    ScoreMatrix matrix = read_matrix(path);
    std::vector<double> scores = aggregate_rows(matrix);
    if (n_star) {
      if (*n_star > scores.size())
        throw EvalError(Errc::validation,
                        "matrix '" + path + "' has " + std::to_string(scores.size()) +
                            " rows, fewer than n* = " + std::to_string(*n_star));
      scores.resize(*n_star);  // rows are in draw order, so a prefix is a valid sample
    }
    std::string label = matrix.model_id();
    if (label.empty()) label = std::filesystem::path(path).stem().string();
    per_model.emplace_back(std::move(label), std::move(scores));
  }

  PlotOptions options;
  options.title = args.title;
  emit_boxplot(per_model, args.out_path, options);
  std::cout << "box plot: " << args.out_path << "\n";

  std::string table = "model,n,mean,variance,median,q1,q3,min,max\n";
  for (const auto& [model, scores] : per_model) {
    SummaryStats s = summary(scores);
    table += model + "," + std::to_string(scores.size()) + "," + format_double(s.mean) + "," +
             format_double(s.variance) + "," + format_double(s.median) + "," +
             format_double(s.q1) + "," + format_double(s.q3) + "," + format_double(s.min) + "," +
             format_double(s.max) + "\n";
  }
  std::cout << table;
  if (!args.table_path.empty()) write_text_atomic(args.table_path, table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"reliable stochastic evaluation of LLMs over meaning-preserving prompt "
               "perturbations"};
  app.require_subcommand(1);
  app.footer(kDefaultsFooter);

  SpaceArgs space_args;
  auto* space = app.add_subcommand(
      "space", "build the perturbation space and print its cardinality and dimension breakdown");
  space->footer(kDefaultsFooter);
  space->add_option("--dataset", space_args.dataset_path, "dataset JSON file")->required();
  space->add_option("--inventory", space_args.inventory_path, "perturbation inventory file")
      ->required();

  RunArgs run_args;
  auto* run = app.add_subcommand(
      "run", "sample perturbation configs and produce a score-matrix file for one model");
  run->footer(kDefaultsFooter);
  run->add_option("--model", run_args.model_path, "model spec JSON (endpoint, decoding, role)");
  run->add_option("--dataset", run_args.dataset_path, "dataset JSON file");
  run->add_option("--inventory", run_args.inventory_path, "perturbation inventory file");
  run->add_option("--out", run_args.out_path, "output matrix path")->required();
  run->add_option("--count", run_args.count,
                  "number of perturbation resamplings (default 100 with --reference)")
      ->each([&](const std::string&) { run_args.count_set = true; });
  run->add_flag("--reference", run_args.reference,
                "mark this as the reference-model run (defaults --count to N = 100)");
  run->add_option("--seed", run_args.seed, "sampling seed")->capture_default_str();
  run->add_option("--cache", run_args.cache_dir, "response cache directory")
      ->capture_default_str();
  run->add_option("--concurrency", run_args.concurrency, "max in-flight requests")
      ->capture_default_str();
  run->add_option("--scorer", run_args.scorer, "registered scorer id")->capture_default_str();
  run->add_option("--synthetic", run_args.synthetic_law,
                  "skip the network: per-cell score law, e.g. constant(0.9), uniform(0.4,0.6), "
                  "beta(2,5), bimodal(0.5,constant(0.2),constant(0.8))");
  run->add_option("--effect", run_args.effect_law,
                  "synthetic additive per-perturbation offset law");
  run->add_option("--effect-dim", run_args.effect_dim,
                  "dimension keying the offset: config, paraphrase, enumerator, separator, "
                  "order, fewshot, marker, subset")
      ->capture_default_str();
  run->add_option("--examples", run_args.examples,
                  "synthetic example count when no dataset is given")
      ->capture_default_str();
  run->add_option("--model-id", run_args.model_id,
                  "matrix label for synthetic runs (defaults to 'synthetic')");

  EstimateArgs est_args;
  auto* estimate = app.add_subcommand(
      "estimate", "estimate the minimal reliable resampling count n* from a reference matrix");
  estimate->footer(kDefaultsFooter);
  estimate->add_option("--matrix", est_args.matrix_path, "reference-model score matrix")
      ->required();
  estimate->add_option("--epsilon", est_args.epsilon, "acceptable moment deviation")
      ->capture_default_str();
  estimate->add_option("--delta", est_args.delta, "confidence level")->capture_default_str();
  estimate->add_option("--resamples", est_args.resamples,
                       "Monte Carlo subsets per candidate n (K)")
      ->capture_default_str();
  estimate->add_option("--seed", est_args.seed, "subset-sampling seed")->capture_default_str();
  estimate->add_option("--out", est_args.out_path, "reliability report output path")->required();
  estimate->add_option("--svg", est_args.svg_path, "convergence plot output path");

  ReportArgs rep_args;
  auto* report = app.add_subcommand(
      "report", "distributional comparison: box plot and summary table over score matrices");
  report->footer(kDefaultsFooter);
  report->add_option("--matrix", rep_args.matrix_paths, "score matrix per model (repeatable)")
      ->required();
  report->add_option("--n-star", rep_args.n_star, "use only the first n* rows of each matrix")
      ->each([&](const std::string&) { rep_args.n_star_set = true; });
  report->add_option("--report", rep_args.report_path,
                     "reliability report supplying n* (stable combined)");
  report->add_option("--out", rep_args.out_path, "box plot output path")->required();
  report->add_option("--table", rep_args.table_path, "also write the summary table here");
  report->add_option("--title", rep_args.title, "plot title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (space->parsed()) return cmd_space(space_args);
    if (run->parsed()) return cmd_run(run_args);
    if (estimate->parsed()) return cmd_estimate(est_args);
    if (report->parsed()) return cmd_report(rep_args);
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.is_validation() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
