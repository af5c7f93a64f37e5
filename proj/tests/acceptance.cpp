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

// Acceptance suite: one self-contained check per release criterion, one
// pass/fail line each. Exits non-zero if any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mock_server.hpp"
#include "oracles.hpp"
#include "releval/harness.hpp"
#include "releval/moments.hpp"
#include "releval/perturb.hpp"
#include "releval/reliability.hpp"
#include "releval/report.hpp"
#include "releval/util/rng.hpp"

using namespace releval;
namespace fs = std::filesystem;

namespace {

std::string g_detail;

#define EXPECT(cond)                                                              \
  do {                                                                            \
    if (!(cond)) {                                                                \
      g_detail = std::string(#cond) + " (line " + std::to_string(__LINE__) + ")"; \
      return false;                                                              \
    }                                                                             \
  } while (0)

struct Workspace {
  fs::path dir;
  Workspace() {
    static int counter = 0;
    dir = fs::temp_directory_path() /
          ("releval-accept-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string file(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

int run_binary(const Workspace& ws, const std::string& args) {
  std::string cmd = std::string(RELEVAL_BIN) + " " + args + " >" + ws.file("__out") + " 2>" +
                    ws.file("__err");
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<double> gaussian_scores(std::size_t n, double mean, double sd, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = std::clamp(mean + sd * rng.next_gaussian(), 0.0, 1.0);
  return out;
}

// --- criterion 1: exact equivalence with the all-subsets oracle, N <= 10 ----

bool criterion_oracle_equivalence() {
  struct Fixture {
    std::vector<double> scores;
    double epsilon, delta;
  };
  std::vector<Fixture> fixtures;
  SplitMix64 rng(1001);
  for (std::size_t n : {5u, 8u, 10u}) {
    std::vector<double> uniform(n), clustered(n), dyadic(n);
    for (std::size_t i = 0; i < n; ++i) {
      uniform[i] = rng.next_unit();
      clustered[i] = (i % 2 ? 0.8 : 0.3) + 0.01 * rng.next_unit();
      dyadic[i] = static_cast<double>(i % 5) * 0.125;
    }
    fixtures.push_back({uniform, 0.02, 0.1});
    fixtures.push_back({clustered, 0.05, 0.1});
    fixtures.push_back({dyadic, 0.03125, 0.2});
  }
  fixtures.push_back({std::vector<double>(6, 0.5), 0.01, 0.1});
  fixtures.push_back({{0.0, 1.0, 0.0, 1.0, 0.5}, 0.04, 0.1});

  for (const auto& fixture : fixtures) {
    const auto n_total = static_cast<std::uint32_t>(fixture.scores.size());
    // K = 1000 >= C(10,5) = 252 keeps every n on the exhaustive path
    ReliabilityParams params =
        ReliabilityParams::validated(fixture.epsilon, fixture.delta, n_total, 1000, 7);
    ReliabilityReport report = estimate_n_star(fixture.scores, params);
    oracle::BruteForceReport expected =
        oracle::brute_force_report(fixture.scores, fixture.epsilon, fixture.delta);

    for (int m : {1, 2}) {
      const auto& got = m == 1 ? report.curve_first : report.curve_second;
      const auto& want = m == 1 ? expected.first : expected.second;
      EXPECT(got.size() == want.size());
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT(got[i].exact);
        // multiset equality of the deviation sets
        DeviationSet dev = deviation_set(fixture.scores, got[i].n,
                                         m == 1 ? Moment::first : Moment::second, 1000, 7);
        std::vector<double> sorted = dev.deviations;
        std::sort(sorted.begin(), sorted.end());
        EXPECT(sorted.size() == want[i].sorted_deviations.size());
        for (std::size_t j = 0; j < sorted.size(); ++j)
          EXPECT(sorted[j] == want[i].sorted_deviations[j]);
        EXPECT(got[i].ci_lower == want[i].ci_lower);
        EXPECT(got[i].ci_upper == want[i].ci_upper);
      }
    }
    EXPECT(report.n_star_first.has_value() == expected.n_star_first.has_value());
    if (report.n_star_first) EXPECT(*report.n_star_first == *expected.n_star_first);
    EXPECT(report.n_star_second.has_value() == expected.n_star_second.has_value());
    if (report.n_star_second) EXPECT(*report.n_star_second == *expected.n_star_second);
    if (report.n_star_combined) EXPECT(*report.n_star_combined == *expected.n_star_combined);
  }

  // the CLI estimate path reproduces the oracle too (shortest round-trip
  // doubles in the report keep it bit-exact)
  Workspace ws;
  auto scores = fixtures[0].scores;
  std::vector<std::string> pids;
  std::vector<double> cells;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    pids.push_back("p" + std::to_string(i));
    cells.push_back(scores[i]);
  }
  write_matrix(ScoreMatrix::validated(pids, {"only"}, cells, "ref", "fixture"),
               ws.file("ref.csv"));
  EXPECT(run_binary(ws, "estimate --matrix " + ws.file("ref.csv") +
                            " --epsilon 0.02 --delta 0.1 --resamples 1000 --seed 7 --out " +
                            ws.file("rep.json")) == 0);
  ReliabilityReport from_cli = read_report(ws.file("rep.json"));
  oracle::BruteForceReport expected = oracle::brute_force_report(scores, 0.02, 0.1);
  for (std::size_t i = 0; i < from_cli.curve_first.size(); ++i) {
    EXPECT(from_cli.curve_first[i].ci_upper == expected.first[i].ci_upper);
    EXPECT(from_cli.curve_second[i].ci_upper == expected.second[i].ci_upper);
  }
  return true;
}

// --- criterion 2: constant scores -> n* = 1, any epsilon > 0 ---------------

bool criterion_degenerate_reliability() {
  for (double constant : {0.0, 0.42, 0.5, 0.9, 1.0}) {
    for (double epsilon : {1e-6, 0.01, 0.25}) {
      for (double delta : {0.05, 0.1, 0.5}) {
        std::vector<double> scores(20, constant);
        ReliabilityParams params = ReliabilityParams::validated(epsilon, delta, 20, 200, 3);
        ReliabilityReport report = estimate_n_star(scores, params);
        EXPECT(report.n_star_first.has_value());
        EXPECT(*report.n_star_first == 1);
        EXPECT(report.n_star_second.has_value());
        EXPECT(*report.n_star_second == 1);
        EXPECT(*report.n_star_combined == 1);
      }
    }
  }
  return true;
}

// --- criterion 3: Delta(N) = {0}; curves end at (N, 0) ----------------------

bool criterion_endpoint_invariant() {
  SplitMix64 rng(33);
  for (std::uint32_t n_total : {3u, 10u, 25u, 60u}) {
    std::vector<double> scores(n_total);
    for (auto& x : scores) x = rng.next_unit();
    for (Moment m : {Moment::first, Moment::second}) {
      DeviationSet dev = deviation_set(scores, n_total, m, 500, rng.next());
      EXPECT(dev.exact);
      EXPECT(dev.deviations.size() == 1);
      EXPECT(dev.deviations[0] == 0.0);
    }
    ReliabilityParams params = ReliabilityParams::validated(0.01, 0.1, n_total, 200, 5);
    ReliabilityReport report = estimate_n_star(scores, params);
    for (Moment m : {Moment::first, Moment::second}) {
      ConvergenceCurve curve = convergence_curve(report, m);
      EXPECT(curve.points.back().first == n_total);
      EXPECT(curve.points.back().second == 0.0);
    }
  }
  return true;
}

// --- criterion 4: K = 1000 vs K = 100000 agree -------------------------------

bool criterion_monte_carlo_consistency() {
  SplitMix64 rng(4242);
  std::vector<double> scores(100);
  for (auto& x : scores) x = rng.next_uniform(0.45, 0.55);

  ReliabilityParams small_k = ReliabilityParams::validated(0.01, 0.1, 100, 1000, 11);
  ReliabilityParams large_k = ReliabilityParams::validated(0.01, 0.1, 100, 100000, 11);
  ReliabilityReport a = estimate_n_star(scores, small_k);
  ReliabilityReport b = estimate_n_star(scores, large_k);

  for (int m : {1, 2}) {
    const auto& ca = m == 1 ? a.curve_first : a.curve_second;
    const auto& cb = m == 1 ? b.curve_first : b.curve_second;
    for (std::size_t i = 0; i < ca.size(); ++i)
      EXPECT(std::abs(ca[i].ci_upper - cb[i].ci_upper) <= 0.002);
  }
  EXPECT(a.stable_n_star_combined.has_value());
  EXPECT(b.stable_n_star_combined.has_value());
  EXPECT(std::abs(static_cast<int>(*a.stable_n_star_combined) -
                  static_cast<int>(*b.stable_n_star_combined)) <= 2);
  return true;
}

// --- criterion 5: n* grows with score dispersion -----------------------------

bool criterion_dispersion_monotonicity() {
  const double sigmas[] = {0.01, 0.02, 0.05, 0.1};
  std::vector<int> medians;
  for (double sigma : sigmas) {
    std::vector<int> n_stars;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto scores = gaussian_scores(100, 0.6, sigma, 8800 + seed);
      ReliabilityParams params = ReliabilityParams::validated(0.01, 0.1, 100, 1000, seed);
      ReliabilityReport report = estimate_n_star(scores, params);
      EXPECT(report.n_star_first.has_value());
      n_stars.push_back(static_cast<int>(*report.n_star_first));
    }
    std::sort(n_stars.begin(), n_stars.end());
    medians.push_back((n_stars[9] + n_stars[10]) / 2);
  }
  for (std::size_t i = 1; i < medians.size(); ++i) EXPECT(medians[i] >= medians[i - 1]);
  // dispersion must actually move the needle across the tested range
  EXPECT(medians.back() > medians.front());
  return true;
}

// --- criterion 6: cheap high-variance model upper-bounds the expensive one ---

bool criterion_proxy_upper_bound() {
  int holds = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto small_scores = gaussian_scores(100, 0.5, 0.05, 7000 + seed);  // cheap, noisy
    auto large_scores = gaussian_scores(100, 0.7, 0.02, 9000 + seed);  // strong, steady
    ReliabilityParams params = ReliabilityParams::validated(0.01, 0.1, 100, 1000, seed);
    ConvergenceCurve small_curve =
        convergence_curve(estimate_n_star(small_scores, params), Moment::first);
    ConvergenceCurve large_curve =
        convergence_curve(estimate_n_star(large_scores, params), Moment::first);
    if (proxy_upper_bound_check(small_curve.points, large_curve.points, 0.002).holds) ++holds;
  }
  EXPECT(holds >= 18);
  return true;
}

// --- criterion 7: moment arithmetic against oracles ---------------------------

bool criterion_moment_correctness() {
  SplitMix64 rng(70707);
  for (int trial = 0; trial < 100000; ++trial) {
    std::size_t len = 1 + rng.next_below(32);
    std::vector<double> xs(len);
    for (auto& x : xs) x = rng.next_unit();
    EXPECT(std::abs(first_moment(xs) - oracle::kahan_mean(xs)) <= 1e-12);
    EXPECT(std::abs(second_moment(xs) - oracle::kahan_two_pass_variance(xs)) <= 1e-12);
  }

  // exhaustive dyadic grids: identities hold bit-exactly
  const double grid[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  for (double a : grid)
    for (double b : grid)
      for (double c : grid)
        for (double d : grid) {
          std::vector<double> xs{a, b, c, d};
          double m = first_moment(xs);
          double v = second_moment(xs);
          std::vector<double> shifted{a + 0.5, b + 0.5, c + 0.5, d + 0.5};
          EXPECT(first_moment(shifted) == m + 0.5);
          EXPECT(second_moment(shifted) == v);
          std::vector<double> scaled{a * 0.5, b * 0.5, c * 0.5, d * 0.5};
          EXPECT(second_moment(scaled) == 0.25 * v);
          std::vector<double> perm{d, b, a, c};
          EXPECT(first_moment(perm) == m);
          EXPECT(second_moment(perm) == v);
        }
  return true;
}

// --- criterion 8: byte-identical pipeline reruns ------------------------------

bool criterion_determinism() {
  Workspace ws;
  auto pipeline = [&](const std::string& tag) -> bool {
    if (run_binary(ws, "run --synthetic \"uniform(0.4,0.7)\" --count 40 --examples 12 --seed 5 "
                       "--out " +
                           ws.file(tag + ".csv")) != 0)
      return false;
    if (run_binary(ws, "estimate --matrix " + ws.file(tag + ".csv") +
                           " --epsilon 0.02 --resamples 400 --seed 9 --out " +
                           ws.file(tag + ".json") + " --svg " + ws.file(tag + ".svg")) != 0)
      return false;
    return run_binary(ws, "report --matrix " + ws.file(tag + ".csv") + " --n-star 10 --out " +
                              ws.file(tag + "-box.svg")) == 0;
  };
  EXPECT(pipeline("a"));
  EXPECT(pipeline("b"));
  EXPECT(slurp(ws.file("a.csv")) == slurp(ws.file("b.csv")));
  EXPECT(slurp(ws.file("a.csv.manifest.json")) == slurp(ws.file("b.csv.manifest.json")));
  EXPECT(slurp(ws.file("a.svg")) == slurp(ws.file("b.svg")));
  EXPECT(slurp(ws.file("a-box.svg")) == slurp(ws.file("b-box.svg")));

  // reports may differ only in the designated created timestamp header
  std::istringstream ja(slurp(ws.file("a.json")));
  std::istringstream jb(slurp(ws.file("b.json")));
  std::string la, lb;
  while (true) {
    bool more_a = static_cast<bool>(std::getline(ja, la));
    bool more_b = static_cast<bool>(std::getline(jb, lb));
    EXPECT(more_a == more_b);
    if (!more_a) break;
    if (la.find("\"created\"") != std::string::npos &&
        lb.find("\"created\"") != std::string::npos)
      continue;
    EXPECT(la == lb);
  }
  return true;
}

// --- criterion 9: mock endpoint end to end ------------------------------------

bool criterion_harness_integration() {
  const double accuracy = 0.7;
  mock::ChatServer server([&](const std::string& prompt) {
    std::size_t pos = prompt.find("question ");
    std::size_t end = prompt.find('?', pos);
    std::size_t i = std::stoul(prompt.substr(pos + 9, end - pos - 9));
    std::string gold = "choice-" + std::to_string(i) + "-" + std::to_string(i % 4);
    double u = static_cast<double>(hash64(prompt, 777) >> 11) * 0x1.0p-53;
    return mock::Reply{200, u < accuracy ? gold : std::string("something else")};
  });

  std::vector<Example> examples;
  for (std::size_t i = 0; i < 198; ++i) {
    std::vector<std::string> choices;
    for (std::size_t c = 0; c < 4; ++c)
      choices.push_back("choice-" + std::to_string(i) + "-" + std::to_string(c));
    examples.push_back(Example{"q" + std::to_string(i), "question " + std::to_string(i) + "?",
                               std::move(choices), i % 4});
  }
  DatasetSpec dataset = DatasetSpec::validated("accept", TaskKind::multiple_choice,
                                               std::move(examples), "exact_match");

  DimensionInventory inv;
  for (int p = 0; p < 5; ++p)
    inv.instruction_paraphrases.push_back("v" + std::to_string(p) + ": {question}\n{choices}");
  inv.qa_markers = {{"", ""}};
  inv.fewshot_k = 0;
  PerturbationSpace space = build_space(dataset, inv);
  auto configs = sample_configs(space, 50, 12);

  Workspace ws;
  ModelSpec model = ModelSpec::validated("mock", server.endpoint(), "mock-1", DecodingParams{},
                                         ModelRole::reference);
  RunOptions options;
  options.cache_dir = ws.file("cache");
  options.concurrency = 8;
  options.retry.initial_backoff = std::chrono::milliseconds(1);

  RunStats cold;
  ScoreMatrix matrix = run_evaluation(model, dataset, configs, inv, options, &cold);
  EXPECT(matrix.rows() == 50);
  EXPECT(matrix.cols() == 198);
  EXPECT(matrix.missing_count() == 0);
  EXPECT(cold.requests_sent == 50 * 198);

  std::vector<double> row_means = aggregate_rows(matrix);
  double grand = first_moment(row_means);
  EXPECT(std::abs(grand - accuracy) <= 0.01);

  int requests_after_cold = server.requests();
  RunStats warm;
  ScoreMatrix again = run_evaluation(model, dataset, configs, inv, options, &warm);
  EXPECT(warm.requests_sent == 0);
  EXPECT(warm.cache_hits == 50 * 198);
  EXPECT(server.requests() == requests_after_cold);
  EXPECT(again == matrix);
  return true;
}

// --- criterion 10: space cardinalities and sampling uniformity ----------------

bool criterion_perturbation_space() {
  SplitMix64 rng(515151);
  for (int trial = 0; trial < 20; ++trial) {
    bool mcqa = rng.next_below(2) == 0;
    std::size_t paraphrases = 1 + rng.next_below(4);
    std::size_t enumerators = 1 + rng.next_below(4);
    std::size_t separators = 1 + rng.next_below(6);
    std::size_t markers = 1 + rng.next_below(2);
    std::size_t pool = rng.next_below(6);
    std::size_t k = pool == 0 ? 0 : rng.next_below(pool + 1);
    std::size_t choices = 2 + rng.next_below(4);
    bool permute = mcqa && rng.next_below(2) == 0;
    std::size_t n_examples = 4 + rng.next_below(5);
    std::size_t subset = 0;
    if (!mcqa && rng.next_below(2) == 0) subset = 1 + rng.next_below(n_examples - 1);

    std::vector<Example> examples;
    for (std::size_t i = 0; i < n_examples; ++i) {
      if (mcqa) {
        std::vector<std::string> ch;
        for (std::size_t c = 0; c < choices; ++c)
          ch.push_back("ch" + std::to_string(i) + "_" + std::to_string(c));
        examples.push_back(Example{"q" + std::to_string(i), "q?", std::move(ch), i % choices});
      } else {
        examples.push_back(Example{"q" + std::to_string(i), "q?", {}, std::string("a")});
      }
    }
    DatasetSpec dataset = DatasetSpec::validated(
        "d", mcqa ? TaskKind::multiple_choice : TaskKind::open_ended, std::move(examples), "m");

    DimensionInventory inv;
    for (std::size_t p = 0; p < paraphrases; ++p)
      inv.instruction_paraphrases.push_back(mcqa
                                                ? "t" + std::to_string(p) + " {question} {choices}"
                                                : "t" + std::to_string(p) + " {question}");
    inv.enumerators = default_enumerators();
    inv.enumerators.resize(enumerators);
    inv.separators = default_separators();
    inv.separators.resize(separators);
    inv.qa_markers = default_qa_markers();
    inv.qa_markers.resize(markers);
    inv.choice_order_policy =
        permute ? ChoiceOrderPolicy::all_permutations : ChoiceOrderPolicy::identity_only;
    for (std::size_t i = 0; i < pool; ++i) inv.fewshot_pool.push_back({dataset.examples[i], "g"});
    inv.fewshot_k = static_cast<std::uint32_t>(k);
    if (subset > 0) inv.example_subset_size = static_cast<std::uint32_t>(subset);

    unsigned long long expected = paraphrases;
    if (mcqa) expected *= enumerators * separators;
    if (permute) {
      unsigned long long f = 1;
      for (std::size_t i = 2; i <= choices; ++i) f *= i;
      expected *= f;
    }
    unsigned long long fewshot = 1;
    for (std::size_t i = 0; i < k; ++i) fewshot *= (pool - i);
    expected *= fewshot * markers;
    if (subset > 0 && subset < n_examples) expected *= oracle::binomial(n_examples, subset);

    PerturbationSpace space = build_space(dataset, inv);
    EXPECT(space.cardinality.str() == std::to_string(expected));
  }

  // uniformity: 1e5 sampled configs over a 48-element space, 3 sigma per bin
  std::vector<Example> examples;
  for (std::size_t i = 0; i < 2; ++i) {
    std::vector<std::string> ch{"w" + std::to_string(i), "x" + std::to_string(i),
                                "y" + std::to_string(i), "z" + std::to_string(i)};
    examples.push_back(Example{"q" + std::to_string(i), "q?", std::move(ch), std::size_t{0}});
  }
  DatasetSpec dataset =
      DatasetSpec::validated("u", TaskKind::multiple_choice, std::move(examples), "m");
  DimensionInventory inv;
  inv.instruction_paraphrases = {"a {question} {choices}", "b {question} {choices}"};
  inv.qa_markers = {{"", ""}};
  inv.fewshot_k = 0;
  PerturbationSpace space = build_space(dataset, inv);
  EXPECT(space.cardinality.str() == "48");

  const int trials = 10000;
  const int per_trial = 10;  // 1e5 draws total
  std::map<std::string, int> hits;
  SplitMix64 seeds(2468);
  for (int t = 0; t < trials; ++t)
    for (const auto& cfg : sample_configs(space, per_trial, seeds.next())) hits[cfg.config_id]++;
  EXPECT(hits.size() == 48);
  const double p = per_trial / 48.0;
  const double expect_hits = trials * p;
  const double sigma = std::sqrt(trials * p * (1 - p));
  for (const auto& [id, count] : hits) EXPECT(std::abs(count - expect_hits) <= 3.0 * sigma);
  return true;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "oracle equivalence (exhaustive subsets, N <= 10)", criterion_oracle_equivalence},
      {2, "degenerate reliability (constant scores -> n* = 1)", criterion_degenerate_reliability},
      {3, "endpoint invariant (Delta(N) = {0}, curve ends at 0)", criterion_endpoint_invariant},
      {4, "monte carlo consistency (K = 1e3 vs 1e5)", criterion_monte_carlo_consistency},
      {5, "n* non-decreasing in score dispersion", criterion_dispersion_monotonicity},
      {6, "proxy upper bound across 20 seeds", criterion_proxy_upper_bound},
      {7, "moment correctness vs compensated oracles", criterion_moment_correctness},
      {8, "byte-identical pipeline reruns", criterion_determinism},
      {9, "mock-endpoint harness integration", criterion_harness_integration},
      {10, "perturbation-space cardinality and uniformity", criterion_perturbation_space},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    g_detail.clear();
    bool ok = false;
    std::string error;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = criterion.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    if (ok) {
      std::printf("[criterion %2d] PASS  %-55s (%lld ms)\n", criterion.id, criterion.name,
                  static_cast<long long>(elapsed));
    } else {
      ++failures;
      std::printf("[criterion %2d] FAIL  %-55s (%lld ms)\n", criterion.id, criterion.name,
                  static_cast<long long>(elapsed));
      if (!g_detail.empty()) std::printf("               failed check: %s\n", g_detail.c_str());
      if (!error.empty()) std::printf("               exception: %s\n", error.c_str());
    }
    std::fflush(stdout);
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
