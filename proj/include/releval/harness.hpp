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

#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "releval/core.hpp"
#include "releval/perturb.hpp"
#include "releval/util/hash.hpp"
#include "releval/util/rng.hpp"

namespace releval {

// Everything needed to turn (model, dataset, configs) into ScoreMatrix rows:
// an OpenAI-compatible chat client with retries, an append-only on-disk
// response cache, pluggable scorers, and synthetic score generators for
// desk-scale experiments.

// --- response cache ----------------------------------------------------------

struct CacheEntry {
  std::string key_hex;  // pure function of (model_name, decoding, prompt)
  std::string request_fingerprint;
  std::string response_text;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
  std::string created_at;

  bool operator==(const CacheEntry&) const = default;
};

/// Append-only directory of immutable entries keyed by hex hash, laid out as
/// <root>/<first 2 hex chars>/<full key>.entry. Writes are atomic
/// (temp-then-rename), so concurrent workers storing the same key are safe.
class ResponseCache {
 public:
  explicit ResponseCache(std::string root);

  static Hash128 key(const std::string& model_name, const DecodingParams& decoding,
                     const std::string& prompt);
  static std::string fingerprint(const std::string& model_name, const DecodingParams& decoding,
                                 const std::string& prompt);

  std::optional<CacheEntry> lookup(const Hash128& key) const;
  void store(const CacheEntry& entry);
  std::string entry_path(const Hash128& key) const;
  const std::string& root() const { return root_; }

 private:
  std::string root_;
};

// --- chat client -------------------------------------------------------------

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{1000};
  double backoff_multiplier = 2.0;
  double jitter = 0.1;  // +- fraction of the backoff
  std::chrono::seconds connect_timeout{10};
  std::chrono::seconds read_timeout{120};
};

struct ChatResult {
  std::string text;
  std::uint64_t prompt_tokens = 0;
  std::uint64_t completion_tokens = 0;
};

/// Minimal OpenAI-compatible chat-completions client. Transient failures
/// (transport errors, 429, 5xx) are retried with jittered exponential
/// backoff; auth failures are not retryable.
class ChatClient {
 public:
  ChatClient(ModelSpec model, RetryPolicy retry = {});

  /// Single-turn user prompt. Throws AuthFailure / EndpointUnreachable on
  /// final failure.
  ChatResult complete(const std::string& prompt) const;

  const ModelSpec& model() const { return model_; }

 private:
  ModelSpec model_;
  RetryPolicy retry_;
  std::string base_url_;
  std::string completions_path_;
  std::string bearer_token_;
};

// --- scorers -----------------------------------------------------------------

using ScorerFn =
    std::function<double(const std::string& response, const Example& example,
                         const RenderedPrompt& rendered)>;

/// 1 iff the normalized response (case-folded, surrounding whitespace and
/// trailing punctuation stripped) equals the rendered gold label or the gold
/// answer text. Strict by construction; relaxed matching is the separate
/// "contains" scorer.
double score_exact_match(const std::string& response, const Example& example,
                         const RenderedPrompt& rendered);

std::string normalize_answer(std::string_view text);

class ScorerRegistry {
 public:
  static ScorerRegistry& instance();

  void add(const std::string& id, ScorerFn fn);
  ScorerFn get(const std::string& id) const;  // throws ScorerUnknown
  std::vector<std::string> ids() const;

 private:
  ScorerRegistry();
  std::vector<std::pair<std::string, ScorerFn>> scorers_;
};

/// LLM-as-a-judge adapter: fills a user-supplied prompt template
/// ({question}, {gold}, {response} placeholders), sends it to the judge
/// endpoint and scores 1 when the reply matches `pass_marker` after
/// normalization. The judge prompt is configuration, not baked in.
ScorerFn make_judge_scorer(ModelSpec judge, std::string prompt_template,
                           std::string pass_marker = "yes", RetryPolicy retry = {});

// --- synthetic models --------------------------------------------------------

struct ScoreLaw;
using LawPtr = std::shared_ptr<const ScoreLaw>;

struct ConstantLaw { double value = 0.0; };
struct UniformLaw { double lo = 0.0, hi = 1.0; };
struct BetaLaw { double alpha = 1.0, beta = 1.0; };
struct BimodalLaw {
  double p = 0.5;  // probability of drawing from `first`
  LawPtr first;
  LawPtr second;
};

struct ScoreLaw {
  std::variant<ConstantLaw, UniformLaw, BetaLaw, BimodalLaw> law;
};

/// Parse "constant(0.9)", "uniform(0.4,0.6)", "beta(2,5)",
/// "bimodal(0.5,constant(0.2),constant(0.8))". Throws InvalidLaw.
ScoreLaw parse_law(std::string_view text);
std::string law_to_string(const ScoreLaw& law);
void validate_law(const ScoreLaw& law);  // throws InvalidLaw
double sample_law(const ScoreLaw& law, SplitMix64& rng);

/// Additive per-perturbation offset: one draw of `offset_law` per distinct
/// coordinate of the keyed dimension (or per config when dimension is
/// nullopt), shared by every cell of that perturbation.
struct PerturbationEffect {
  std::optional<int> dimension;  // index into the canonical dimension order
  ScoreLaw offset_law;
};

struct SyntheticModel {
  std::string id;
  ScoreLaw score_law;
  std::optional<PerturbationEffect> per_perturbation_effect;
};

/// Deterministic synthetic matrix: cell (config, example) is a pure function
/// of (model id, config id, example index, seed), clamped to [0,1].
ScoreMatrix synth_scores(const SyntheticModel& model,
                         const std::vector<PerturbationConfig>& configs,
                         std::uint32_t example_count, std::uint64_t seed);

// --- evaluation runner -------------------------------------------------------

struct RunOptions {
  std::string scorer_id = "exact_match";
  std::uint32_t concurrency = 4;
  std::string cache_dir;
  RetryPolicy retry;
};

struct RunStats {
  std::size_t requests_sent = 0;
  std::size_t cache_hits = 0;
  std::size_t failed_cells = 0;
};

/// One row per config, one column per example (or per subset slot when the
/// example-subset dimension is active). Every response is cached before
/// scoring; per-cell failures become missing values and never abort the run.
/// Concurrency never exceeds options.concurrency in-flight requests.
ScoreMatrix run_evaluation(const ModelSpec& model, const DatasetSpec& dataset,
                           const std::vector<PerturbationConfig>& configs,
                           const DimensionInventory& inventory, const RunOptions& options,
                           RunStats* stats = nullptr);

}  // namespace releval
