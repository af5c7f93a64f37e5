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

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "releval/harness.hpp"

namespace releval {

ScoreMatrix run_evaluation(const ModelSpec& model, const DatasetSpec& dataset,
                           const std::vector<PerturbationConfig>& configs,
                           const DimensionInventory& inventory, const RunOptions& options,
                           RunStats* stats) {
  if (configs.empty()) throw EvalError(Errc::empty_sample, "no configs to evaluate");
  if (options.concurrency < 1)
    throw EvalError(Errc::validation, "concurrency limit must be positive");
  if (options.cache_dir.empty())
    throw EvalError(Errc::validation, "run_evaluation needs a cache directory");

  ScorerFn scorer = ScorerRegistry::instance().get(options.scorer_id);  // ScorerUnknown early
  ChatClient client(model, options.retry);                              // AuthFailure early
  ResponseCache cache(options.cache_dir);

  // column plan: example ids, or anonymous slots when the example-subset
  // dimension is active (each row evaluates its own subset)
  const bool subset_active = !configs.front().example_subset.empty();
  const std::size_t cols =
      subset_active ? configs.front().example_subset.size() : dataset.examples.size();
  for (const auto& config : configs) {
    if (config.example_subset.empty() != !subset_active ||
        (subset_active && config.example_subset.size() != cols))
      throw EvalError(Errc::validation, "configs disagree on the example-subset dimension");
    for (auto idx : config.example_subset)
      if (idx >= dataset.examples.size())
        throw EvalError(Errc::validation, "example subset index out of dataset bounds");
  }

  std::vector<std::string> example_ids;
  example_ids.reserve(cols);
  if (subset_active) {
    for (std::size_t c = 0; c < cols; ++c) example_ids.push_back("slot" + std::to_string(c));
  } else {
    for (const auto& ex : dataset.examples) example_ids.push_back(ex.id);
  }

  const std::size_t rows = configs.size();
  const std::size_t cells = rows * cols;
  std::vector<double> values(cells, ScoreMatrix::missing());

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> requests_sent{0};
  std::atomic<std::size_t> cache_hits{0};
  std::atomic<std::size_t> failed_cells{0};
  std::atomic<bool> fatal{false};
  std::exception_ptr fatal_error;
  std::mutex fatal_mutex;

  auto worker = [&] {
    for (;;) {
      if (fatal.load(std::memory_order_relaxed)) return;
      std::size_t cell = next.fetch_add(1);
      if (cell >= cells) return;
      std::size_t r = cell / cols;
      std::size_t c = cell % cols;
      const PerturbationConfig& config = configs[r];
      const Example& example =
          dataset.examples[subset_active ? config.example_subset[c] : c];

      try {
        RenderedPrompt rendered = render_prompt(config, example, inventory);
        Hash128 key = ResponseCache::key(model.model_name, model.decoding, rendered.text);

        std::string response;
        if (auto hit = cache.lookup(key)) {
          response = hit->response_text;
          cache_hits.fetch_add(1);
        } else {
          ChatResult result;
          try {
            result = client.complete(rendered.text);
          } catch (const EvalError& e) {
            if (e.code() == Errc::endpoint_unreachable) {
              failed_cells.fetch_add(1);
              continue;  // missing cell; the run carries on
            }
            throw;
          }
          CacheEntry entry;
          entry.key_hex = key.hex();
          entry.request_fingerprint =
              ResponseCache::fingerprint(model.model_name, model.decoding, rendered.text);
          entry.response_text = result.text;
          entry.prompt_tokens = result.prompt_tokens;
          entry.completion_tokens = result.completion_tokens;
          cache.store(entry);
          requests_sent.fetch_add(1);
          response = std::move(result.text);
        }

        values[cell] = std::clamp(scorer(response, example, rendered), 0.0, 1.0);
      } catch (...) {
        std::lock_guard lock(fatal_mutex);
        if (!fatal_error) fatal_error = std::current_exception();
        fatal.store(true);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  std::size_t workers = std::min<std::size_t>(options.concurrency, cells);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (fatal_error) std::rethrow_exception(fatal_error);

  if (stats != nullptr) {
    stats->requests_sent = requests_sent.load();
    stats->cache_hits = cache_hits.load();
    stats->failed_cells = failed_cells.load();
  }

  // nothing came back at all: the endpoint is down, not flaky
  if (failed_cells.load() == cells)
    throw EvalError(Errc::endpoint_unreachable,
                    "every request to '" + model.endpoint + "' failed");

  std::vector<std::string> pids;
  pids.reserve(rows);
  for (const auto& config : configs) pids.push_back(config.config_id);
  return ScoreMatrix::validated(std::move(pids), std::move(example_ids), std::move(values),
                                model.id, dataset.id);
}

}  // namespace releval
