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
#include <cctype>
#include <memory>

#include "releval/harness.hpp"

namespace releval {

namespace {

bool is_strip_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string replace_all(std::string text, std::string_view needle, std::string_view value) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace

std::string normalize_answer(std::string_view text) {
  while (!text.empty() && is_ws(text.front())) text.remove_prefix(1);
  while (!text.empty() && (is_ws(text.back()) || is_strip_punct(text.back())))
    text.remove_suffix(1);
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double score_exact_match(const std::string& response, const Example&,
                         const RenderedPrompt& rendered) {
  std::string norm = normalize_answer(response);
  if (rendered.gold_map) {
    if (norm == normalize_answer(rendered.gold_map->gold_label)) return 1.0;
    if (norm == normalize_answer(rendered.gold_map->gold_choice_text)) return 1.0;
    return 0.0;
  }
  return norm == normalize_answer(rendered.gold_text) ? 1.0 : 0.0;
}

namespace {

// relaxed alternative: accepts the gold label as a standalone token or the
// gold text as a substring
double score_contains(const std::string& response, const Example&,
                      const RenderedPrompt& rendered) {
  std::string norm = normalize_answer(response);
  std::string gold = normalize_answer(rendered.gold_text);
  if (!gold.empty() && norm.find(gold) != std::string::npos) return 1.0;
  if (rendered.gold_map) {
    std::string label = normalize_answer(rendered.gold_map->gold_label);
    std::size_t pos = 0;
    while ((pos = norm.find(label, pos)) != std::string::npos) {
      bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(norm[pos - 1]));
      std::size_t end = pos + label.size();
      bool right_ok = end == norm.size() || !std::isalnum(static_cast<unsigned char>(norm[end]));
      if (left_ok && right_ok) return 1.0;
      ++pos;
    }
  }
  return 0.0;
}

}  // namespace

ScorerRegistry::ScorerRegistry() {
  scorers_.emplace_back("exact_match", score_exact_match);
  scorers_.emplace_back("contains", score_contains);
}

ScorerRegistry& ScorerRegistry::instance() {
  static ScorerRegistry registry;
  return registry;
}

void ScorerRegistry::add(const std::string& id, ScorerFn fn) {
  for (auto& [existing, existing_fn] : scorers_) {
    if (existing == id) {
      existing_fn = std::move(fn);
      return;
    }
  }
  scorers_.emplace_back(id, std::move(fn));
}

ScorerFn ScorerRegistry::get(const std::string& id) const {
  for (const auto& [existing, fn] : scorers_)
    if (existing == id) return fn;
  throw EvalError(Errc::scorer_unknown, "no scorer registered as '" + id + "'");
}

std::vector<std::string> ScorerRegistry::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, fn] : scorers_) out.push_back(id);
  return out;
}

ScorerFn make_judge_scorer(ModelSpec judge, std::string prompt_template, std::string pass_marker,
                           RetryPolicy retry) {
  auto client = std::make_shared<ChatClient>(std::move(judge), retry);
  std::string marker = normalize_answer(pass_marker);
  return [client, prompt_template = std::move(prompt_template), marker](
             const std::string& response, const Example& example,
             const RenderedPrompt& rendered) -> double {
    std::string prompt = prompt_template;
    prompt = replace_all(std::move(prompt), "{question}", example.question);
    prompt = replace_all(std::move(prompt), "{gold}", rendered.gold_text);
    prompt = replace_all(std::move(prompt), "{response}", response);
    ChatResult verdict = client->complete(prompt);
    return normalize_answer(verdict.text) == marker ? 1.0 : 0.0;
  };
}

}  // namespace releval
