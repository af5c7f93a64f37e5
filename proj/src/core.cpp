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

#include "releval/core.hpp"

#include <bit>
#include <unordered_set>

namespace releval {

std::string_view task_kind_name(TaskKind kind) {
  return kind == TaskKind::multiple_choice ? "multiple_choice" : "open_ended";
}

TaskKind task_kind_from_name(std::string_view name) {
  if (name == "multiple_choice") return TaskKind::multiple_choice;
  if (name == "open_ended") return TaskKind::open_ended;
  throw EvalError(Errc::malformed_file, "unknown task kind '" + std::string(name) + "'");
}

std::string_view model_role_name(ModelRole role) {
  return role == ModelRole::candidate ? "candidate" : "reference";
}

ModelRole model_role_from_name(std::string_view name) {
  if (name == "candidate") return ModelRole::candidate;
  if (name == "reference") return ModelRole::reference;
  throw EvalError(Errc::malformed_file, "unknown model role '" + std::string(name) + "'");
}

std::vector<std::string> id_violations(std::string_view id, std::string_view what) {
  std::vector<std::string> out;
  if (id.empty()) out.push_back(std::string(what) + " must be non-empty");
  if (id.find_first_of(",\n\r") != std::string_view::npos)
    out.push_back(std::string(what) + " '" + std::string(id) +
                  "' must not contain commas or line breaks");
  return out;
}

std::vector<std::string> Example::violations(TaskKind kind) const {
  std::vector<std::string> out = id_violations(id, "example id");
  if (kind == TaskKind::multiple_choice) {
    if (choices.size() < 2)
      out.push_back("example '" + id + "': multiple-choice examples need at least 2 choices");
    if (!std::holds_alternative<std::size_t>(gold)) {
      out.push_back("example '" + id + "': multiple-choice gold must be a choice index");
    } else if (std::get<std::size_t>(gold) >= choices.size()) {
      out.push_back("example '" + id + "': gold index out of choice bounds");
    }
  } else {
    if (!std::holds_alternative<std::string>(gold))
      out.push_back("example '" + id + "': open-ended gold must be answer text");
    if (!choices.empty())
      out.push_back("example '" + id + "': open-ended examples must not carry choices");
  }
  return out;
}

DatasetSpec DatasetSpec::validated(std::string id, TaskKind task_kind,
                                   std::vector<Example> examples, std::string metric_id) {
  InvariantChecker check;
  for (auto& v : id_violations(id, "dataset id")) check.require(false, v);
  check.require(!examples.empty(), "examples must be non-empty");
  check.require(!metric_id.empty(), "metric id must be non-empty");
  std::unordered_set<std::string_view> seen;
  for (const auto& ex : examples) {
    for (auto& v : ex.violations(task_kind)) check.require(false, v);
    if (!seen.insert(ex.id).second)
      check.require(false, "example ids must be unique within the dataset (duplicate '" + ex.id + "')");
  }
  check.finish();
  return DatasetSpec{std::move(id), task_kind, std::move(examples), std::move(metric_id)};
}

DecodingParams DecodingParams::validated(double temperature, std::uint32_t max_tokens,
                                         double top_p) {
  InvariantChecker check;
  check.require(temperature >= 0.0, "temperature must be non-negative");
  check.require(max_tokens >= 1, "max_tokens must be positive");
  check.require(top_p > 0.0 && top_p <= 1.0, "top_p must lie in (0, 1]");
  check.finish();
  return DecodingParams{temperature, max_tokens, top_p};
}

ModelSpec ModelSpec::validated(std::string id, std::string endpoint, std::string model_name,
                               DecodingParams decoding, ModelRole role, std::string api_key_env) {
  InvariantChecker check;
  for (auto& v : id_violations(id, "model id")) check.require(false, v);
  check.require(!endpoint.empty(), "endpoint must be non-empty");
  check.require(!model_name.empty(), "model name must be non-empty");
  check.finish();
  return ModelSpec{std::move(id), std::move(endpoint), std::move(model_name), decoding, role,
                   std::move(api_key_env)};
}

void ensure_single_reference(std::span<const ModelSpec> models) {
  std::size_t count = 0;
  for (const auto& m : models)
    if (m.role == ModelRole::reference) ++count;
  if (count > 1)
    throw ValidationError({"at most one model per evaluation suite may carry role = reference"});
}

ReliabilityParams ReliabilityParams::validated(double epsilon, double delta,
                                               std::uint32_t reference_sample_count,
                                               std::uint32_t resamples_per_n, std::uint64_t seed) {
  InvariantChecker check;
  check.require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  check.require(delta > 0.0 && delta < 1.0, "delta must lie in (0, 1)");
  check.require(reference_sample_count >= 1, "reference sample count must be positive");
  check.require(resamples_per_n >= 1, "resamples per n must be positive");
  check.finish();
  return ReliabilityParams{epsilon, delta, reference_sample_count, resamples_per_n, seed};
}

ScoreMatrix ScoreMatrix::validated(std::vector<std::string> perturbation_ids,
                                   std::vector<std::string> example_ids,
                                   std::vector<double> values, std::string model_id,
                                   std::string dataset_id) {
  InvariantChecker check;
  check.require(!perturbation_ids.empty(), "matrix must have at least one row");
  check.require(!example_ids.empty(), "matrix must have at least one column");
  check.require(values.size() == perturbation_ids.size() * example_ids.size(),
                "value count must equal rows * columns");
  auto check_unique = [&check](const std::vector<std::string>& ids, std::string_view what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& id : ids) {
      for (auto& v : id_violations(id, what)) check.require(false, v);
      if (!seen.insert(id).second)
        check.require(false, std::string(what) + "s must be unique (duplicate '" + id + "')");
    }
  };
  check_unique(perturbation_ids, "perturbation id");
  check_unique(example_ids, "example id");
  for (double v : values) {
    if (!is_missing(v) && (v < 0.0 || v > 1.0)) {
      check.require(false, "every present value must lie in [0, 1]");
      break;
    }
  }
  check.finish();

  ScoreMatrix m;
  m.perturbation_ids_ = std::move(perturbation_ids);
  m.example_ids_ = std::move(example_ids);
  m.values_ = std::move(values);
  m.model_id_ = std::move(model_id);
  m.dataset_id_ = std::move(dataset_id);
  return m;
}

std::size_t ScoreMatrix::missing_in_row(std::size_t r) const {
  std::size_t count = 0;
  for (double v : row(r))
    if (is_missing(v)) ++count;
  return count;
}

std::size_t ScoreMatrix::missing_count() const {
  std::size_t count = 0;
  for (double v : values_)
    if (is_missing(v)) ++count;
  return count;
}

std::optional<std::size_t> ScoreMatrix::row_index(std::string_view perturbation_id) const {
  for (std::size_t r = 0; r < perturbation_ids_.size(); ++r)
    if (perturbation_ids_[r] == perturbation_id) return r;
  return std::nullopt;
}

bool ScoreMatrix::operator==(const ScoreMatrix& other) const {
  if (perturbation_ids_ != other.perturbation_ids_ || example_ids_ != other.example_ids_ ||
      model_id_ != other.model_id_ || dataset_id_ != other.dataset_id_ ||
      values_.size() != other.values_.size())
    return false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(values_[i]) != std::bit_cast<std::uint64_t>(other.values_[i])) {
      if (is_missing(values_[i]) && is_missing(other.values_[i])) continue;
      return false;
    }
  }
  return true;
}

MomentEstimate MomentEstimate::validated(double mean, double variance, std::uint64_t sample_count) {
  InvariantChecker check;
  check.require(variance >= 0.0, "variance must be non-negative");
  check.require(sample_count >= 1, "sample count must be positive");
  check.finish();
  return MomentEstimate{mean, variance, sample_count};
}

}  // namespace releval
