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

#include "releval/core_json.hpp"

#include <cctype>
#include <fstream>

namespace releval {

using nlohmann::json;

namespace {

json file_to_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalError(Errc::io_failure, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw EvalError(Errc::malformed_file, path + ": " + e.what());
  }
  return j;
}

template <typename T>
T field(const json& j, const char* name) {
  if (!j.contains(name))
    throw EvalError(Errc::malformed_file, "missing field '" + std::string(name) + "'");
  try {
    return j.at(name).get<T>();
  } catch (const json::exception& e) {
    throw EvalError(Errc::malformed_file, "field '" + std::string(name) + "': " + e.what());
  }
}

template <typename T>
T field_or(const json& j, const char* name, T fallback) {
  if (!j.contains(name)) return fallback;
  return field<T>(j, name);
}

}  // namespace

json encode(const Example& x) {
  json j{{"id", x.id}, {"question", x.question}};
  if (!x.choices.empty()) j["choices"] = x.choices;
  if (std::holds_alternative<std::size_t>(x.gold))
    j["gold"] = std::get<std::size_t>(x.gold);
  else
    j["gold"] = std::get<std::string>(x.gold);
  return j;
}

Example decode_example(const json& j) {
  Example ex;
  ex.id = field<std::string>(j, "id");
  ex.question = field<std::string>(j, "question");
  ex.choices = field_or<std::vector<std::string>>(j, "choices", {});
  if (!j.contains("gold")) throw EvalError(Errc::malformed_file, "missing field 'gold'");
  if (j.at("gold").is_number_unsigned() || j.at("gold").is_number_integer())
    ex.gold = j.at("gold").get<std::size_t>();
  else
    ex.gold = j.at("gold").get<std::string>();
  return ex;
}

json encode(const DatasetSpec& x) {
  json examples = json::array();
  for (const auto& ex : x.examples) examples.push_back(encode(ex));
  return json{{"id", x.id},
              {"task", task_kind_name(x.task_kind)},
              {"metric", x.metric_id},
              {"examples", std::move(examples)}};
}

DatasetSpec decode_dataset(const json& j) {
  std::vector<Example> examples;
  if (!j.contains("examples") || !j.at("examples").is_array())
    throw EvalError(Errc::malformed_file, "missing field 'examples'");
  for (const auto& e : j.at("examples")) examples.push_back(decode_example(e));
  return DatasetSpec::validated(field<std::string>(j, "id"),
                                task_kind_from_name(field<std::string>(j, "task")),
                                std::move(examples), field<std::string>(j, "metric"));
}

json encode(const DecodingParams& x) {
  return json{{"temperature", x.temperature}, {"max_tokens", x.max_tokens}, {"top_p", x.top_p}};
}

namespace {

// Known serving-default temperatures for popular hosted model families.
// Anything unlisted defaults to greedy decoding. An explicit temperature in
// the model file always wins.
double default_temperature(std::string_view model_name) {
  std::string lower(model_name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  struct Entry {
    std::string_view needle;
    double temperature;
  };
  static constexpr Entry table[] = {
      {"gpt-4o", 1.0},
      {"deepseek", 0.3},
      {"grok", 0.1},
  };
  for (const auto& entry : table)
    if (lower.find(entry.needle) != std::string::npos) return entry.temperature;
  return 0.0;
}

}  // namespace

DecodingParams decode_decoding(const json& j, std::string_view model_name) {
  return DecodingParams::validated(
      field_or<double>(j, "temperature", default_temperature(model_name)),
      field_or<std::uint32_t>(j, "max_tokens", 256), field_or<double>(j, "top_p", 1.0));
}

DecodingParams decode_decoding(const json& j) { return decode_decoding(j, ""); }

json encode(const ModelSpec& x) {
  return json{{"id", x.id},
              {"endpoint", x.endpoint},
              {"model_name", x.model_name},
              {"decoding", encode(x.decoding)},
              {"role", model_role_name(x.role)},
              {"api_key_env", x.api_key_env}};
}

ModelSpec decode_model(const json& j) {
  std::string model_name = field<std::string>(j, "model_name");
  DecodingParams decoding = decode_decoding(
      j.contains("decoding") ? j.at("decoding") : json::object(), model_name);
  return ModelSpec::validated(field<std::string>(j, "id"), field<std::string>(j, "endpoint"),
                              std::move(model_name), decoding,
                              model_role_from_name(field_or<std::string>(j, "role", "candidate")),
                              field_or<std::string>(j, "api_key_env", ""));
}

json encode(const ReliabilityParams& x) {
  return json{{"epsilon", x.epsilon},
              {"delta", x.delta},
              {"reference_sample_count", x.reference_sample_count},
              {"resamples_per_n", x.resamples_per_n},
              {"seed", x.seed}};
}

ReliabilityParams decode_reliability_params(const json& j) {
  return ReliabilityParams::validated(
      field<double>(j, "epsilon"), field<double>(j, "delta"),
      field<std::uint32_t>(j, "reference_sample_count"),
      field<std::uint32_t>(j, "resamples_per_n"), field<std::uint64_t>(j, "seed"));
}

json encode(const ScoreMatrix& x) {
  json values = json::array();
  for (double v : x.values()) {
    if (ScoreMatrix::is_missing(v))
      values.push_back(nullptr);
    else
      values.push_back(v);
  }
  return json{{"perturbation_ids", x.perturbation_ids()},
              {"example_ids", x.example_ids()},
              {"values", std::move(values)},
              {"model_id", x.model_id()},
              {"dataset_id", x.dataset_id()}};
}

ScoreMatrix decode_matrix(const json& j) {
  std::vector<double> values;
  for (const auto& v : j.at("values")) {
    if (v.is_null())
      values.push_back(ScoreMatrix::missing());
    else
      values.push_back(v.get<double>());
  }
  return ScoreMatrix::validated(field<std::vector<std::string>>(j, "perturbation_ids"),
                                field<std::vector<std::string>>(j, "example_ids"),
                                std::move(values), field<std::string>(j, "model_id"),
                                field<std::string>(j, "dataset_id"));
}

json encode(const MomentEstimate& x) {
  return json{{"mean", x.mean}, {"variance", x.variance}, {"sample_count", x.sample_count}};
}

MomentEstimate decode_moment_estimate(const json& j) {
  return MomentEstimate::validated(field<double>(j, "mean"), field<double>(j, "variance"),
                                   field<std::uint64_t>(j, "sample_count"));
}

DatasetSpec load_dataset(const std::string& path) { return decode_dataset(file_to_json(path)); }

ModelSpec load_model(const std::string& path) { return decode_model(file_to_json(path)); }

}  // namespace releval
