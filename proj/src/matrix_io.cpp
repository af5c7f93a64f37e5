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

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "releval/report.hpp"

#include <json.hpp>

namespace releval {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw EvalError(Errc::io_failure, "cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw EvalError(Errc::io_failure, "short write to '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw EvalError(Errc::io_failure, "cannot rename '" + tmp + "' to '" + path + "'");
}

namespace {

[[noreturn]] void malformed(const std::string& path, std::size_t line, const std::string& reason) {
  throw EvalError(Errc::malformed_file,
                  path + " line " + std::to_string(line) + ": " + reason);
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

}  // namespace

void write_matrix(const ScoreMatrix& matrix, const std::string& path) {
  std::string out;
  if (!matrix.model_id().empty()) out += "# model: " + matrix.model_id() + "\n";
  if (!matrix.dataset_id().empty()) out += "# dataset: " + matrix.dataset_id() + "\n";
  out += "perturbation_id";
  for (const auto& id : matrix.example_ids()) {
    out += ',';
    out += id;
  }
  out += '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    out += matrix.perturbation_ids()[r];
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      out += ',';
      double v = matrix.at(r, c);
      if (!ScoreMatrix::is_missing(v)) out += format_double(v);
    }
    out += '\n';
  }
  write_text_atomic(path, out);
}

ScoreMatrix read_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EvalError(Errc::io_failure, "cannot open '" + path + "'");

  std::string model_id;
  std::string dataset_id;
  std::vector<std::string> example_ids;
  std::vector<std::string> perturbation_ids;
  std::vector<double> values;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("# model: ", 0) == 0) model_id = line.substr(9);
      if (line.rfind("# dataset: ", 0) == 0) dataset_id = line.substr(11);
      continue;
    }
    auto fields = split_fields(line);
    if (!header_seen) {
      if (fields.empty() || fields[0] != "perturbation_id")
        malformed(path, line_no, "header row must start with 'perturbation_id'");
      if (fields.size() < 2) malformed(path, line_no, "header row lists no example ids");
      example_ids.assign(fields.begin() + 1, fields.end());
      header_seen = true;
      continue;
    }
    if (fields.size() != example_ids.size() + 1)
      malformed(path, line_no,
                "expected " + std::to_string(example_ids.size() + 1) + " fields, got " +
                    std::to_string(fields.size()));
    perturbation_ids.push_back(fields[0]);
    for (std::size_t c = 1; c < fields.size(); ++c) {
      const std::string& f = fields[c];
      if (f.empty()) {
        values.push_back(ScoreMatrix::missing());
        continue;
      }
      double v{};
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size())
        malformed(path, line_no, "unparseable value '" + f + "'");
      if (v < 0.0 || v > 1.0)
        malformed(path, line_no, "value " + f + " outside [0, 1]");
      values.push_back(v);
    }
  }
  if (!header_seen) malformed(path, line_no, "missing header row");
  if (perturbation_ids.empty()) malformed(path, line_no, "matrix has no data rows");

  try {
    return ScoreMatrix::validated(std::move(perturbation_ids), std::move(example_ids),
                                  std::move(values), std::move(model_id), std::move(dataset_id));
  } catch (const ValidationError& e) {
    for (const auto& v : e.violations())
      if (v.find("unique") != std::string::npos)
        throw EvalError(Errc::duplicate_id, path + ": " + v);
    throw EvalError(Errc::malformed_file, path + ": " + std::string(e.what()));
  }
}

std::string manifest_path(const std::string& matrix_path) {
  return matrix_path + ".manifest.json";
}

namespace {

json encode_config(const PerturbationConfig& c) {
  return json{{"paraphrase_index", c.paraphrase_index},
              {"enumerator_index", c.enumerator_index},
              {"separator_index", c.separator_index},
              {"permute_choices", c.permute_choices},
              {"choice_perm_index", c.choice_perm_index},
              {"fewshot_selection", c.fewshot_selection},
              {"qa_marker_index", c.qa_marker_index},
              {"example_subset", c.example_subset},
              {"config_id", c.config_id}};
}

PerturbationConfig decode_config(const json& j) {
  PerturbationConfig c;
  c.paraphrase_index = j.at("paraphrase_index").get<std::uint32_t>();
  c.enumerator_index = j.at("enumerator_index").get<std::uint32_t>();
  c.separator_index = j.at("separator_index").get<std::uint32_t>();
  c.permute_choices = j.at("permute_choices").get<bool>();
  c.choice_perm_index = j.at("choice_perm_index").get<std::uint64_t>();
  c.fewshot_selection = j.at("fewshot_selection").get<std::vector<std::uint32_t>>();
  c.qa_marker_index = j.at("qa_marker_index").get<std::uint32_t>();
  c.example_subset = j.at("example_subset").get<std::vector<std::uint32_t>>();
  c.config_id = j.at("config_id").get<std::string>();
  return c;
}

}  // namespace

void write_manifest(const RunManifest& manifest, const std::string& path) {
  json configs = json::object();
  for (const auto& [pid, config] : manifest.configs) configs[pid] = encode_config(config);
  json j{{"version", manifest.version},
         {"model_id", manifest.model_id},
         {"model_name", manifest.model_name},
         {"dataset_id", manifest.dataset_id},
         {"scorer_id", manifest.scorer_id},
         {"seed", manifest.seed},
         {"decoding",
          {{"temperature", manifest.decoding.temperature},
           {"max_tokens", manifest.decoding.max_tokens},
           {"top_p", manifest.decoding.top_p}}},
         {"configs", std::move(configs)}};
  write_text_atomic(path, j.dump(2) + "\n");
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EvalError(Errc::io_failure, "cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw EvalError(Errc::malformed_file, path + ": " + e.what());
  }
  try {
    RunManifest m;
    m.version = j.at("version").get<std::string>();
    m.model_id = j.at("model_id").get<std::string>();
    m.model_name = j.at("model_name").get<std::string>();
    m.dataset_id = j.at("dataset_id").get<std::string>();
    m.scorer_id = j.at("scorer_id").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& d = j.at("decoding");
    m.decoding = DecodingParams::validated(d.at("temperature").get<double>(),
                                           d.at("max_tokens").get<std::uint32_t>(),
                                           d.at("top_p").get<double>());
    for (const auto& [pid, cfg] : j.at("configs").items())
      m.configs.emplace_back(pid, decode_config(cfg));
    return m;
  } catch (const json::exception& e) {
    throw EvalError(Errc::malformed_file, path + ": " + e.what());
  }
}

}  // namespace releval
