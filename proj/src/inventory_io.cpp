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
#include <charconv>
#include <fstream>
#include <sstream>

#include "releval/perturb.hpp"

namespace releval {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& reason) {
  throw EvalError(Errc::malformed_file, "inventory line " + std::to_string(line) + ": " + reason);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::string unescape(std::string_view s, std::size_t line) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (i + 1 >= s.size()) fail(line, "dangling backslash");
    switch (s[++i]) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 's': out += ' '; break;
      case '\\': out += '\\'; break;
      case '"': out += '"'; break;
      case '|': out += '|'; break;
      default: fail(line, std::string("unknown escape '\\") + s[i] + "'");
    }
  }
  return out;
}

// trimmed value, optionally quoted; escapes are processed after unquoting
std::string parse_value(std::string_view raw, std::size_t line) {
  std::string_view v = trim(raw);
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  return unescape(v, line);
}

// split `<q> | <a>` at the first '|' outside quotes
QaMarkerPair parse_marker_pair(std::string_view raw, std::size_t line) {
  bool in_quotes = false;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\\') {
      ++i;
      continue;
    }
    if (c == '"') in_quotes = !in_quotes;
    if (c == '|' && !in_quotes)
      return {parse_value(raw.substr(0, i), line), parse_value(raw.substr(i + 1), line)};
  }
  fail(line, "qa_marker needs the form <question marker> | <answer marker>");
}

std::uint32_t parse_u32(std::string_view raw, std::size_t line) {
  std::string_view v = trim(raw);
  std::uint32_t out{};
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    fail(line, "expected a non-negative integer, got '" + std::string(v) + "'");
  return out;
}

std::string gold_text_of(const Example& ex) {
  if (std::holds_alternative<std::string>(ex.gold)) return std::get<std::string>(ex.gold);
  return ex.choices.at(std::get<std::size_t>(ex.gold));
}

}  // namespace

DimensionInventory parse_inventory(std::string_view text, const DatasetSpec& dataset) {
  DimensionInventory inv;
  inv.enumerators.clear();
  inv.separators.clear();
  inv.qa_markers.clear();
  bool k_set = false;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    std::string_view raw_line =
        end == std::string_view::npos ? text.substr(pos) : text.substr(pos, end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string_view raw_value = line.substr(eq + 1);

    if (key == "paraphrase") {
      inv.instruction_paraphrases.push_back(parse_value(raw_value, line_no));
    } else if (key == "enumerator") {
      try {
        inv.enumerators.push_back(enumerator_style_from_name(parse_value(raw_value, line_no)));
      } catch (const EvalError& e) {
        fail(line_no, e.what());
      }
    } else if (key == "separator") {
      inv.separators.push_back(parse_value(raw_value, line_no));
    } else if (key == "choice_order") {
      std::string v = parse_value(raw_value, line_no);
      if (v == "identity")
        inv.choice_order_policy = ChoiceOrderPolicy::identity_only;
      else if (v == "permute")
        inv.choice_order_policy = ChoiceOrderPolicy::all_permutations;
      else
        fail(line_no, "choice_order must be 'identity' or 'permute'");
    } else if (key == "qa_marker") {
      inv.qa_markers.push_back(parse_marker_pair(raw_value, line_no));
    } else if (key == "fewshot_k") {
      inv.fewshot_k = parse_u32(raw_value, line_no);
      k_set = true;
    } else if (key == "fewshot_example") {
      std::string id = parse_value(raw_value, line_no);
      auto it = std::find_if(dataset.examples.begin(), dataset.examples.end(),
                             [&](const Example& ex) { return ex.id == id; });
      if (it == dataset.examples.end())
        fail(line_no, "few-shot reference '" + id + "' not found in dataset '" + dataset.id + "'");
      inv.fewshot_pool.push_back({*it, gold_text_of(*it)});
    } else if (key == "example_subset_size") {
      inv.example_subset_size = parse_u32(raw_value, line_no);
    } else if (key == "task") {
      std::string v = parse_value(raw_value, line_no);
      if (v != task_kind_name(dataset.task_kind))
        fail(line_no, "inventory task '" + v + "' does not match dataset task '" +
                          std::string(task_kind_name(dataset.task_kind)) + "'");
    } else {
      fail(line_no, "unknown key '" + key + "'");
    }
  }

  if (inv.enumerators.empty()) inv.enumerators = default_enumerators();
  if (inv.separators.empty()) inv.separators = default_separators();
  if (inv.qa_markers.empty()) inv.qa_markers = default_qa_markers();
  if (!k_set)
    inv.fewshot_k = std::min<std::uint32_t>(5, static_cast<std::uint32_t>(inv.fewshot_pool.size()));
  return inv;
}

DimensionInventory load_inventory(const std::string& path, const DatasetSpec& dataset) {
  std::ifstream in(path);
  if (!in) throw EvalError(Errc::io_failure, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_inventory(buffer.str(), dataset);
}

}  // namespace releval
