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

#include <atomic>
#include <charconv>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "releval/harness.hpp"
#include "releval/report.hpp"

namespace releval {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kEntryMagic = "releval-cache/1";

std::string now_utc() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t parse_u64_field(const std::string& value, const std::string& path) {
  std::uint64_t out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw EvalError(Errc::malformed_file, path + ": bad integer field '" + value + "'");
  return out;
}

}  // namespace

ResponseCache::ResponseCache(std::string root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw EvalError(Errc::io_failure, "cannot create cache root '" + root_ + "'");
}

Hash128 ResponseCache::key(const std::string& model_name, const DecodingParams& decoding,
                           const std::string& prompt) {
  CanonicalEncoder enc;
  enc.put_str("releval-chat/1");
  enc.put_str(model_name);
  enc.put_f64(decoding.temperature);
  enc.put_u64(decoding.max_tokens);
  enc.put_f64(decoding.top_p);
  enc.put_str(prompt);
  return enc.hash();
}

std::string ResponseCache::fingerprint(const std::string& model_name,
                                       const DecodingParams& decoding,
                                       const std::string& prompt) {
  return "model=" + model_name + " temperature=" + format_double(decoding.temperature) +
         " top_p=" + format_double(decoding.top_p) +
         " max_tokens=" + std::to_string(decoding.max_tokens) +
         " prompt_bytes=" + std::to_string(prompt.size()) +
         " prompt_hash=" + murmur3_128(prompt).hex();
}

std::string ResponseCache::entry_path(const Hash128& key) const {
  std::string hex = key.hex();
  return root_ + "/" + hex.substr(0, 2) + "/" + hex + ".entry";
}

std::optional<CacheEntry> ResponseCache::lookup(const Hash128& key) const {
  std::string path = entry_path(key);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;

  std::string line;
  if (!std::getline(in, line) || line != kEntryMagic)
    throw EvalError(Errc::malformed_file, path + ": bad magic");

  CacheEntry entry;
  std::uint64_t response_bytes = 0;
  while (std::getline(in, line)) {
    if (line.empty()) break;
    auto colon = line.find(": ");
    if (colon == std::string::npos)
      throw EvalError(Errc::malformed_file, path + ": bad header line '" + line + "'");
    std::string field = line.substr(0, colon);
    std::string value = line.substr(colon + 2);
    if (field == "key") entry.key_hex = value;
    else if (field == "fingerprint") entry.request_fingerprint = value;
    else if (field == "prompt_tokens") entry.prompt_tokens = parse_u64_field(value, path);
    else if (field == "completion_tokens") entry.completion_tokens = parse_u64_field(value, path);
    else if (field == "created_at") entry.created_at = value;
    else if (field == "response_bytes") response_bytes = parse_u64_field(value, path);
    else throw EvalError(Errc::malformed_file, path + ": unknown field '" + field + "'");
  }
  entry.response_text.resize(response_bytes);
  if (response_bytes > 0) in.read(entry.response_text.data(), static_cast<std::streamsize>(response_bytes));
  if (in.gcount() != static_cast<std::streamsize>(response_bytes))
    throw EvalError(Errc::malformed_file, path + ": truncated response body");
  if (entry.key_hex != key.hex())
    throw EvalError(Errc::malformed_file, path + ": stored key does not match path");
  return entry;
}

void ResponseCache::store(const CacheEntry& entry) {
  std::string hex = entry.key_hex;
  fs::path dir = fs::path(root_) / hex.substr(0, 2);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw EvalError(Errc::io_failure, "cannot create cache shard '" + dir.string() + "'");

  fs::path final_path = dir / (hex + ".entry");
  if (fs::exists(final_path)) return;  // entries are immutable

  std::string body;
  body += kEntryMagic;
  body += "\nkey: " + entry.key_hex;
  body += "\nfingerprint: " + entry.request_fingerprint;
  body += "\nprompt_tokens: " + std::to_string(entry.prompt_tokens);
  body += "\ncompletion_tokens: " + std::to_string(entry.completion_tokens);
  body += "\ncreated_at: " + (entry.created_at.empty() ? now_utc() : entry.created_at);
  body += "\nresponse_bytes: " + std::to_string(entry.response_text.size());
  body += "\n\n";
  body += entry.response_text;

  // unique temp per writer, then atomic rename
  static std::atomic<std::uint64_t> writer_counter{0};
  fs::path tmp = dir / (hex + ".tmp" + std::to_string(writer_counter.fetch_add(1)));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw EvalError(Errc::io_failure, "cannot write '" + tmp.string() + "'");
    out << body;
    if (!out.flush()) throw EvalError(Errc::io_failure, "short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, final_path, ec);
  if (ec) throw EvalError(Errc::io_failure, "cannot rename cache entry into place");
}

}  // namespace releval
