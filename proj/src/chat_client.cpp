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

#include <cstdlib>
#include <thread>

#include "releval/harness.hpp"

#include <httplib.h>
#include <json.hpp>

namespace releval {

using nlohmann::json;

namespace {

// endpoint -> (scheme://host:port, path prefix)
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  auto path_start = endpoint.find('/', host_start);
  if (path_start == std::string::npos) return {endpoint, ""};
  std::string prefix = endpoint.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {endpoint.substr(0, path_start), prefix};
}

bool retryable_status(int status) {
  return status == 429 || (status >= 500 && status < 600);
}

}  // namespace

ChatClient::ChatClient(ModelSpec model, RetryPolicy retry)
    : model_(std::move(model)), retry_(retry) {
  auto [base, prefix] = split_endpoint(model_.endpoint);
  base_url_ = base;
  // honor explicit completion paths, default to the OpenAI layout otherwise
  if (prefix.ends_with("/chat/completions"))
    completions_path_ = prefix;
  else
    completions_path_ = prefix + "/v1/chat/completions";

  if (!model_.api_key_env.empty()) {
    const char* token = std::getenv(model_.api_key_env.c_str());
    if (token == nullptr || *token == '\0')
      throw EvalError(Errc::auth_failure,
                      "environment variable '" + model_.api_key_env + "' is not set");
    bearer_token_ = token;
  }
}

ChatResult ChatClient::complete(const std::string& prompt) const {
  json payload{{"model", model_.model_name},
               {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
               {"temperature", model_.decoding.temperature},
               {"top_p", model_.decoding.top_p},
               {"max_tokens", model_.decoding.max_tokens}};
  const std::string body = payload.dump();

  // deterministic jitter stream per prompt
  SplitMix64 jitter_rng(ResponseCache::key(model_.model_name, model_.decoding, prompt).lo);

  std::string last_error;
  for (int attempt = 1; attempt <= retry_.max_attempts; ++attempt) {
    if (attempt > 1) {
      double base_ms = static_cast<double>(retry_.initial_backoff.count());
      for (int i = 2; i < attempt; ++i) base_ms *= retry_.backoff_multiplier;
      base_ms *= 1.0 + retry_.jitter * (2.0 * jitter_rng.next_unit() - 1.0);
      std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(base_ms)));
    }

    httplib::Client client(base_url_);
    client.set_connection_timeout(retry_.connect_timeout);
    client.set_read_timeout(retry_.read_timeout);
    httplib::Headers headers;
    if (!bearer_token_.empty()) headers.emplace("Authorization", "Bearer " + bearer_token_);

    auto res = client.Post(completions_path_, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      throw EvalError(Errc::auth_failure, "endpoint returned HTTP " + std::to_string(res->status));
    if (retryable_status(res->status)) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw EvalError(Errc::endpoint_unreachable,
                      "endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body);

    try {
      json reply = json::parse(res->body);
      ChatResult out;
      out.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      if (reply.contains("usage")) {
        const auto& usage = reply["usage"];
        out.prompt_tokens = usage.value("prompt_tokens", std::uint64_t{0});
        out.completion_tokens = usage.value("completion_tokens", std::uint64_t{0});
      }
      return out;
    } catch (const json::exception& e) {
      throw EvalError(Errc::endpoint_unreachable,
                      std::string("malformed completion response: ") + e.what());
    }
  }
  throw EvalError(Errc::endpoint_unreachable,
                  "request failed after " + std::to_string(retry_.max_attempts) +
                      " attempts (" + last_error + ")");
}

}  // namespace releval
