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

// In-process OpenAI-shaped chat-completions server for harness tests. The
// handler maps the user prompt to a reply; instrumentation tracks request
// counts and the high-water mark of concurrent in-flight requests.

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace mock {

struct Reply {
  int status = 200;
  std::string content;  // assistant message when status == 200
};

class ChatServer {
 public:
  using Handler = std::function<Reply(const std::string& prompt)>;

  explicit ChatServer(Handler handler, int delay_ms = 0)
      : handler_(std::move(handler)), delay_ms_(delay_ms) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      int now = ++in_flight_;
      int seen = max_in_flight_.load();
      while (now > seen && !max_in_flight_.compare_exchange_weak(seen, now)) {
      }
      ++requests_;

      std::string prompt;
      try {
        auto body = nlohmann::json::parse(req.body);
        prompt = body.at("messages").at(0).at("content").get<std::string>();
        std::lock_guard lock(mu_);
        last_payload_ = body.dump();
        last_auth_ = req.get_header_value("Authorization");
      } catch (...) {
        res.status = 400;
        --in_flight_;
        return;
      }

      // optional pause so overlapping requests actually overlap
      if (delay_ms_ > 0)
        std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms_));

      Reply reply;
      try {
        reply = handler_(prompt);
      } catch (...) {
        reply.status = 500;
      }
      res.status = reply.status;
      if (reply.status == 200) {
        nlohmann::json out{
            {"choices",
             nlohmann::json::array(
                 {{{"message", {{"role", "assistant"}, {"content", reply.content}}}}})},
            {"usage", {{"prompt_tokens", 7}, {"completion_tokens", 3}}}};
        res.set_content(out.dump(), "application/json");
      } else {
        res.set_content("{\"error\":\"induced\"}", "application/json");
      }
      --in_flight_;
    });

    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~ChatServer() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int requests() const { return requests_.load(); }
  int max_in_flight() const { return max_in_flight_.load(); }
  void reset_counters() {
    requests_ = 0;
    max_in_flight_ = 0;
  }
  std::string last_payload() const {
    std::lock_guard lock(mu_);
    return last_payload_;
  }
  std::string last_auth() const {
    std::lock_guard lock(mu_);
    return last_auth_;
  }

 private:
  httplib::Server server_;
  Handler handler_;
  int delay_ms_ = 0;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_{0};
  std::atomic<int> in_flight_{0};
  std::atomic<int> max_in_flight_{0};
  mutable std::mutex mu_;
  std::string last_payload_;
  std::string last_auth_;
};

}  // namespace mock
