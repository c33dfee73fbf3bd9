// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "code2api/compile_check.hpp"
#include "code2api/corpus.hpp"
#include "code2api/llm_backend.hpp"
#include "code2api/prompt_builder.hpp"

namespace httplib {
class Server;
}

// HTTP facade for single-snippet requests: POST /v1/apize, GET /v1/health.
namespace code2api::service {

/// Question and/or answer named by a Stack Overflow link.
struct PostRef {
  std::optional<std::int64_t> question_id;
  std::optional<std::int64_t> answer_id;

  friend bool operator==(const PostRef&, const PostRef&) = default;
};

/// Accepts /questions/<id>[/slug[/<answer id>]][#<answer id>], /q/<id> and
/// /a/<id> on stackoverflow.com. Returns nullopt for anything else.
std::optional<PostRef> parse_post_url(std::string_view url);

struct StackExchangeConfig {
  std::string api_base = "https://api.stackexchange.com/2.3";
  std::string site = "stackoverflow";
  std::string key;  // optional, raises the request quota
  std::chrono::milliseconds timeout{10000};
};

class FetchError : public std::runtime_error {
 public:
  enum class Kind { kNotFound, kUpstream };
  FetchError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Fetches the question and the chosen answer (the linked one, else the
/// accepted one, else the highest scored) through the public read API.
/// Language defaults to python for python-tagged questions, else java.
/// Throws FetchError, or corpus::NoCodeSnippet when the answer has no code.
corpus::SnippetContext fetch_context(const PostRef& ref, std::optional<Language> language,
                                     const StackExchangeConfig& config);

struct ServiceConfig {
  std::shared_ptr<llm::Backend> backend;
  llm::ClientOptions client_options;
  std::string model_name = std::string(llm::kDefaultModel);
  std::chrono::milliseconds deadline{60000};
  /// Exact origins, or prefixes ending in '*'. "*" alone allows any origin.
  std::vector<std::string> cors_origins{"chrome-extension://*", "moz-extension://*"};
  StackExchangeConfig stack_exchange;
  std::vector<compile::Toolchain> toolchains;  // empty: compile checks unavailable
  int max_rounds = compile::kDefaultMaxRounds;
  std::size_t prompt_budget = prompt::kDefaultBudget;
  std::size_t max_body_bytes = 1 << 20;
  /// One line per request; defaults to stderr.
  std::function<void(std::string_view)> log;
};

struct HttpResult {
  int status = 200;
  std::string body;  // JSON

  friend bool operator==(const HttpResult&, const HttpResult&) = default;
};

class Service : public std::enable_shared_from_this<Service> {
 public:
  static std::shared_ptr<Service> create(ServiceConfig config);

  /// Body: {language, question_title, question_body, answer_body,
  /// code_snippet, answer_id?, question_id?} or {url, language?}.
  /// 400 malformed, 404 post or snippet missing, 413 over budget, 502 backend
  /// or upstream failure, 504 past the deadline.
  HttpResult apize(std::string_view body, bool compile_check = false);
  /// {status, model, version}; never touches the backend.
  HttpResult health() const;
  /// The value for Access-Control-Allow-Origin, if the origin is allowed.
  std::optional<std::string> allowed_origin(std::string_view origin) const;

  const ServiceConfig& config() const { return config_; }
  void log(std::string_view line) const;

 private:
  explicit Service(ServiceConfig config);
  HttpResult apize_now(const std::string& body, bool compile_check);
  std::string complete_cached(const llm::CompletionRequest& request);

  ServiceConfig config_;
  std::shared_ptr<llm::Client> client_;
  std::mutex cache_mu_;
  std::map<std::string, std::string> cache_;
};

/// Binds the routes, CORS handling and request logging to an httplib server.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<Service> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void serve();
  void start_background();
  void stop();

 private:
  std::shared_ptr<Service> service_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace code2api::service
