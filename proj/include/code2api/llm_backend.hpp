// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Chat-completion backends: a live HTTPS client, a fixture-replay mock, a
// scripted backend for failure schedules, and a Client wrapper that adds the
// token-limit precheck, retries, rate limiting and the in-flight bound.
namespace code2api::llm {

inline constexpr std::string_view kDefaultModel = "gpt-3.5-turbo";
inline constexpr std::size_t kDefaultMaxTokens = 4096;
inline constexpr std::size_t kDefaultConcurrency = 4;
inline constexpr std::size_t kDefaultMaxOutputTokens = 700;

struct CompletionRequest {
  std::string model_name = std::string(kDefaultModel);
  double temperature = 0.0;
  std::string prompt_text;
  std::size_t max_output_tokens = kDefaultMaxOutputTokens;
  /// Routing key for fixture-backed backends; ignored by live providers.
  std::int64_t answer_id = 0;
};

struct CompletionResponse {
  std::string raw_text;
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t latency_ms = 0;
  std::string provider_id;
  /// The provider stopped at the output limit. Callers must not treat the
  /// text as a complete answer.
  bool truncated = false;
  /// Attempts beyond the first.
  int retries = 0;
};

class BackendError : public std::runtime_error {
 public:
  enum class Kind {
    kOverTokenLimit,
    kTransport,
    kRateLimited,
    kAuthFailure,
    kNotFound,
    kProvider,  // the provider rejected the request; never retried
  };
  BackendError(Kind kind, const std::string& message,
               std::optional<std::chrono::milliseconds> retry_after = std::nullopt)
      : std::runtime_error(message), kind_(kind), retry_after_(retry_after) {}
  Kind kind() const noexcept { return kind_; }
  std::optional<std::chrono::milliseconds> retry_after() const noexcept { return retry_after_; }

 private:
  Kind kind_;
  std::optional<std::chrono::milliseconds> retry_after_;
};

std::string_view to_string(BackendError::Kind kind);

class Backend {
 public:
  virtual ~Backend() = default;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
  virtual std::string provider_id() const = 0;
};

/// Throws OverTokenLimit when the estimated prompt plus the requested output
/// exceeds `max_tokens`.
void check_token_limit(const CompletionRequest& request, std::size_t max_tokens);

/// Replays canned responses by answer_id. Unknown ids throw NotFound.
class MockBackend : public Backend {
 public:
  explicit MockBackend(std::map<std::int64_t, std::string> fixtures);
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string provider_id() const override { return "mock"; }
  std::size_t calls() const;

 private:
  std::map<std::int64_t, std::string> fixtures_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
};

/// Fixture file: a JSON object mapping decimal answer ids to response text.
std::map<std::int64_t, std::string> load_fixtures(const std::filesystem::path& path);
void store_fixtures(const std::map<std::int64_t, std::string>& fixtures,
                    const std::filesystem::path& path);

/// Plays a fixed schedule: each call consumes the next step, which either
/// throws or returns. The last step repeats once the schedule runs out.
class ScriptedBackend : public Backend {
 public:
  struct Step {
    std::optional<BackendError::Kind> error;
    std::string text;
    bool truncated = false;
    std::optional<std::chrono::milliseconds> retry_after;
  };
  static Step fail(BackendError::Kind kind,
                   std::optional<std::chrono::milliseconds> retry_after = std::nullopt);
  static Step reply(std::string text, bool truncated = false);

  explicit ScriptedBackend(std::vector<Step> steps);
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string provider_id() const override { return "scripted"; }
  std::size_t calls() const;
  /// Prompts seen so far, in call order.
  std::vector<std::string> prompts() const;

 private:
  std::vector<Step> steps_;
  mutable std::mutex mu_;
  std::size_t calls_ = 0;
  std::vector<std::string> prompts_;
};

struct LiveConfig {
  std::string api_key;
  std::string base_url = "https://api.openai.com/v1";
  std::chrono::milliseconds timeout{60000};
};

/// Chat-completions over HTTP(S) with bearer auth. Maps 401/403 to
/// AuthFailure, 429 to RateLimited (Retry-After honored), 5xx and connection
/// failures to Transport, a context-length rejection to OverTokenLimit and
/// other 4xx to Provider. finish_reason "length" sets `truncated`.
class ChatCompletionsBackend : public Backend {
 public:
  explicit ChatCompletionsBackend(LiveConfig config);
  CompletionResponse complete(const CompletionRequest& request) override;
  std::string provider_id() const override;

 private:
  LiveConfig config_;
  std::string scheme_host_port_;
  std::string path_prefix_;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds base_delay{500};
  double factor = 2.0;
};

/// Refills `per_minute` tokens per minute up to `burst`. Zero disables it.
class TokenBucket {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;
  TokenBucket(double per_minute, double burst, Clock clock = {});
  /// Takes one token and returns how long the caller must wait before using it.
  std::chrono::milliseconds reserve();

 private:
  double per_ms_;
  double burst_;
  double tokens_;
  Clock clock_;
  std::chrono::steady_clock::time_point last_;
  std::mutex mu_;
};

struct ClientOptions {
  std::size_t max_tokens = kDefaultMaxTokens;
  std::size_t concurrency = kDefaultConcurrency;
  double requests_per_minute = 0;  // 0 = unlimited
  RetryPolicy retry;
  /// Injected so tests can observe delays without sleeping.
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Shareable across threads. Retries Transport failures with exponential
/// backoff and RateLimited failures after their retry-after delay; every
/// other error is surfaced at once.
class Client {
 public:
  Client(std::shared_ptr<Backend> backend, ClientOptions options = {});
  CompletionResponse complete(const CompletionRequest& request);
  const ClientOptions& options() const { return options_; }
  std::string provider_id() const { return backend_->provider_id(); }

 private:
  void acquire();
  void release();

  std::shared_ptr<Backend> backend_;
  ClientOptions options_;
  TokenBucket bucket_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t in_flight_ = 0;
};

/// Values read from CODE2API_API_KEY, CODE2API_MODEL, CODE2API_BASE_URL,
/// CODE2API_MAX_TOKENS and CODE2API_CONCURRENCY.
struct EnvConfig {
  std::string api_key;
  std::string model = std::string(kDefaultModel);
  std::string base_url = "https://api.openai.com/v1";
  std::size_t max_tokens = kDefaultMaxTokens;
  std::size_t concurrency = kDefaultConcurrency;
};

/// `getenv` is injectable for tests. Throws std::invalid_argument on
/// non-numeric or zero limits.
EnvConfig config_from_env(const std::function<const char*(const char*)>& getenv = {});

/// Masks all but the last four characters.
std::string redact(std::string_view secret);

}  // namespace code2api::llm
