// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/llm_backend.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "code2api/prompt_builder.hpp"
#include "code2api/text.hpp"
#include "json.hpp"

namespace code2api::llm {

namespace {

using Kind = BackendError::Kind;
using std::chrono::milliseconds;

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<milliseconds>(std::chrono::steady_clock::now() - start)
      .count();
}

std::size_t parse_positive(const char* name, const char* value) {
  std::size_t v = 0;
  const std::string_view s = value;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    throw std::invalid_argument(std::string(name) + " must be a positive integer, got '" +
                                std::string(s) + "'");
  }
  return v;
}

std::optional<milliseconds> parse_retry_after(const std::string& header) {
  if (header.empty()) return std::nullopt;
  double seconds = 0;
  try {
    std::size_t used = 0;
    seconds = std::stod(header, &used);
    if (used != header.size() || seconds < 0) return std::nullopt;
  } catch (const std::exception&) {
    return std::nullopt;  // HTTP-date form is not used by chat providers
  }
  return milliseconds(static_cast<std::int64_t>(std::ceil(seconds * 1000)));
}

}  // namespace

std::string_view to_string(BackendError::Kind kind) {
  switch (kind) {
    case Kind::kOverTokenLimit: return "OverTokenLimit";
    case Kind::kTransport: return "Transport";
    case Kind::kRateLimited: return "RateLimited";
    case Kind::kAuthFailure: return "AuthFailure";
    case Kind::kNotFound: return "NotFound";
    case Kind::kProvider: return "Provider";
  }
  return "Unknown";
}

void check_token_limit(const CompletionRequest& request, std::size_t max_tokens) {
  const std::size_t prompt = prompt::estimate_tokens(request.prompt_text);
  if (prompt + request.max_output_tokens > max_tokens) {
    throw BackendError(Kind::kOverTokenLimit,
                       "prompt of about " + std::to_string(prompt) + " tokens plus " +
                           std::to_string(request.max_output_tokens) +
                           " output tokens exceeds the limit of " + std::to_string(max_tokens));
  }
}

// ---------------------------------------------------------------- mock

MockBackend::MockBackend(std::map<std::int64_t, std::string> fixtures)
    : fixtures_(std::move(fixtures)) {}

CompletionResponse MockBackend::complete(const CompletionRequest& request) {
  {
    std::lock_guard lock(mu_);
    ++calls_;
  }
  const auto it = fixtures_.find(request.answer_id);
  if (it == fixtures_.end()) {
    throw BackendError(Kind::kNotFound,
                       "no fixture for answer " + std::to_string(request.answer_id));
  }
  CompletionResponse r;
  r.raw_text = it->second;
  r.prompt_tokens = static_cast<std::int64_t>(prompt::estimate_tokens(request.prompt_text));
  r.completion_tokens = static_cast<std::int64_t>(prompt::estimate_tokens(r.raw_text));
  r.provider_id = provider_id();
  return r;
}

std::size_t MockBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::map<std::int64_t, std::string> load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixtures " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("invalid fixtures " + path.string() + ": " + e.what());
  }
  if (!j.is_object()) throw std::runtime_error("fixtures must be a JSON object: " + path.string());
  std::map<std::int64_t, std::string> out;
  for (const auto& [key, value] : j.items()) {
    std::int64_t id = 0;
    const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
    if (ec != std::errc() || ptr != key.data() + key.size() || !value.is_string()) {
      throw std::runtime_error("bad fixture entry '" + key + "' in " + path.string());
    }
    out.emplace(id, value.get<std::string>());
  }
  return out;
}

void store_fixtures(const std::map<std::int64_t, std::string>& fixtures,
                    const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, text] : fixtures) j[std::to_string(id)] = text;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write fixtures " + path.string());
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- scripted

ScriptedBackend::Step ScriptedBackend::fail(BackendError::Kind kind,
                                            std::optional<milliseconds> retry_after) {
  Step s;
  s.error = kind;
  s.retry_after = retry_after;
  return s;
}

ScriptedBackend::Step ScriptedBackend::reply(std::string text, bool truncated) {
  Step s;
  s.text = std::move(text);
  s.truncated = truncated;
  return s;
}

ScriptedBackend::ScriptedBackend(std::vector<Step> steps) : steps_(std::move(steps)) {
  if (steps_.empty()) throw std::invalid_argument("scripted backend needs at least one step");
}

CompletionResponse ScriptedBackend::complete(const CompletionRequest& request) {
  Step step;
  {
    std::lock_guard lock(mu_);
    step = steps_[std::min(calls_, steps_.size() - 1)];
    ++calls_;
    prompts_.push_back(request.prompt_text);
  }
  if (step.error) {
    throw BackendError(*step.error, "scripted " + std::string(to_string(*step.error)),
                       step.retry_after);
  }
  CompletionResponse r;
  r.raw_text = std::move(step.text);
  r.truncated = step.truncated;
  r.prompt_tokens = static_cast<std::int64_t>(prompt::estimate_tokens(request.prompt_text));
  r.completion_tokens = static_cast<std::int64_t>(prompt::estimate_tokens(r.raw_text));
  r.provider_id = provider_id();
  return r;
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mu_);
  return calls_;
}

std::vector<std::string> ScriptedBackend::prompts() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

// ---------------------------------------------------------------- live

ChatCompletionsBackend::ChatCompletionsBackend(LiveConfig config) : config_(std::move(config)) {
  if (config_.api_key.empty()) {
    throw BackendError(Kind::kAuthFailure, "CODE2API_API_KEY is not set");
  }
  std::string url = config_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw std::invalid_argument("base URL needs a scheme: " + config_.base_url);
  }
  const std::size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
}

std::string ChatCompletionsBackend::provider_id() const { return "chat:" + scheme_host_port_; }

CompletionResponse ChatCompletionsBackend::complete(const CompletionRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  httplib::Client cli(scheme_host_port_);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
  cli.set_connection_timeout(secs, 0);
  cli.set_read_timeout(secs, 0);
  cli.set_write_timeout(secs, 0);
  cli.set_bearer_token_auth(config_.api_key);

  const nlohmann::json body = {
      {"model", request.model_name},
      {"temperature", request.temperature},
      {"max_tokens", request.max_output_tokens},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt_text}}})},
  };
  auto res = cli.Post(path_prefix_ + "/chat/completions", body.dump(), "application/json");
  if (!res) {
    throw BackendError(Kind::kTransport, "request failed: " + httplib::to_string(res.error()));
  }
  const int status = res->status;
  std::string provider_message;
  nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
  if (!reply.is_discarded() && reply.contains("error") && reply["error"].is_object()) {
    provider_message = reply["error"].value("message", "");
  }
  const std::string detail = "HTTP " + std::to_string(status) +
                             (provider_message.empty() ? "" : ": " + provider_message);
  if (status == 401 || status == 403) throw BackendError(Kind::kAuthFailure, detail);
  if (status == 429) {
    throw BackendError(Kind::kRateLimited, detail,
                       parse_retry_after(res->get_header_value("Retry-After")));
  }
  if (status >= 500) throw BackendError(Kind::kTransport, detail);
  if (status >= 400) {
    const std::string code =
        reply.is_discarded() || !reply.contains("error") || !reply["error"].is_object()
            ? ""
            : reply["error"].value("code", "");
    if (code == "context_length_exceeded" ||
        text::icontains(provider_message, "maximum context length")) {
      throw BackendError(Kind::kOverTokenLimit, detail);
    }
    throw BackendError(Kind::kProvider, detail);
  }
  if (reply.is_discarded()) throw BackendError(Kind::kProvider, "response is not JSON");

  CompletionResponse r;
  try {
    const auto& choice = reply.at("choices").at(0);
    r.raw_text = choice.at("message").at("content").get<std::string>();
    r.truncated = choice.value("finish_reason", "") == "length";
    if (reply.contains("usage")) {
      r.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
      r.completion_tokens = reply["usage"].value("completion_tokens", 0);
    }
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(Kind::kProvider, std::string("unexpected response shape: ") + e.what());
  }
  r.latency_ms = elapsed_ms(start);
  r.provider_id = provider_id();
  return r;
}

// ---------------------------------------------------------------- client

TokenBucket::TokenBucket(double per_minute, double burst, Clock clock)
    : per_ms_(per_minute / 60000.0),
      burst_(std::max(1.0, burst)),
      tokens_(std::max(1.0, burst)),
      clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
      last_(clock_()) {}

milliseconds TokenBucket::reserve() {
  if (per_ms_ <= 0) return milliseconds(0);
  std::lock_guard lock(mu_);
  const auto now = clock_();
  const double dt = std::chrono::duration<double, std::milli>(now - last_).count();
  last_ = now;
  tokens_ = std::min(burst_, tokens_ + dt * per_ms_);
  tokens_ -= 1.0;
  if (tokens_ >= 0) return milliseconds(0);
  return milliseconds(static_cast<std::int64_t>(std::ceil(-tokens_ / per_ms_)));
}

Client::Client(std::shared_ptr<Backend> backend, ClientOptions options)
    : backend_(std::move(backend)),
      options_(std::move(options)),
      bucket_(options_.requests_per_minute, std::max(1.0, options_.requests_per_minute / 60.0)) {
  if (!backend_) throw std::invalid_argument("client needs a backend");
  if (options_.concurrency == 0) throw std::invalid_argument("concurrency must be positive");
  if (options_.retry.max_attempts < 1) throw std::invalid_argument("max_attempts must be >= 1");
  if (!options_.sleep) {
    options_.sleep = [](milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

void Client::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return in_flight_ < options_.concurrency; });
  ++in_flight_;
}

void Client::release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

CompletionResponse Client::complete(const CompletionRequest& request) {
  check_token_limit(request, options_.max_tokens);
  const auto start = std::chrono::steady_clock::now();
  milliseconds delay = options_.retry.base_delay;
  for (int attempt = 1;; ++attempt) {
    if (const auto wait = bucket_.reserve(); wait.count() > 0) options_.sleep(wait);
    acquire();
    try {
      CompletionResponse r = backend_->complete(request);
      release();
      r.retries = attempt - 1;
      if (r.latency_ms == 0) r.latency_ms = elapsed_ms(start);
      return r;
    } catch (const BackendError& e) {
      release();
      const bool retryable = e.kind() == Kind::kTransport || e.kind() == Kind::kRateLimited;
      if (!retryable || attempt >= options_.retry.max_attempts) throw;
      if (e.kind() == Kind::kRateLimited && e.retry_after()) {
        options_.sleep(*e.retry_after());
      } else {
        options_.sleep(delay);
        delay = milliseconds(
            static_cast<std::int64_t>(static_cast<double>(delay.count()) * options_.retry.factor));
      }
    } catch (...) {
      release();
      throw;
    }
  }
}

// ---------------------------------------------------------------- config

EnvConfig config_from_env(const std::function<const char*(const char*)>& getenv) {
  const auto get = [&](const char* name) -> const char* {
    return getenv ? getenv(name) : std::getenv(name);
  };
  EnvConfig c;
  if (const char* v = get("CODE2API_API_KEY")) c.api_key = v;
  if (const char* v = get("CODE2API_MODEL"); v && *v) c.model = v;
  if (const char* v = get("CODE2API_BASE_URL"); v && *v) c.base_url = v;
  if (const char* v = get("CODE2API_MAX_TOKENS")) c.max_tokens = parse_positive("CODE2API_MAX_TOKENS", v);
  if (const char* v = get("CODE2API_CONCURRENCY")) {
    c.concurrency = parse_positive("CODE2API_CONCURRENCY", v);
  }
  return c;
}

std::string redact(std::string_view secret) {
  if (secret.size() <= 4) return std::string(secret.size(), '*');
  return std::string(secret.size() - 4, '*') + std::string(secret.substr(secret.size() - 4));
}

}  // namespace code2api::llm
