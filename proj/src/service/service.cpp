// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/service.hpp"

#include <httplib.h>

#include <future>
#include <iostream>
#include <regex>

#include "code2api/api_extractor.hpp"
#include "code2api/eval_harness.hpp"
#include "code2api/json_io.hpp"
#include "code2api/text.hpp"
#include "code2api/version.hpp"
#include "json.hpp"

namespace code2api::service {

using nlohmann::json;

namespace {

// Carries an HTTP status out of the request pipeline.
struct Reject {
  int status;
  std::string code;
  std::string message;
};

HttpResult error_result(int status, std::string_view code, std::string_view message) {
  return {status, json{{"error", {{"code", code}, {"message", message}}}}.dump()};
}

std::pair<std::string, std::string> split_base(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start == std::string::npos) return {url, ""};
  return {url.substr(0, path_start), url.substr(path_start)};
}

json get_items(const StackExchangeConfig& cfg, const std::string& resource) {
  const auto [host, prefix] = split_base(cfg.api_base);
  httplib::Client cli(host);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  std::string path = prefix + resource + "?site=" + httplib::detail::encode_query_param(cfg.site) +
                     "&filter=withbody&sort=votes&order=desc";
  if (!cfg.key.empty()) path += "&key=" + httplib::detail::encode_query_param(cfg.key);
  // Error messages name the resource only; the key stays out of them.
  const auto res = cli.Get(path);
  if (!res) {
    throw FetchError(FetchError::Kind::kUpstream,
                     "question API unreachable for " + resource + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 404) throw FetchError(FetchError::Kind::kNotFound, resource + " not found");
  if (res->status != 200) {
    throw FetchError(FetchError::Kind::kUpstream,
                     "question API returned " + std::to_string(res->status) + " for " + resource);
  }
  const auto j = json::parse(res->body, nullptr, false);
  if (j.is_discarded() || !j.contains("items") || !j["items"].is_array()) {
    throw FetchError(FetchError::Kind::kUpstream, "malformed question API reply for " + resource);
  }
  return j["items"];
}

corpus::RawPost question_post(const json& q) {
  corpus::RawPost p;
  p.id = q.at("question_id").get<std::int64_t>();
  p.type = corpus::PostType::kQuestion;
  p.title = q.value("title", "");
  p.body = q.value("body", "");
  p.score = q.value("score", std::int64_t{0});
  p.view_count = q.value("view_count", std::int64_t{0});
  p.tags = q.value("tags", std::vector<std::string>{});
  if (q.contains("accepted_answer_id")) p.accepted_answer_id = q["accepted_answer_id"].get<std::int64_t>();
  return p;
}

corpus::RawPost answer_post(const json& a) {
  corpus::RawPost p;
  p.id = a.at("answer_id").get<std::int64_t>();
  p.type = corpus::PostType::kAnswer;
  p.parent_id = a.at("question_id").get<std::int64_t>();
  p.body = a.value("body", "");
  p.score = a.value("score", std::int64_t{0});
  return p;
}

json api_json(const extract::GeneratedApi& api) {
  json params = json::array();
  for (const auto& p : api.parameters) params.push_back({{"type", p.type_text}, {"name", p.name}});
  json steps = json::object();
  for (const auto& [k, v] : api.steps_raw) steps[std::to_string(k)] = v;
  return {{"answer_id", api.answer_id},
          {"language", api.language},
          {"method_name", api.method_name},
          {"parameters", params},
          {"return_type", api.return_type},
          {"imports", api.imports},
          {"throws", api.throws},
          {"complete_source", api.complete_source},
          {"file_name", extract::artifact_file_name(api.answer_id, api.language)},
          {"steps", steps},
          {"diagnostics", api.diagnostics}};
}

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Reject{400, "bad_request", std::string("missing or non-string field \"") + key + "\""};
  }
  return j[key].get<std::string>();
}

std::optional<Language> optional_language(const json& j) {
  if (!j.contains("language")) return std::nullopt;
  if (!j["language"].is_string()) throw Reject{400, "bad_request", "language must be a string"};
  try {
    return parse_language(j["language"].get<std::string>());
  } catch (const std::exception& e) {
    throw Reject{400, "bad_request", e.what()};
  }
}

// Positive and below 2^53 so it survives JSON number handling in browsers.
std::int64_t synthetic_id(std::string_view title, std::string_view snippet) {
  const auto hex = text::fnv1a_hex(std::string(title) + "\n" + std::string(snippet));
  const auto v = static_cast<std::int64_t>(std::stoull(hex, nullptr, 16) & ((1ULL << 53) - 1));
  return v == 0 ? 1 : v;
}

}  // namespace

std::optional<PostRef> parse_post_url(std::string_view url) {
  static const std::regex re(
      R"(^https?://(?:www\.)?stackoverflow\.com/(questions|q|a)/([0-9]+)(?:/[^/?#]*)?(?:/([0-9]+))?/?(?:\?[^#]*)?(?:#([0-9]+))?.*$)");
  std::cmatch m;
  if (!std::regex_match(url.data(), url.data() + url.size(), m, re)) return std::nullopt;
  PostRef ref;
  const auto id = std::stoll(m[2].str());
  if (m[1] == "a") {
    ref.answer_id = id;
  } else {
    ref.question_id = id;
    if (m[3].matched) ref.answer_id = std::stoll(m[3].str());
    if (m[4].matched) ref.answer_id = std::stoll(m[4].str());
  }
  return ref;
}

corpus::SnippetContext fetch_context(const PostRef& ref, std::optional<Language> language,
                                     const StackExchangeConfig& config) {
  std::optional<std::int64_t> qid = ref.question_id;
  json answer;
  if (ref.answer_id) {
    const auto items = get_items(config, "/answers/" + std::to_string(*ref.answer_id));
    if (items.empty()) {
      throw FetchError(FetchError::Kind::kNotFound, "answer " + std::to_string(*ref.answer_id) + " not found");
    }
    answer = items.front();
    qid = answer.at("question_id").get<std::int64_t>();
  }
  if (!qid) throw FetchError(FetchError::Kind::kNotFound, "link names no question");
  const auto questions = get_items(config, "/questions/" + std::to_string(*qid));
  if (questions.empty()) {
    throw FetchError(FetchError::Kind::kNotFound, "question " + std::to_string(*qid) + " not found");
  }
  const auto question = question_post(questions.front());
  if (answer.is_null()) {
    const auto answers = get_items(config, "/questions/" + std::to_string(*qid) + "/answers");
    if (answers.empty()) {
      throw FetchError(FetchError::Kind::kNotFound, "question " + std::to_string(*qid) + " has no answers");
    }
    answer = answers.front();  // sorted by votes
    for (const auto& a : answers) {
      if (a.value("is_accepted", false)) {
        answer = a;
        break;
      }
    }
  }
  Language lang = Language::kJava;
  if (language) {
    lang = *language;
  } else {
    for (const auto& t : question.tags) {
      if (t == "python" || t.starts_with("python-")) lang = Language::kPython;
    }
  }
  try {
    return corpus::extract_context(question, answer_post(answer), lang);
  } catch (const std::invalid_argument& e) {
    throw FetchError(FetchError::Kind::kNotFound, e.what());
  }
}

std::shared_ptr<Service> Service::create(ServiceConfig config) {
  if (!config.backend) throw std::invalid_argument("service needs a backend");
  if (config.deadline.count() <= 0) throw std::invalid_argument("deadline must be positive");
  if (config.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  return std::shared_ptr<Service>(new Service(std::move(config)));
}

Service::Service(ServiceConfig config)
    : config_(std::move(config)),
      client_(std::make_shared<llm::Client>(config_.backend, config_.client_options)) {}

void Service::log(std::string_view line) const {
  if (config_.log) {
    config_.log(line);
  } else {
    std::cerr << line << '\n';
  }
}

HttpResult Service::health() const {
  return {200, json{{"status", "ok"}, {"model", config_.model_name}, {"version", kVersion}}.dump()};
}

std::optional<std::string> Service::allowed_origin(std::string_view origin) const {
  if (origin.empty()) return std::nullopt;
  for (const auto& allowed : config_.cors_origins) {
    if (allowed == "*") return std::string("*");
    if (allowed.ends_with('*')) {
      if (origin.starts_with(std::string_view(allowed).substr(0, allowed.size() - 1))) {
        return std::string(origin);
      }
    } else if (origin == allowed) {
      return std::string(origin);
    }
  }
  return std::nullopt;
}

std::string Service::complete_cached(const llm::CompletionRequest& request) {
  const auto key = std::to_string(request.answer_id) + ":" + eval::prompt_hash(request.prompt_text) +
                   ":" + request.model_name;
  {
    std::lock_guard lock(cache_mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto resp = client_->complete(request);
  if (resp.truncated) {
    throw llm::BackendError(llm::BackendError::Kind::kProvider, "model reply was truncated");
  }
  std::lock_guard lock(cache_mu_);
  return cache_.emplace(key, std::move(resp.raw_text)).first->second;
}

HttpResult Service::apize(std::string_view body, bool compile_check) {
  if (body.size() > config_.max_body_bytes) {
    return error_result(413, "payload_too_large", "request body exceeds the size limit");
  }
  auto promise = std::make_shared<std::promise<HttpResult>>();
  auto future = promise->get_future();
  // The worker owns what it needs, so a request that outlives its deadline
  // can finish in the background.
  std::thread([self = shared_from_this(), text = std::string(body), compile_check, promise] {
    try {
      promise->set_value(self->apize_now(text, compile_check));
    } catch (const std::exception& e) {
      promise->set_value(error_result(500, "internal", e.what()));
    }
  }).detach();
  if (future.wait_for(config_.deadline) != std::future_status::ready) {
    return error_result(504, "deadline_exceeded",
                        "no result within " + std::to_string(config_.deadline.count()) + " ms");
  }
  return future.get();
}

HttpResult Service::apize_now(const std::string& body, bool compile_check) {
  try {
    const auto j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Reject{400, "bad_request", "body must be a JSON object"};
    static const char* kInline[] = {"question_title", "question_body", "answer_body", "code_snippet"};
    bool any_inline = false;
    for (const char* k : kInline) any_inline |= j.contains(k);
    const bool has_url = j.contains("url");
    if (has_url == any_inline) {
      throw Reject{400, "bad_request", "give either url or the inline context fields, not both"};
    }
    const auto language = optional_language(j);

    corpus::SnippetContext ctx;
    if (has_url) {
      const auto url = required_string(j, "url");
      const auto ref = parse_post_url(url);
      if (!ref) throw Reject{400, "bad_request", "url is not a Stack Overflow question or answer link"};
      try {
        ctx = fetch_context(*ref, language, config_.stack_exchange);
      } catch (const corpus::NoCodeSnippet& e) {
        throw Reject{404, "no_snippet", e.what()};
      } catch (const FetchError& e) {
        if (e.kind() == FetchError::Kind::kNotFound) throw Reject{404, "not_found", e.what()};
        throw Reject{502, "upstream", e.what()};
      }
    } else {
      if (!language) throw Reject{400, "bad_request", "missing field \"language\""};
      ctx.language = *language;
      ctx.question_title = required_string(j, "question_title");
      ctx.question_body = required_string(j, "question_body");
      ctx.answer_body = required_string(j, "answer_body");
      ctx.code_snippet = required_string(j, "code_snippet");
      for (const char* k : {"answer_id", "question_id"}) {
        if (j.contains(k) && !j[k].is_number_integer()) {
          throw Reject{400, "bad_request", std::string(k) + " must be an integer"};
        }
      }
      // Inline requests may omit ids; a stable one is derived from the text.
      const auto synthetic = synthetic_id(ctx.question_title, ctx.code_snippet);
      ctx.answer_id = j.value("answer_id", synthetic);
      ctx.question_id = j.value("question_id", synthetic);
      if (auto problem = corpus::validate(ctx)) throw Reject{400, "bad_request", *problem};
    }

    prompt::PromptBundle bundle;
    try {
      bundle = prompt::render_default_prompt(ctx, {}, config_.prompt_budget);
    } catch (const prompt::OverBudget& e) {
      throw Reject{413, "over_budget", e.what()};
    } catch (const std::invalid_argument& e) {
      throw Reject{400, "bad_request", e.what()};
    }

    llm::CompletionRequest req;
    req.model_name = config_.model_name;
    req.prompt_text = bundle.rendered;
    req.answer_id = ctx.answer_id;
    extract::GeneratedApi api;
    try {
      const auto raw = complete_cached(req);
      api = extract::extract_api(raw, ctx.language, ctx.answer_id);
    } catch (const llm::BackendError& e) {
      if (e.kind() == llm::BackendError::Kind::kOverTokenLimit) throw Reject{413, "over_budget", e.what()};
      throw Reject{502, "backend", std::string(to_string(e.kind())) + ": " + e.what()};
    } catch (const extract::ExtractError& e) {
      throw Reject{502, "unusable_reply", e.what()};
    }

    json out = api_json(api);
    if (has_url) out["context"] = ctx;
    if (compile_check) {
      const compile::Toolchain* tc = nullptr;
      for (const auto& t : config_.toolchains) {
        if (t.language == ctx.language) {
          tc = &t;
          break;
        }
      }
      if (tc == nullptr) throw Reject{501, "compile_unavailable", "no toolchain configured for this language"};
      compile::RepairOptions ro;
      ro.max_rounds = config_.max_rounds;
      ro.model_name = config_.model_name;
      compile::CompileOutcome outcome;
      try {
        outcome = compile::repair_loop(api, *client_, *tc, ro);
      } catch (const compile::RepairError& e) {
        outcome = e.partial();
        outcome.diagnostics.push_back({0, 0, e.what()});
      } catch (const compile::CompileError& e) {
        outcome.toolchain_id = tc->id;
        outcome.final_source = api.complete_source;
        outcome.diagnostics.push_back({0, 0, e.what()});
      }
      json diags = json::array();
      for (const auto& d : outcome.diagnostics) {
        diags.push_back({{"line", d.line}, {"column", d.column}, {"message", d.message}});
      }
      out["compile"] = {{"success", outcome.success},
                        {"rounds_used", outcome.rounds_used},
                        {"toolchain", outcome.toolchain_id},
                        {"final_source", outcome.final_source},
                        {"diagnostics", diags}};
    }
    return {200, out.dump()};
  } catch (const Reject& r) {
    return error_result(r.status, r.code, r.message);
  }
}

HttpServer::HttpServer(std::shared_ptr<Service> service)
    : service_(std::move(service)), server_(std::make_unique<httplib::Server>()) {
  auto& svr = *server_;
  auto svc = service_;
  svr.set_payload_max_length(svc->config().max_body_bytes);
  svr.set_pre_routing_handler([svc](const httplib::Request& req, httplib::Response& res) {
    if (auto origin = svc->allowed_origin(req.get_header_value("Origin"))) {
      res.set_header("Access-Control-Allow-Origin", *origin);
      res.set_header("Vary", "Origin");
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
    }
    if (req.method == "OPTIONS") {
      res.status = 204;
      return httplib::Server::HandlerResponse::Handled;
    }
    return httplib::Server::HandlerResponse::Unhandled;
  });
  svr.Get("/v1/health", [svc](const httplib::Request&, httplib::Response& res) {
    const auto r = svc->health();
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
  svr.Post("/v1/apize", [svc](const httplib::Request& req, httplib::Response& res) {
    const auto flag = req.get_param_value("compile");
    const bool compile = flag == "1" || flag == "true";
    const auto r = svc->apize(req.body, compile);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
  svr.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const char* code = res.status == 413 ? "payload_too_large" : res.status == 404 ? "not_found" : "error";
    res.set_content(error_result(res.status, code, httplib::status_message(res.status)).body,
                    "application/json");
  });
  svr.set_logger([svc](const httplib::Request& req, const httplib::Response& res) {
    // Method, path and status only: bodies and query strings may carry secrets.
    svc->log(req.method + " " + req.path + " " + std::to_string(res.status));
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::start_background() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void HttpServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace code2api::service
