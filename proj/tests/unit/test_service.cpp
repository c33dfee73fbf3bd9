// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include <doctest.h>
#include <httplib.h>

#include <atomic>
#include <mutex>

#include "code2api/api_extractor.hpp"
#include "code2api/json_io.hpp"
#include "code2api/prompt_builder.hpp"
#include "code2api/service.hpp"
#include "code2api/text.hpp"
#include "code2api/version.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

using namespace code2api;
using namespace code2api::service;
using code2api::testing::read_data;
using nlohmann::json;

namespace {

constexpr const char* kSoKey = "so-key-DO-NOT-LEAK-4711";

struct LogSink {
  std::mutex mu;
  std::vector<std::string> lines;
  std::function<void(std::string_view)> fn() {
    return [this](std::string_view l) {
      std::lock_guard lock(mu);
      lines.emplace_back(l);
    };
  }
  std::string all() {
    std::lock_guard lock(mu);
    std::string s;
    for (const auto& l : lines) s += l + "\n";
    return s;
  }
};

json int_list_request() {
  const auto ctx = prompt::builtin_bank(Language::kJava).front().context;
  return {{"language", "java"},
          {"question_title", ctx.question_title},
          {"question_body", ctx.question_body},
          {"answer_body", ctx.answer_body},
          {"code_snippet", ctx.code_snippet},
          {"answer_id", 1}};
}

std::shared_ptr<llm::MockBackend> int_list_backend() {
  return std::make_shared<llm::MockBackend>(
      std::map<std::int64_t, std::string>{{1, read_data("int_list/response.txt")},
                                           {11, read_data("int_list/response.txt")}});
}

ServiceConfig base_config(std::shared_ptr<llm::Backend> backend) {
  ServiceConfig cfg;
  cfg.backend = std::move(backend);
  cfg.client_options.sleep = [](std::chrono::milliseconds) {};
  cfg.log = [](std::string_view) {};
  return cfg;
}

// Serves the fixture post the way the public read API does.
class QuestionApiStub {
 public:
  QuestionApiStub() {
    server_.Get(R"(/2.3/questions/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      if (fail_) return void(res.status = 500);
      const auto id = req.matches[1].str();
      res.set_content(id == "10" ? read_data("service/question_10.json") : R"({"items": []})",
                      "application/json");
    });
    server_.Get(R"(/2.3/questions/(\d+)/answers)", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      res.set_content(req.matches[1].str() == "10" ? read_data("service/answers_10.json") : R"({"items": []})",
                      "application/json");
    });
    server_.Get(R"(/2.3/answers/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      const auto all = json::parse(read_data("service/answers_10.json"))["items"];
      json items = json::array();
      for (const auto& a : all) {
        if (std::to_string(a["answer_id"].get<int>()) == req.matches[1].str()) items.push_back(a);
      }
      res.set_content(json{{"items", items}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~QuestionApiStub() {
    server_.stop();
    thread_.join();
  }
  StackExchangeConfig config() const {
    StackExchangeConfig c;
    c.api_base = "http://127.0.0.1:" + std::to_string(port_) + "/2.3";
    c.key = kSoKey;
    c.timeout = std::chrono::milliseconds(2000);
    return c;
  }
  void fail_questions() { fail_ = true; }
  std::vector<std::string> keys_seen() {
    std::lock_guard lock(mu_);
    return keys_;
  }

 private:
  void record(const httplib::Request& req) {
    std::lock_guard lock(mu_);
    keys_.push_back(req.get_param_value("key"));
  }
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<bool> fail_{false};
  std::mutex mu_;
  std::vector<std::string> keys_;
};

class SlowBackend : public llm::Backend {
 public:
  llm::CompletionResponse complete(const llm::CompletionRequest&) override {
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    llm::CompletionResponse r;
    r.raw_text = read_data("int_list/response.txt");
    return r;
  }
  std::string provider_id() const override { return "slow"; }
};

json body_of(const HttpResult& r) { return json::parse(r.body); }

}  // namespace

TEST_CASE("health is constant and never calls the backend") {
  auto backend = int_list_backend();
  auto svc = Service::create(base_config(backend));
  const auto a = svc->health();
  const auto b = svc->health();
  CHECK(a == b);
  CHECK(a.status == 200);
  const auto j = body_of(a);
  CHECK(j["status"] == "ok");
  CHECK(j["version"] == kVersion);
  CHECK(j["model"] == std::string(llm::kDefaultModel));
  CHECK(backend->calls() == 0);
}

TEST_CASE("inline int-list request returns the wrapped class") {
  auto svc = Service::create(base_config(int_list_backend()));
  const auto r = svc->apize(int_list_request().dump());
  REQUIRE(r.status == 200);
  const auto j = body_of(r);
  const auto expected = extract::extract_api(read_data("int_list/response.txt"), Language::kJava, 1);
  CHECK(j["complete_source"] == expected.complete_source);
  CHECK(text::trim(j["complete_source"].get<std::string>()) ==
        text::trim(read_data("int_list/complete_code.java")));
  CHECK(j["method_name"] == "convertIntArrayToList");
  CHECK(j["return_type"] == "List<Integer>");
  CHECK(j["parameters"] == json::parse(R"([{"type": "int[]", "name": "arr"}])"));
  CHECK(j["imports"] == json::parse(R"(["java.util.ArrayList", "java.util.List"])"));
  CHECK(j["file_name"] == "Code2API1.java");
  CHECK(j["steps"]["4"] == "convertIntArrayToList");
  CHECK(j.contains("throws"));
  CHECK(j.contains("diagnostics"));
  CHECK_FALSE(j.contains("context"));
}

TEST_CASE("identical requests give identical bodies and hit the cache") {
  auto backend = int_list_backend();
  auto svc = Service::create(base_config(backend));
  const auto a = svc->apize(int_list_request().dump());
  const auto b = svc->apize(int_list_request().dump());
  CHECK(a == b);
  CHECK(backend->calls() == 1);
}

TEST_CASE("malformed requests are rejected with 400") {
  auto backend = int_list_backend();
  auto svc = Service::create(base_config(backend));
  auto both = int_list_request();
  both["url"] = "https://stackoverflow.com/questions/10";
  auto missing = int_list_request();
  missing.erase("code_snippet");
  auto no_language = int_list_request();
  no_language.erase("language");
  auto bad_language = int_list_request();
  bad_language["language"] = "cobol";
  auto bad_id = int_list_request();
  bad_id["answer_id"] = "one";
  auto empty_snippet = int_list_request();
  empty_snippet["code_snippet"] = "";
  const std::vector<std::string> bodies = {
      both.dump(),
      "{}",
      "not json",
      "[1, 2]",
      missing.dump(),
      no_language.dump(),
      bad_language.dump(),
      bad_id.dump(),
      empty_snippet.dump(),
      R"({"url": "https://example.com/questions/10"})",
      R"({"url": 42})",
  };
  for (const auto& b : bodies) {
    const auto r = svc->apize(b);
    INFO(b, " -> ", r.body);
    CHECK(r.status == 400);
    CHECK(body_of(r)["error"]["code"] == "bad_request");
  }
  CHECK(backend->calls() == 0);
}

TEST_CASE("over-budget prompts are rejected with 413") {
  auto backend = int_list_backend();
  auto svc = Service::create(base_config(backend));
  auto big = int_list_request();
  std::string snippet;
  for (int i = 0; i < 3000; ++i) snippet += "intList.add(" + std::to_string(i) + ");\n";
  big["code_snippet"] = snippet;
  CHECK(svc->apize(big.dump()).status == 413);

  auto cfg = base_config(std::make_shared<llm::ScriptedBackend>(
      std::vector{llm::ScriptedBackend::fail(llm::BackendError::Kind::kOverTokenLimit)}));
  CHECK(Service::create(cfg)->apize(int_list_request().dump()).status == 413);

  auto small = base_config(backend);
  small.max_body_bytes = 64;
  CHECK(Service::create(small)->apize(int_list_request().dump()).status == 413);
  CHECK(backend->calls() == 0);
}

TEST_CASE("backend failures map to 502") {
  for (auto kind : {llm::BackendError::Kind::kAuthFailure, llm::BackendError::Kind::kTransport,
                    llm::BackendError::Kind::kProvider, llm::BackendError::Kind::kNotFound}) {
    auto svc = Service::create(base_config(
        std::make_shared<llm::ScriptedBackend>(std::vector{llm::ScriptedBackend::fail(kind)})));
    const auto r = svc->apize(int_list_request().dump());
    CHECK(r.status == 502);
    CHECK(body_of(r)["error"]["code"] == "backend");
  }
  auto svc = Service::create(base_config(std::make_shared<llm::ScriptedBackend>(
      std::vector{llm::ScriptedBackend::reply("no code in this reply")})));
  CHECK(svc->apize(int_list_request().dump()).status == 502);
}

TEST_CASE("deadline gives 504") {
  auto cfg = base_config(std::make_shared<SlowBackend>());
  cfg.deadline = std::chrono::milliseconds(50);
  auto svc = Service::create(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto r = svc->apize(int_list_request().dump());
  CHECK(r.status == 504);
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::milliseconds(350));
  // Let the detached worker finish before the backend goes away.
  std::this_thread::sleep_for(std::chrono::milliseconds(500));
}

TEST_CASE("post links") {
  using R = std::optional<PostRef>;
  CHECK(parse_post_url("https://stackoverflow.com/questions/10/how-to-convert") == R{PostRef{10, {}}});
  CHECK(parse_post_url("https://stackoverflow.com/questions/10") == R{PostRef{10, {}}});
  CHECK(parse_post_url("https://www.stackoverflow.com/questions/10/slug/11#11") == R{PostRef{10, 11}});
  CHECK(parse_post_url("https://stackoverflow.com/questions/10/slug#11") == R{PostRef{10, 11}});
  CHECK(parse_post_url("https://stackoverflow.com/questions/10/slug?noredirect=1#11") == R{PostRef{10, 11}});
  CHECK(parse_post_url("https://stackoverflow.com/a/11") == R{PostRef{{}, 11}});
  CHECK(parse_post_url("https://stackoverflow.com/a/11/4711") == R{PostRef{{}, 11}});
  CHECK(parse_post_url("http://stackoverflow.com/q/10") == R{PostRef{10, {}}});
  CHECK_FALSE(parse_post_url("https://example.com/questions/10"));
  CHECK_FALSE(parse_post_url("https://stackoverflow.com/users/10"));
  CHECK_FALSE(parse_post_url("https://stackoverflow.com.evil.org/questions/10"));
  CHECK_FALSE(parse_post_url(""));
}

TEST_CASE("context fetched from the stub matches the fixture post") {
  QuestionApiStub stub;
  const auto want = json::parse(read_data("service/expected_context_11.json"));
  for (const auto& ref : {PostRef{10, {}}, PostRef{10, 11}, PostRef{{}, 11}}) {
    const auto ctx = fetch_context(ref, std::nullopt, stub.config());
    CHECK(ctx.question_id == want["question_id"].get<std::int64_t>());
    CHECK(ctx.answer_id == want["answer_id"].get<std::int64_t>());
    CHECK(ctx.question_title == want["question_title"].get<std::string>());
    CHECK(ctx.code_snippet == want["code_snippet"].get<std::string>());
    CHECK(ctx.language == Language::kJava);
    CHECK(ctx.answer_score == want["answer_score"].get<std::int64_t>());
    CHECK(ctx.view_count == want["view_count"].get<std::int64_t>());
    CHECK(ctx.tags == want["tags"].get<std::vector<std::string>>());
    CHECK(ctx.question_body.find(want["question_body_contains"].get<std::string>()) != std::string::npos);
    CHECK(ctx.answer_body.find(want["answer_body_contains"].get<std::string>()) != std::string::npos);
  }
  // The linked answer wins over the accepted one.
  CHECK(fetch_context(PostRef{10, 12}, std::nullopt, stub.config()).answer_id == 12);
  for (const auto& k : stub.keys_seen()) CHECK(k == kSoKey);
}

TEST_CASE("url requests through the service") {
  QuestionApiStub stub;
  LogSink logs;
  auto cfg = base_config(int_list_backend());
  cfg.stack_exchange = stub.config();
  cfg.log = logs.fn();
  auto svc = Service::create(cfg);

  const auto ok = svc->apize(R"({"url": "https://stackoverflow.com/questions/10/how-to-convert"})");
  REQUIRE(ok.status == 200);
  const auto j = body_of(ok);
  CHECK(j["method_name"] == "convertIntArrayToList");
  CHECK(j["context"]["answer_id"] == 11);
  CHECK(j["context"]["question_title"] == "How to convert int[] into List<Integer> in Java?");

  CHECK(svc->apize(R"({"url": "https://stackoverflow.com/questions/99"})").status == 404);
  CHECK(svc->apize(R"({"url": "https://stackoverflow.com/a/98"})").status == 404);
  const auto no_code = svc->apize(R"({"url": "https://stackoverflow.com/a/13"})");
  CHECK(no_code.status == 404);
  CHECK(body_of(no_code)["error"]["code"] == "no_snippet");

  stub.fail_questions();
  const auto upstream = svc->apize(R"({"url": "https://stackoverflow.com/questions/10"})");
  CHECK(upstream.status == 502);

  StackExchangeConfig dead = stub.config();
  dead.api_base = "http://127.0.0.1:1/2.3";
  auto cfg2 = base_config(int_list_backend());
  cfg2.stack_exchange = dead;
  cfg2.log = logs.fn();
  const auto unreachable = Service::create(cfg2)->apize(R"({"url": "https://stackoverflow.com/questions/10"})");
  CHECK(unreachable.status == 502);

  for (const auto& r : {ok, no_code, upstream, unreachable}) {
    CHECK(r.body.find(kSoKey) == std::string::npos);
  }
  CHECK(logs.all().find(kSoKey) == std::string::npos);
}

TEST_CASE("compile flag") {
  auto cfg = base_config(int_list_backend());
  auto svc = Service::create(cfg);
  CHECK(svc->apize(int_list_request().dump(), true).status == 501);

  cfg.toolchains = compile::load_toolchains(CODE2API_TOOLCHAINS);
  const auto r = Service::create(cfg)->apize(int_list_request().dump(), true);
  REQUIRE(r.status == 200);
  const auto j = body_of(r);
  CHECK(j["compile"]["success"] == true);
  CHECK(j["compile"]["rounds_used"] == 0);
}

TEST_CASE("HTTP routes, CORS and logging") {
  LogSink logs;
  auto cfg = base_config(int_list_backend());
  cfg.log = logs.fn();
  cfg.max_body_bytes = 64 * 1024;
  auto svc = Service::create(cfg);
  HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  server.start_background();

  httplib::Client cli("127.0.0.1", port);
  const auto health = cli.Get("/v1/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->body == svc->health().body);

  const auto apize = cli.Post("/v1/apize", int_list_request().dump(), "application/json");
  REQUIRE(apize);
  CHECK(apize->status == 200);
  CHECK(json::parse(apize->body)["method_name"] == "convertIntArrayToList");

  const auto both = cli.Post("/v1/apize", R"({"url": "x", "code_snippet": "y"})", "application/json");
  REQUIRE(both);
  CHECK(both->status == 400);

  const auto missing = cli.Get("/v1/nothing");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  CHECK(json::parse(missing->body)["error"]["code"] == "not_found");

  const auto huge = cli.Post("/v1/apize", std::string(128 * 1024, 'x'), "application/json");
  REQUIRE(huge);
  CHECK(huge->status == 413);

  httplib::Headers ext = {{"Origin", "chrome-extension://abcdef"}};
  const auto cors = cli.Get("/v1/health", ext);
  REQUIRE(cors);
  CHECK(cors->get_header_value("Access-Control-Allow-Origin") == "chrome-extension://abcdef");
  const auto preflight = cli.Options("/v1/apize", ext);
  REQUIRE(preflight);
  CHECK(preflight->status == 204);
  CHECK(preflight->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);

  httplib::Headers evil = {{"Origin", "https://evil.example"}};
  const auto denied = cli.Get("/v1/health", evil);
  REQUIRE(denied);
  CHECK_FALSE(denied->has_header("Access-Control-Allow-Origin"));

  server.stop();
  const auto log = logs.all();
  CHECK(log.find("GET /v1/health 200") != std::string::npos);
  CHECK(log.find("POST /v1/apize 200") != std::string::npos);
  CHECK(log.find("intList") == std::string::npos);  // bodies are not logged
}

TEST_CASE("origin rules") {
  auto cfg = base_config(int_list_backend());
  cfg.cors_origins = {"https://allowed.example"};
  auto svc = Service::create(cfg);
  CHECK(svc->allowed_origin("https://allowed.example") == "https://allowed.example");
  CHECK_FALSE(svc->allowed_origin("https://allowed.example.evil"));
  CHECK_FALSE(svc->allowed_origin("chrome-extension://abc"));
  CHECK_FALSE(svc->allowed_origin(""));
  cfg.cors_origins = {"*"};
  CHECK(Service::create(cfg)->allowed_origin("https://any.example") == "*");
}

TEST_CASE("inline requests without ids get a stable derived id") {
  auto cfg = base_config(std::make_shared<llm::ScriptedBackend>(
      std::vector{llm::ScriptedBackend::reply(read_data("int_list/response.txt"))}));
  auto svc = Service::create(cfg);
  auto req = int_list_request();
  req.erase("answer_id");
  const auto a = body_of(svc->apize(req.dump()));
  const auto b = body_of(Service::create(cfg)->apize(req.dump()));
  REQUIRE(a.contains("answer_id"));
  CHECK(a["answer_id"].get<std::int64_t>() > 0);
  CHECK(a["answer_id"].get<std::int64_t>() < (std::int64_t{1} << 53));
  CHECK(a["answer_id"] == b["answer_id"]);
  req["code_snippet"] = req["code_snippet"].get<std::string>() + "\n// changed";
  CHECK(body_of(svc->apize(req.dump()))["answer_id"] != a["answer_id"]);
}
