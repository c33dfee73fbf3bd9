// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

// Command-line front end: ingest, prompt, compile-check, eval and serve.

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "code2api/api_extractor.hpp"
#include "code2api/compile_check.hpp"
#include "code2api/corpus.hpp"
#include "code2api/eval_harness.hpp"
#include "code2api/json_io.hpp"
#include "code2api/llm_backend.hpp"
#include "code2api/prompt_builder.hpp"
#include "code2api/service.hpp"
#include "code2api/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace code2api;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Bad input or configuration, reported with exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::map<std::string, Language> kLanguages = {{"java", Language::kJava},
                                                    {"python", Language::kPython}};

struct BackendOptions {
  std::string kind = "mock";
  std::string fixtures;
  std::string model;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--backend", kind, "mock or live")->check(CLI::IsMember({"mock", "live"}));
    cmd->add_option("--fixtures", fixtures, "canned replies keyed by answer id (mock backend)");
    cmd->add_option("--model", model, "model name (default: $CODE2API_MODEL or gpt-3.5-turbo)");
  }
};

struct Backend {
  std::shared_ptr<llm::Backend> backend;
  llm::ClientOptions options;
  std::string model;
};

Backend make_backend(const BackendOptions& opts) {
  llm::EnvConfig env;
  try {
    env = llm::config_from_env();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  Backend b;
  b.model = opts.model.empty() ? env.model : opts.model;
  b.options.max_tokens = env.max_tokens;
  b.options.concurrency = env.concurrency;
  if (opts.kind == "mock") {
    if (opts.fixtures.empty()) throw UsageError("--backend mock needs --fixtures");
    b.backend = std::make_shared<llm::MockBackend>(llm::load_fixtures(opts.fixtures));
  } else {
    if (env.api_key.empty()) throw UsageError("--backend live needs CODE2API_API_KEY");
    llm::LiveConfig live;
    live.api_key = env.api_key;
    live.base_url = env.base_url;
    b.backend = std::make_shared<llm::ChatCompletionsBackend>(live);
  }
  return b;
}

// A single JSON object, or a corpus file with one context per line.
corpus::SnippetContext load_context(const fs::path& path, std::int64_t answer_id) {
  const auto text = read_file(path);
  const auto whole = nlohmann::json::parse(text, nullptr, false);
  if (!whole.is_discarded() && whole.is_object()) return whole.get<corpus::SnippetContext>();
  const auto loaded = corpus::load_corpus(path);
  if (!loaded.errors.empty()) {
    throw UsageError(path.string() + " line " + std::to_string(loaded.errors.front().line) + ": " +
                     loaded.errors.front().message);
  }
  for (const auto& ctx : loaded.records) {
    if (answer_id == 0 || ctx.answer_id == answer_id) return ctx;
  }
  throw UsageError("no context" + (answer_id ? " with answer id " + std::to_string(answer_id) : "") +
                   " in " + path.string());
}

int run_ingest(const fs::path& dump, const std::string& lang, std::int64_t min_score,
               std::int64_t top, bool any_answer, const fs::path& out) {
  corpus::FilterCriteria criteria;
  criteria.min_answer_score = min_score;
  criteria.max_view_rank = top;
  criteria.language_tag = lang;
  criteria.require_accepted = !any_answer;
  corpus::validate(criteria);
  const auto result = corpus::ingest(dump, kLanguages.at(lang), criteria);
  corpus::store_corpus(result.contexts, out);
  std::cerr << "rows " << result.stats.rows << ", candidates " << result.candidates
            << ", without code " << result.no_code_snippet << ", selected " << result.contexts.size()
            << " -> " << out.string() << "\n";
  return 0;
}

struct PromptArgs {
  std::string context;
  std::int64_t answer_id = 0;
  bool ablate_cot = false;
  bool ablate_fewshot = false;
  bool print = false;
  std::string bank;
  std::size_t k = 5;
  std::string wrapper = std::string(prompt::kDefaultWrapperClass);
};

int run_prompt(const PromptArgs& a) {
  const auto ctx = load_context(a.context, a.answer_id);
  const auto plan = prompt::default_cot(ctx.language, a.wrapper);
  auto bank = a.bank.empty() ? prompt::builtin_bank(ctx.language) : prompt::load_bank(a.bank);
  std::erase_if(bank, [&](const auto& ex) { return ex.context.language != ctx.language; });
  const auto examples = prompt::select_few_shot(bank, std::min(a.k, bank.size()));
  const auto bundle =
      prompt::render_prompt(ctx, plan, examples, {!a.ablate_cot, !a.ablate_fewshot});
  if (a.print) {
    std::cout << bundle.rendered << "\n";
  } else {
    std::cout << "answer " << ctx.answer_id << ": about " << bundle.token_estimate
              << " prompt tokens, " << (a.ablate_fewshot ? 0 : examples.size()) << " examples, CoT "
              << (a.ablate_cot ? "off" : "on") << "\n";
  }
  return 0;
}

struct CompileArgs {
  std::string file;
  std::string lang = "java";
  int max_rounds = compile::kDefaultMaxRounds;
  std::int64_t answer_id = 0;
  std::string toolchains;
  BackendOptions backend;
};

int run_compile_check(const CompileArgs& a) {
  const auto text = read_file(a.file);
  extract::GeneratedApi api;
  api.answer_id = a.answer_id;
  api.language = kLanguages.at(a.lang);
  // A saved model reply is reduced to its code; anything else is source.
  try {
    api.complete_source = extract::extract_fields(text).complete_code;
  } catch (const extract::ExtractError&) {
    api.complete_source = text;
  }
  const auto toolchains = compile::load_toolchains(
      a.toolchains.empty() ? compile::default_toolchains_path() : fs::path(a.toolchains));
  const auto& tc = compile::toolchain_for(toolchains, api.language);

  compile::CompileOutcome out;
  if (a.max_rounds == 0) {
    out = compile::compile_once(api.complete_source, tc, api.answer_id);
  } else {
    auto b = make_backend(a.backend);
    llm::Client client(b.backend, b.options);
    compile::RepairOptions ro;
    ro.max_rounds = a.max_rounds;
    ro.model_name = b.model;
    try {
      out = compile::repair_loop(api, client, tc, ro);
    } catch (const compile::RepairError& e) {
      std::cerr << "code2api: " << e.what() << "\n";
      out = e.partial();
    }
  }
  std::cout << (out.success ? "compiled" : "failed") << " with " << out.toolchain_id << " after "
            << out.rounds_used << " repair round(s)\n";
  if (!out.diagnostics.empty()) std::cout << compile::format_diagnostics(out.diagnostics) << "\n";
  if (out.success && out.rounds_used > 0) std::cout << "--- repaired source ---\n" << out.final_source;
  return out.success ? 0 : kExitFailure;
}

struct EvalArgs {
  eval::RunConfig cfg;
  std::string lang = "java";
  bool ablate_cot = false;
  bool ablate_fewshot = false;
  bool grid = false;
  bool no_cache = false;
  std::string report;
  std::string records;
  std::string corpus, truth, manual, bank, toolchains, out_dir = "code2api-run";
  BackendOptions backend;
};

int run_eval(EvalArgs a) {
  auto& cfg = a.cfg;
  cfg.corpus_path = a.corpus;
  if (!a.truth.empty()) cfg.ground_truth_path = a.truth;
  if (!a.manual.empty()) cfg.manual_path = a.manual;
  if (!a.bank.empty()) cfg.bank_path = a.bank;
  if (!a.toolchains.empty()) cfg.toolchains_path = a.toolchains;
  if (!a.backend.fixtures.empty()) cfg.fixtures_path = a.backend.fixtures;
  cfg.backend = a.backend.kind == "mock" ? eval::BackendKind::kMock : eval::BackendKind::kLive;
  cfg.language = kLanguages.at(a.lang);
  cfg.use_cache = !a.no_cache;
  auto b = make_backend(a.backend);
  cfg.model_name = b.model;
  eval::RunHooks hooks;
  hooks.backend = b.backend;

  std::vector<prompt::Ablation> configs;
  if (a.grid) {
    configs = {{true, true}, {false, true}, {true, false}, {false, false}};
  } else {
    configs = {{!a.ablate_cot, !a.ablate_fewshot}};
  }
  std::vector<eval::RunRecord> runs;
  for (const auto& ablation : configs) {
    cfg.ablation = ablation;
    // Each configuration keeps its prompts apart so they can be diffed.
    cfg.out_dir = a.out_dir;
    if (configs.size() > 1) {
      auto label = eval::ablation_label(ablation);
      std::replace(label.begin(), label.end(), '/', '-');
      std::replace(label.begin(), label.end(), ' ', '_');
      cfg.out_dir /= label;
    }
    runs.push_back(eval::run_benchmark(cfg, hooks));
    const auto& r = runs.back();
    std::cerr << r.label << ": " << r.items.size() << " items, " << r.error_count() << " errors\n";
    fs::path records = a.records.empty() ? cfg.out_dir / "records.jsonl" : fs::path(a.records);
    if (configs.size() > 1 && !a.records.empty()) {
      records = fs::path(a.records).parent_path() /
                (cfg.out_dir.filename().string() + "-" + fs::path(a.records).filename().string());
    }
    eval::emit_report(r, eval::ReportFormat::kLineRecords, records);
  }
  const auto md = eval::render_markdown(runs);
  if (a.report.empty()) {
    std::cout << md;
  } else {
    const fs::path report = a.report;
    if (report.has_parent_path()) fs::create_directories(report.parent_path());
    std::ofstream(report) << md;
    std::cerr << "report -> " << report.string() << "\n";
  }
  return 0;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::int64_t deadline_ms = 60000;
  std::vector<std::string> cors;
  std::string toolchains;
  bool compile = false;
  int max_rounds = compile::kDefaultMaxRounds;
  BackendOptions backend;
};

service::HttpServer* g_server = nullptr;

int run_serve(const ServeArgs& a) {
  auto b = make_backend(a.backend);
  service::ServiceConfig cfg;
  cfg.backend = b.backend;
  cfg.client_options = b.options;
  cfg.model_name = b.model;
  cfg.deadline = std::chrono::milliseconds(a.deadline_ms);
  if (!a.cors.empty()) cfg.cors_origins = a.cors;
  if (const char* key = std::getenv("CODE2API_SO_KEY")) cfg.stack_exchange.key = key;
  if (a.compile || !a.toolchains.empty()) {
    cfg.toolchains = compile::load_toolchains(
        a.toolchains.empty() ? compile::default_toolchains_path() : fs::path(a.toolchains));
  }
  cfg.max_rounds = a.max_rounds;
  service::HttpServer server(service::Service::create(cfg));
  const int port = server.bind(a.host, a.port);
  std::cerr << "code2api " << kVersion << " listening on http://" << a.host << ":" << port
            << " (model " << b.model << ", backend " << b.backend->provider_id() << ")\n";
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  server.serve();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Turns code snippets from Q&A posts into reusable methods."};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string dump, ingest_lang = "java", ingest_out;
  std::int64_t min_score = 2, top = 20000;
  bool any_answer = false;
  auto* ingest = app.add_subcommand("ingest", "Build a snippet corpus from a posts dump");
  ingest->add_option("--dump", dump, "Posts.xml path")->required()->check(CLI::ExistingFile);
  ingest->add_option("--lang", ingest_lang, "java or python")->check(CLI::IsMember({"java", "python"}));
  ingest->add_option("--min-score", min_score, "minimum answer score");
  ingest->add_option("--top", top, "keep questions among the N most viewed");
  ingest->add_flag("--any-answer", any_answer, "do not require the accepted answer");
  ingest->add_option("--out", ingest_out, "corpus output (one record per line)")->required();

  PromptArgs pa;
  auto* prm = app.add_subcommand("prompt", "Render the prompt for one snippet context");
  prm->add_option("--context", pa.context, "context object or corpus file")->required()->check(CLI::ExistingFile);
  prm->add_option("--answer-id", pa.answer_id, "pick this answer from a corpus file");
  prm->add_flag("--ablate-cot", pa.ablate_cot, "leave out the chain-of-thought steps");
  prm->add_flag("--ablate-fewshot", pa.ablate_fewshot, "leave out the worked examples");
  prm->add_flag("--print", pa.print, "print the rendered prompt");
  prm->add_option("--bank", pa.bank, "few-shot bank file (default: built-in)");
  prm->add_option("--k", pa.k, "number of examples");
  prm->add_option("--wrapper-class", pa.wrapper, "class that wraps generated Java methods");

  CompileArgs ca;
  auto* cc = app.add_subcommand("compile-check", "Compile generated code, repairing it if needed");
  cc->add_option("--file", ca.file, "source file or saved model reply")->required()->check(CLI::ExistingFile);
  cc->add_option("--lang", ca.lang, "java or python")->check(CLI::IsMember({"java", "python"}));
  cc->add_option("--max-rounds", ca.max_rounds, "repair rounds; 0 compiles once")->check(CLI::Range(0, 100));
  cc->add_option("--answer-id", ca.answer_id, "answer id (routes mock fixtures)");
  cc->add_option("--toolchains", ca.toolchains, "toolchain config (default: detected at build time)");
  ca.backend.add_to(cc);

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "Run a benchmark and report the metrics");
  ev->add_option("--corpus", ea.corpus, "corpus file")->required();
  ev->add_option("--truth", ea.truth, "ground-truth APIs");
  ev->add_option("--manual", ea.manual, "manual resolutions for undecided verdicts");
  ev->add_option("--bank", ea.bank, "few-shot bank file (default: built-in)");
  ev->add_option("--lang", ea.lang, "java or python")->check(CLI::IsMember({"java", "python"}));
  ev->add_flag("--ablate-cot", ea.ablate_cot, "leave out the chain-of-thought steps");
  ev->add_flag("--ablate-fewshot", ea.ablate_fewshot, "leave out the worked examples");
  ev->add_flag("--ablation-grid", ea.grid, "run the full, w/o CoT, w/o few-shot and w/o both configurations");
  ev->add_flag("--compile-check", ea.cfg.compile_check, "compile every generated API");
  ev->add_option("--max-rounds", ea.cfg.max_rounds, "repair rounds per item")->check(CLI::Range(1, 100));
  ev->add_option("--toolchains", ea.toolchains, "toolchain config");
  ev->add_option("--workers", ea.cfg.workers, "items processed in parallel")->check(CLI::Range(1, 256));
  ev->add_flag("--no-cache", ea.no_cache, "ignore cached replies");
  ev->add_option("--out-dir", ea.out_dir, "prompts, cache and records");
  ev->add_option("--report", ea.report, "markdown report path (default: stdout)");
  ev->add_option("--records", ea.records, "line-record output (default: <out-dir>/records.jsonl)");
  ea.backend.add_to(ev);

  ServeArgs sa;
  auto* sv = app.add_subcommand("serve", "Serve POST /v1/apize and GET /v1/health");
  sv->add_option("--host", sa.host, "bind address");
  sv->add_option("--port", sa.port, "port; 0 picks a free one")->check(CLI::Range(0, 65535));
  sv->add_option("--deadline-ms", sa.deadline_ms, "per-request deadline")->check(CLI::PositiveNumber);
  sv->add_option("--cors-origin", sa.cors, "allowed origin (repeatable; a trailing * matches a prefix)");
  sv->add_flag("--compile", sa.compile, "enable ?compile=1 with the detected toolchains");
  sv->add_option("--toolchains", sa.toolchains, "toolchain config; enables ?compile=1");
  sv->add_option("--max-rounds", sa.max_rounds, "repair rounds for ?compile=1")->check(CLI::Range(1, 100));
  sa.backend.add_to(sv);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(dump, ingest_lang, min_score, top, any_answer, ingest_out);
    if (*prm) return run_prompt(pa);
    if (*cc) return run_compile_check(ca);
    if (*ev) return run_eval(ea);
    if (*sv) return run_serve(sa);
  } catch (const UsageError& e) {
    std::cerr << "code2api: " << e.what() << "\n";
    return kExitUsage;
  } catch (const eval::ConfigError& e) {
    std::cerr << "code2api: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "code2api: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "code2api: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
