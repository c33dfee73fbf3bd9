// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/eval_harness.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "code2api/corpus.hpp"
#include "code2api/json_io.hpp"
#include "code2api/text.hpp"
#include "json.hpp"

namespace code2api::eval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Write to a sibling temp file, then rename, so readers never see a torn file.
void write_atomically(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

json diagnostic_json(const compile::Diagnostic& d) {
  return {{"line", d.line}, {"column", d.column}, {"message", d.message}};
}

json outcome_json(const compile::CompileOutcome& o) {
  json diags = json::array();
  for (const auto& d : o.diagnostics) diags.push_back(diagnostic_json(d));
  return {{"success", o.success},       {"diagnostics", diags},
          {"rounds_used", o.rounds_used}, {"final_source", o.final_source},
          {"toolchain_id", o.toolchain_id}, {"raw_output", o.raw_output}};
}

compile::CompileOutcome outcome_from(const json& j) {
  compile::CompileOutcome o;
  o.success = j.at("success").get<bool>();
  for (const auto& d : j.at("diagnostics")) {
    o.diagnostics.push_back({d.at("line").get<int>(), d.at("column").get<int>(),
                             d.at("message").get<std::string>()});
  }
  o.rounds_used = j.at("rounds_used").get<int>();
  o.final_source = j.at("final_source").get<std::string>();
  o.toolchain_id = j.at("toolchain_id").get<std::string>();
  o.raw_output = j.at("raw_output").get<std::string>();
  return o;
}

json metrics_json(const equivalence::MetricsSummary& m) {
  return {{"total", m.total},     {"p_count", m.p_count}, {"r_count", m.r_count},
          {"m_count", m.m_count}, {"pr_count", m.pr_count}, {"p_acc", m.p_acc},
          {"r_acc", m.r_acc},     {"m_acc", m.m_acc},     {"pr_acc", m.pr_acc},
          {"warnings", m.warnings}};
}

equivalence::MetricsSummary metrics_from(const json& j) {
  equivalence::MetricsSummary m;
  m.total = j.at("total").get<std::size_t>();
  m.p_count = j.at("p_count").get<std::size_t>();
  m.r_count = j.at("r_count").get<std::size_t>();
  m.m_count = j.at("m_count").get<std::size_t>();
  m.pr_count = j.at("pr_count").get<std::size_t>();
  m.p_acc = j.at("p_acc").get<double>();
  m.r_acc = j.at("r_acc").get<double>();
  m.m_acc = j.at("m_acc").get<double>();
  m.pr_acc = j.at("pr_acc").get<double>();
  m.warnings = j.at("warnings").get<std::vector<std::string>>();
  return m;
}

json item_json(const ItemRecord& item) {
  json j = {{"kind", "item"},
            {"answer_id", item.answer_id},
            {"status", to_string(item.status)},
            {"prompt_hash", item.prompt_hash},
            {"cached", item.cached}};
  if (item.status == ItemStatus::kError) {
    j["error_kind"] = item.error_kind;
    j["error_message"] = item.error_message;
  }
  if (item.api) j["api"] = *item.api;
  if (item.compile) j["compile"] = outcome_json(*item.compile);
  if (item.param_verdict) j["param_verdict"] = equivalence::to_string(*item.param_verdict);
  if (item.return_verdict) j["return_verdict"] = *item.return_verdict;
  if (item.impl_verdict) j["impl_verdict"] = equivalence::to_string(*item.impl_verdict);
  return j;
}

ItemRecord item_from(const json& j) {
  ItemRecord item;
  item.answer_id = j.at("answer_id").get<std::int64_t>();
  const auto status = j.at("status").get<std::string>();
  if (status == "ok") {
    item.status = ItemStatus::kOk;
  } else if (status == "error") {
    item.status = ItemStatus::kError;
  } else {
    throw std::runtime_error("unknown item status \"" + status + "\"");
  }
  item.prompt_hash = j.at("prompt_hash").get<std::string>();
  item.cached = j.at("cached").get<bool>();
  item.error_kind = j.value("error_kind", "");
  item.error_message = j.value("error_message", "");
  if (j.contains("api")) item.api = j.at("api").get<extract::GeneratedApi>();
  if (j.contains("compile")) item.compile = outcome_from(j.at("compile"));
  if (j.contains("param_verdict")) {
    item.param_verdict = equivalence::parse_verdict(j.at("param_verdict").get<std::string>());
  }
  if (j.contains("return_verdict")) item.return_verdict = j.at("return_verdict").get<bool>();
  if (j.contains("impl_verdict")) {
    item.impl_verdict = equivalence::parse_verdict(j.at("impl_verdict").get<std::string>());
  }
  return item;
}

ItemRecord error_item(std::int64_t answer_id, std::string kind, std::string message) {
  ItemRecord item;
  item.answer_id = answer_id;
  item.status = ItemStatus::kError;
  item.error_kind = std::move(kind);
  item.error_message = std::move(message);
  return item;
}

std::shared_ptr<llm::Backend> make_backend(const RunConfig& cfg) {
  if (cfg.backend == BackendKind::kMock) {
    return std::make_shared<llm::MockBackend>(llm::load_fixtures(*cfg.fixtures_path));
  }
  const auto env = llm::config_from_env();
  if (env.api_key.empty()) throw ConfigError("live backend needs CODE2API_API_KEY");
  llm::LiveConfig live;
  live.api_key = env.api_key;
  live.base_url = env.base_url;
  return std::make_shared<llm::ChatCompletionsBackend>(live);
}

struct Shared {
  const RunConfig& cfg;
  const RunHooks& hooks;
  const prompt::CotPlan plan;
  std::vector<prompt::FewShotExample> examples;
  std::optional<std::map<std::int64_t, code_model::ApiSignature>> truth;
  std::optional<compile::Toolchain> toolchain;
  llm::Client* client = nullptr;
  fs::path prompt_dir;
};

ItemRecord process(const Shared& s, const corpus::SnippetContext& ctx) {
  const auto id = ctx.answer_id;
  if (ctx.language != s.cfg.language) {
    return error_item(id, "corpus", "item language " + std::string(to_string(ctx.language)) +
                                        " does not match the run language");
  }
  ItemRecord item;
  item.answer_id = id;

  prompt::PromptBundle bundle;
  try {
    bundle = prompt::render_prompt(ctx, s.plan, s.examples, s.cfg.ablation);
  } catch (const std::exception& e) {
    return error_item(id, "prompt", e.what());
  }
  item.prompt_hash = prompt_hash(bundle.rendered);
  write_atomically(s.prompt_dir / (std::to_string(id) + ".txt"), bundle.rendered);

  llm::CompletionRequest req;
  req.model_name = s.cfg.model_name;
  req.prompt_text = bundle.rendered;
  req.answer_id = id;
  llm::CompletionResponse resp;
  try {
    resp = s.client->complete(req);
  } catch (const llm::BackendError& e) {
    auto err = error_item(id, "backend", std::string(to_string(e.kind())) + ": " + e.what());
    err.prompt_hash = item.prompt_hash;
    return err;
  }
  item.cached = resp.provider_id == "cache";

  try {
    extract::ParseOptions opts;
    opts.wrapper_class = s.plan.wrapper_class;
    item.api = extract::extract_api(resp.raw_text, ctx.language, id, opts);
  } catch (const std::exception& e) {
    auto err = error_item(id, "extract", e.what());
    err.prompt_hash = item.prompt_hash;
    err.cached = item.cached;
    return err;
  }

  if (s.toolchain) {
    try {
      compile::RepairOptions ro;
      ro.max_rounds = s.cfg.max_rounds;
      ro.model_name = s.cfg.model_name;
      item.compile = compile::repair_loop(*item.api, *s.client, *s.toolchain, ro);
    } catch (const compile::RepairError& e) {
      item.compile = e.partial();
      item.compile->diagnostics.push_back({0, 0, e.what()});
      item.compile->raw_output += e.what();
    } catch (const compile::CompileError& e) {
      compile::CompileOutcome failed;
      failed.final_source = item.api->complete_source;
      failed.toolchain_id = s.toolchain->id;
      failed.diagnostics.push_back({0, 0, e.what()});
      failed.raw_output = e.what();
      item.compile = failed;
    }
  }

  if (s.truth) {
    const auto it = s.truth->find(id);
    if (it == s.truth->end()) {
      auto err = error_item(id, "ground_truth", "no ground truth for this answer");
      err.prompt_hash = item.prompt_hash;
      err.cached = item.cached;
      err.api = item.api;
      err.compile = item.compile;
      return err;
    }
    code_model::ApiSignature generated;
    try {
      generated = code_model::parse_method_signature(item.api->complete_source, ctx.language);
    } catch (const std::exception& e) {
      auto err = error_item(id, "parse", e.what());
      err.prompt_hash = item.prompt_hash;
      err.cached = item.cached;
      err.api = item.api;
      err.compile = item.compile;
      return err;
    }
    const auto pair = equivalence::evaluate_pair(id, it->second, generated, s.hooks.oracle);
    item.param_verdict = pair.param_verdict;
    item.return_verdict = pair.return_verdict;
    item.impl_verdict = pair.impl_verdict;
  }
  return item;
}

// Failed items count as not equivalent so that the totals cover the corpus.
equivalence::MetricsSummary metrics_for(const std::vector<ItemRecord>& items,
                                        const equivalence::ManualMap& manual) {
  std::vector<equivalence::EquivalencePair> pairs;
  pairs.reserve(items.size());
  for (const auto& item : items) {
    equivalence::EquivalencePair p;
    p.answer_id = item.answer_id;
    if (item.status == ItemStatus::kOk && item.param_verdict) {
      p.param_verdict = *item.param_verdict;
      p.return_verdict = item.return_verdict.value_or(false);
      p.impl_verdict = item.impl_verdict.value_or(equivalence::Verdict::kNotEquivalent);
    }
    pairs.push_back(std::move(p));
  }
  return equivalence::aggregate(pairs, manual, equivalence::AggregateMode::kLenient);
}

std::string metrics_row(const RunRecord& r) {
  std::string row = "| " + r.label + " |";
  if (!r.metrics) return row + " n/a | n/a | n/a | n/a |";
  const auto& m = *r.metrics;
  for (double v : {m.m_acc, m.p_acc, m.r_acc, m.pr_acc}) row += " " + format_percent(v, m.total) + " |";
  return row;
}

}  // namespace

std::string_view to_string(ItemStatus status) {
  return status == ItemStatus::kOk ? "ok" : "error";
}

std::size_t RunRecord::error_count() const {
  std::size_t n = 0;
  for (const auto& i : items) n += i.status == ItemStatus::kError;
  return n;
}

std::size_t RunRecord::ok_count() const { return items.size() - error_count(); }

std::string ablation_label(const prompt::Ablation& a) {
  if (a.use_cot && a.use_few_shot) return "Code2API";
  if (a.use_few_shot) return "w/o CoT";
  if (a.use_cot) return "w/o few-shot";
  return "w/o both";
}

void validate(const RunConfig& cfg) {
  if (cfg.corpus_path.empty()) throw ConfigError("corpus path is required");
  if (!fs::exists(cfg.corpus_path)) throw ConfigError("corpus not found: " + cfg.corpus_path.string());
  if (cfg.out_dir.empty()) throw ConfigError("output directory is required");
  if (cfg.backend == BackendKind::kMock && !cfg.fixtures_path) {
    throw ConfigError("mock backend requires a fixtures file");
  }
  if (cfg.fixtures_path && !fs::exists(*cfg.fixtures_path)) {
    throw ConfigError("fixtures not found: " + cfg.fixtures_path->string());
  }
  if (cfg.ground_truth_path && !fs::exists(*cfg.ground_truth_path)) {
    throw ConfigError("ground truth not found: " + cfg.ground_truth_path->string());
  }
  if (cfg.manual_path && !cfg.ground_truth_path) {
    throw ConfigError("manual resolutions need ground truth");
  }
  if (cfg.max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.model_name.empty()) throw ConfigError("model name is required");
}

std::map<std::int64_t, code_model::ApiSignature> load_ground_truth(const fs::path& path,
                                                                   Language language) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::map<std::int64_t, code_model::ApiSignature> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    const auto where = path.string() + " line " + std::to_string(n);
    try {
      const auto j = json::parse(line);
      const auto id = j.at("answer_id").get<std::int64_t>();
      const Language lang =
          j.contains("language") ? parse_language(j.at("language").get<std::string>()) : language;
      std::string source;
      if (j.contains("source")) {
        source = j.at("source").get<std::string>();
      } else {
        fs::path p = j.at("source_path").get<std::string>();
        if (p.is_relative()) p = path.parent_path() / p;
        source = read_file(p);
      }
      if (!out.emplace(id, code_model::parse_method_signature(source, lang)).second) {
        throw std::runtime_error("duplicate answer_id " + std::to_string(id));
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  }
  return out;
}

std::string prompt_hash(std::string_view prompt_text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(prompt_text.data(), prompt_text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

fs::path cache_entry(const fs::path& cache_dir, std::int64_t answer_id, std::string_view hash,
                     std::string_view model_name) {
  return cache_dir / (std::to_string(answer_id) + "-" + std::string(hash) + "-" +
                      text::fnv1a_hex(model_name) + ".json");
}

CachingBackend::CachingBackend(std::shared_ptr<llm::Backend> inner, fs::path cache_dir)
    : inner_(std::move(inner)), dir_(std::move(cache_dir)) {
  fs::create_directories(dir_);
}

llm::CompletionResponse CachingBackend::complete(const llm::CompletionRequest& request) {
  const auto hash = prompt_hash(request.prompt_text);
  const auto path = cache_entry(dir_, request.answer_id, hash, request.model_name);
  std::ifstream in(path);
  if (in) {
    const auto j = json::parse(in, nullptr, false);
    if (!j.is_discarded() && j.value("prompt_hash", "") == hash &&
        j.value("model", "") == request.model_name) {
      llm::CompletionResponse r;
      r.raw_text = j.value("raw_text", "");
      r.truncated = j.value("truncated", false);
      r.provider_id = "cache";
      return r;
    }
  }
  auto r = inner_->complete(request);
  const json entry = {{"answer_id", request.answer_id},
                      {"prompt_hash", hash},
                      {"model", request.model_name},
                      {"provider", r.provider_id},
                      {"raw_text", r.raw_text},
                      {"truncated", r.truncated}};
  write_atomically(path, entry.dump());
  return r;
}

RunRecord run_benchmark(const RunConfig& cfg, const RunHooks& hooks) {
  validate(cfg);

  std::optional<std::map<std::int64_t, code_model::ApiSignature>> truth;
  equivalence::ManualMap manual;
  std::vector<prompt::FewShotExample> bank;
  std::optional<compile::Toolchain> toolchain;
  std::shared_ptr<llm::Backend> backend;
  try {
    if (cfg.ground_truth_path) truth = load_ground_truth(*cfg.ground_truth_path, cfg.language);
    if (cfg.manual_path) manual = equivalence::load_manual(*cfg.manual_path);
    bank = cfg.bank_path ? prompt::load_bank(*cfg.bank_path) : prompt::builtin_bank(cfg.language);
    if (cfg.compile_check) {
      const auto list =
          compile::load_toolchains(cfg.toolchains_path.value_or(compile::default_toolchains_path()));
      toolchain = compile::toolchain_for(list, cfg.language);
    }
    backend = hooks.backend ? hooks.backend : make_backend(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  std::erase_if(bank, [&](const auto& ex) { return ex.context.language != cfg.language; });
  const std::size_t k = std::min(cfg.few_shot_k, bank.size());

  fs::create_directories(cfg.out_dir / "prompts");
  if (cfg.use_cache) backend = std::make_shared<CachingBackend>(backend, cfg.out_dir / "cache");
  llm::ClientOptions copts;
  copts.concurrency = cfg.workers;
  copts.sleep = hooks.sleep;
  llm::Client client(backend, copts);

  Shared shared{cfg, hooks, prompt::default_cot(cfg.language), prompt::select_few_shot(bank, k),
                std::move(truth), std::move(toolchain), &client, cfg.out_dir / "prompts"};

  const auto loaded = corpus::load_corpus(cfg.corpus_path);
  RunRecord record;
  record.label = ablation_label(cfg.ablation);
  record.model_name = cfg.model_name;
  record.language = cfg.language;
  record.ablation = cfg.ablation;
  record.items.resize(loaded.records.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < loaded.records.size(); i = next++) {
      try {
        record.items[i] = process(shared, loaded.records[i]);
      } catch (const std::exception& e) {
        record.items[i] = error_item(loaded.records[i].answer_id, "internal", e.what());
      }
    }
  };
  const std::size_t n_workers = std::max<std::size_t>(1, std::min(cfg.workers, loaded.records.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& e : loaded.errors) {
    record.items.push_back(error_item(0, "corpus", "line " + std::to_string(e.line) + ": " + e.message));
  }

  if (shared.truth) record.metrics = metrics_for(record.items, manual);
  if (shared.toolchain) {
    CompileSummary cs;
    for (const auto& item : record.items) {
      if (!item.compile) continue;
      ++cs.attempted;
      cs.compiled += item.compile->success;
      cs.compiled_first_try += item.compile->success && item.compile->rounds_used == 0;
    }
    cs.rate = cs.attempted == 0 ? 0.0 : static_cast<double>(cs.compiled) / cs.attempted;
    record.compile_summary = cs;
  }
  return record;
}

std::string format_percent(double ratio, std::size_t total) {
  if (total == 0) return "n/a";
  char buf[32];
  // Rounded in tenths of a percent; the epsilon keeps 0.865 from landing on 86.4.
  std::snprintf(buf, sizeof buf, "%.1f%%", std::floor(ratio * 1000.0 + 0.5 + 1e-9) / 10.0);
  return buf;
}

std::string render_markdown(const std::vector<RunRecord>& records) {
  std::string out = "| Approach | M-Acc | P-Acc | R-Acc | PR-Acc |\n|---|---|---|---|---|\n";
  for (const auto& r : records) out += metrics_row(r) + "\n";
  bool any_compile = false;
  for (const auto& r : records) any_compile |= r.compile_summary.has_value();
  if (any_compile) {
    out += "\n| Approach | Compiled | First try | Compilation rate |\n|---|---|---|---|\n";
    for (const auto& r : records) {
      if (!r.compile_summary) continue;
      const auto& c = *r.compile_summary;
      out += "| " + r.label + " | " + std::to_string(c.compiled) + "/" + std::to_string(c.attempted) +
             " | " + std::to_string(c.compiled_first_try) + " | " + format_percent(c.rate, c.attempted) +
             " |\n";
    }
  }
  out += "\n";
  for (const auto& r : records) {
    out += "- " + r.label + ": " + std::to_string(r.items.size()) + " items, " +
           std::to_string(r.error_count()) + " errors, model " + r.model_name + "\n";
    if (r.metrics) {
      for (const auto& w : r.metrics->warnings) out += "  - warning: " + w + "\n";
    }
  }
  return out;
}

std::string render_markdown(const RunRecord& record) {
  return render_markdown(std::vector<RunRecord>{record});
}

fs::path emit_report(const RunRecord& record, ReportFormat format, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::string out;
  if (format == ReportFormat::kMarkdownTable) {
    out = render_markdown(record);
  } else {
    json header = {{"kind", "run"},
                   {"label", record.label},
                   {"model", record.model_name},
                   {"language", record.language},
                   {"use_cot", record.ablation.use_cot},
                   {"use_few_shot", record.ablation.use_few_shot}};
    out += header.dump() + "\n";
    for (const auto& item : record.items) out += item_json(item).dump() + "\n";
    json trailer = {{"kind", "summary"}, {"items", record.items.size()}, {"errors", record.error_count()}};
    if (record.metrics) trailer["metrics"] = metrics_json(*record.metrics);
    if (record.compile_summary) {
      const auto& c = *record.compile_summary;
      trailer["compile"] = {{"attempted", c.attempted}, {"compiled", c.compiled},
                            {"compiled_first_try", c.compiled_first_try}, {"rate", c.rate}};
    }
    out += trailer.dump() + "\n";
  }
  write_atomically(path, out);
  return path;
}

RunRecord load_line_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  RunRecord r;
  std::string line;
  std::size_t n = 0;
  bool header = false;
  bool trailer = false;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      const auto j = json::parse(line);
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "run") {
        r.label = j.at("label").get<std::string>();
        r.model_name = j.at("model").get<std::string>();
        r.language = j.at("language").get<Language>();
        r.ablation.use_cot = j.at("use_cot").get<bool>();
        r.ablation.use_few_shot = j.at("use_few_shot").get<bool>();
        header = true;
      } else if (kind == "item") {
        r.items.push_back(item_from(j));
      } else if (kind == "summary") {
        if (j.contains("metrics")) r.metrics = metrics_from(j.at("metrics"));
        if (j.contains("compile")) {
          const auto& c = j.at("compile");
          r.compile_summary = CompileSummary{c.at("attempted").get<std::size_t>(),
                                             c.at("compiled").get<std::size_t>(),
                                             c.at("compiled_first_try").get<std::size_t>(),
                                             c.at("rate").get<double>()};
        }
        trailer = true;
      } else {
        throw std::runtime_error("unknown record kind \"" + kind + "\"");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + " line " + std::to_string(n) + ": " + e.what());
    }
  }
  if (!header || !trailer) throw std::runtime_error(path.string() + ": missing run header or summary");
  return r;
}

}  // namespace code2api::eval
