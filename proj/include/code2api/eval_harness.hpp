// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "code2api/api_extractor.hpp"
#include "code2api/compile_check.hpp"
#include "code2api/equivalence.hpp"
#include "code2api/llm_backend.hpp"
#include "code2api/prompt_builder.hpp"

// Benchmark runs: prompt, query, extract, compile and compare every corpus
// item, then report the metrics.
namespace code2api::eval {

enum class BackendKind { kMock, kLive };

struct RunConfig {
  std::filesystem::path corpus_path;
  std::optional<std::filesystem::path> ground_truth_path;
  std::optional<std::filesystem::path> manual_path;  // manual resolutions
  BackendKind backend = BackendKind::kMock;
  std::optional<std::filesystem::path> fixtures_path;
  std::optional<std::filesystem::path> bank_path;  // built-in bank when unset
  prompt::Ablation ablation;
  Language language = Language::kJava;
  std::filesystem::path out_dir;
  bool compile_check = false;
  int max_rounds = compile::kDefaultMaxRounds;
  std::optional<std::filesystem::path> toolchains_path;
  std::string model_name = std::string(llm::kDefaultModel);
  std::size_t few_shot_k = 5;
  std::size_t workers = llm::kDefaultConcurrency;
  bool use_cache = true;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ConfigError on the first problem.
void validate(const RunConfig& cfg);

/// Ground truth file: one {"answer_id", "source" | "source_path", "language"?}
/// per line. Relative paths resolve against the file's directory.
std::map<std::int64_t, code_model::ApiSignature> load_ground_truth(const std::filesystem::path& path,
                                                                   Language language);

enum class ItemStatus { kOk, kError };

struct ItemRecord {
  std::int64_t answer_id = 0;
  ItemStatus status = ItemStatus::kOk;
  std::string error_kind;  // corpus, prompt, backend, extract, parse, ground_truth
  std::string error_message;
  std::string prompt_hash;
  bool cached = false;
  std::optional<extract::GeneratedApi> api;
  std::optional<compile::CompileOutcome> compile;
  std::optional<equivalence::Verdict> param_verdict;
  std::optional<bool> return_verdict;
  std::optional<equivalence::Verdict> impl_verdict;

  friend bool operator==(const ItemRecord&, const ItemRecord&) = default;
};

struct CompileSummary {
  std::size_t attempted = 0;
  std::size_t compiled = 0;
  std::size_t compiled_first_try = 0;
  double rate = 0;

  friend bool operator==(const CompileSummary&, const CompileSummary&) = default;
};

struct RunRecord {
  std::string label;  // approach name for reports
  std::string model_name;
  Language language = Language::kJava;
  prompt::Ablation ablation;
  std::vector<ItemRecord> items;
  std::optional<equivalence::MetricsSummary> metrics;
  std::optional<CompileSummary> compile_summary;

  std::size_t error_count() const;
  std::size_t ok_count() const;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// "Code2API", "w/o CoT", "w/o few-shot" or "w/o both".
std::string ablation_label(const prompt::Ablation& ablation);

/// Optional collaborators. A null backend means the one the config names.
struct RunHooks {
  std::shared_ptr<llm::Backend> backend;
  equivalence::FunctionalityOracle oracle;
  std::function<void(std::chrono::milliseconds)> sleep;
};

/// Processes every corpus item. Item failures are recorded, never thrown.
/// Prompts go to out_dir/prompts/<answer_id>.txt and backend replies are
/// cached under out_dir/cache, keyed by answer id, prompt hash and model.
/// Throws ConfigError for configuration problems only.
RunRecord run_benchmark(const RunConfig& cfg, const RunHooks& hooks = {});

/// Hex SHA-256 of the prompt text.
std::string prompt_hash(std::string_view prompt_text);

/// Response cache entry path for a key.
std::filesystem::path cache_entry(const std::filesystem::path& cache_dir, std::int64_t answer_id,
                                  std::string_view prompt_hash, std::string_view model_name);

/// Serves cached replies and stores fresh ones. Thread-safe.
class CachingBackend : public llm::Backend {
 public:
  CachingBackend(std::shared_ptr<llm::Backend> inner, std::filesystem::path cache_dir);
  llm::CompletionResponse complete(const llm::CompletionRequest& request) override;
  std::string provider_id() const override { return inner_->provider_id(); }

 private:
  std::shared_ptr<llm::Backend> inner_;
  std::filesystem::path dir_;
};

/// One decimal place and a percent sign; "n/a" when total is 0.
std::string format_percent(double ratio, std::size_t total);

enum class ReportFormat { kMarkdownTable, kLineRecords };

/// Markdown: a metrics table in M-Acc, P-Acc, R-Acc, PR-Acc order plus a
/// compilation-rate table when compile checking ran. Line records: a header
/// line, one line per item and a trailer line. Returns the written path.
std::filesystem::path emit_report(const RunRecord& record, ReportFormat format,
                                  const std::filesystem::path& path);
std::string render_markdown(const RunRecord& record);
/// Several runs (an ablation grid) as rows of one table.
std::string render_markdown(const std::vector<RunRecord>& records);
/// Reads a line-record report back.
RunRecord load_line_records(const std::filesystem::path& path);

std::string_view to_string(ItemStatus status);

}  // namespace code2api::eval
