// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include <doctest.h>

#include <fstream>
#include <set>

#include "code2api/corpus.hpp"
#include "code2api/eval_harness.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

using namespace code2api;
using namespace code2api::eval;
using code2api::testing::data_path;
using code2api::testing::read_file;
using code2api::testing::TempDir;
using equivalence::Verdict;

namespace {

nlohmann::json expected() {
  return nlohmann::json::parse(code2api::testing::read_data("eval/expected.json"));
}

RunConfig base_config(const std::filesystem::path& out) {
  RunConfig cfg;
  cfg.corpus_path = data_path("eval/corpus.jsonl");
  cfg.ground_truth_path = data_path("eval/truth.jsonl");
  cfg.fixtures_path = data_path("eval/fixtures.json");
  cfg.out_dir = out;
  return cfg;
}

RunHooks quiet_hooks() {
  RunHooks h;
  h.sleep = [](std::chrono::milliseconds) {};
  return h;
}

// Agrees on item 1 only, like a reviewer reading both loops.
std::optional<bool> test_oracle(std::int64_t id, const code_model::ApiSignature&,
                                const code_model::ApiSignature&) {
  if (id == 1) return true;
  return std::nullopt;
}

void check_counts(const equivalence::MetricsSummary& m, const nlohmann::json& e) {
  CHECK(m.total == e["total"].get<std::size_t>());
  CHECK(m.p_count == e["p_count"].get<std::size_t>());
  CHECK(m.r_count == e["r_count"].get<std::size_t>());
  CHECK(m.m_count == e["m_count"].get<std::size_t>());
  CHECK(m.pr_count == e["pr_count"].get<std::size_t>());
  CHECK(m.p_acc == doctest::Approx(double(m.p_count) / m.total));
}

const ItemRecord& item(const RunRecord& r, std::int64_t id) {
  for (const auto& i : r.items) {
    if (i.answer_id == id) return i;
  }
  throw std::runtime_error("no item " + std::to_string(id));
}

// Fails every request for the listed answers.
class FlakyBackend : public llm::Backend {
 public:
  FlakyBackend(std::shared_ptr<llm::Backend> inner, std::set<std::int64_t> failing)
      : inner_(std::move(inner)), failing_(std::move(failing)) {}
  llm::CompletionResponse complete(const llm::CompletionRequest& r) override {
    if (failing_.count(r.answer_id)) {
      throw llm::BackendError(llm::BackendError::Kind::kTransport, "connection reset");
    }
    return inner_->complete(r);
  }
  std::string provider_id() const override { return "flaky"; }

 private:
  std::shared_ptr<llm::Backend> inner_;
  std::set<std::int64_t> failing_;
};

std::shared_ptr<llm::MockBackend> fixture_backend() {
  return std::make_shared<llm::MockBackend>(llm::load_fixtures(data_path("eval/fixtures.json")));
}

}  // namespace

TEST_CASE("three-item mock run matches the hand-computed verdicts") {
  TempDir out;
  const auto e = expected();
  const auto record = run_benchmark(base_config(out.path()), quiet_hooks());
  REQUIRE(record.items.size() == 3);
  for (const auto& [key, want] : e["items"].items()) {
    const auto& got = item(record, std::stoll(key));
    INFO("item ", key, ": ", got.error_message);
    if (want["status"] == "error") {
      CHECK(got.status == ItemStatus::kError);
      CHECK(got.error_kind == want["error_kind"].get<std::string>());
      CHECK_FALSE(got.param_verdict);
      continue;
    }
    REQUIRE(got.status == ItemStatus::kOk);
    CHECK(equivalence::to_string(*got.param_verdict) == want["params"].get<std::string>());
    CHECK(*got.return_verdict == want["returns"].get<bool>());
    CHECK(equivalence::to_string(*got.impl_verdict) == want["impl_without_oracle"].get<std::string>());
  }
  REQUIRE(record.metrics);
  check_counts(*record.metrics, e["without_oracle"]);
  CHECK_FALSE(record.metrics->warnings.empty());
  CHECK(record.error_count() + record.ok_count() == 3);
  CHECK(record.label == "Code2API");
}

TEST_CASE("oracle and manual resolutions settle the implementation verdict") {
  const auto e = expected();
  SUBCASE("oracle") {
    TempDir out;
    auto hooks = quiet_hooks();
    hooks.oracle = test_oracle;
    const auto record = run_benchmark(base_config(out.path()), hooks);
    check_counts(*record.metrics, e["with_oracle"]);
    CHECK(*item(record, 1).impl_verdict == Verdict::kEquivalent);
    CHECK(record.metrics->warnings.empty());
  }
  SUBCASE("manual file") {
    TempDir out;
    auto cfg = base_config(out.path());
    cfg.manual_path = data_path("eval/manual.jsonl");
    const auto record = run_benchmark(cfg, quiet_hooks());
    check_counts(*record.metrics, e["with_oracle"]);
  }
}

TEST_CASE("prompts are written per item") {
  TempDir out;
  const auto record = run_benchmark(base_config(out.path()), quiet_hooks());
  const auto corpus = corpus::load_corpus(data_path("eval/corpus.jsonl")).records;
  const auto plan = prompt::default_cot(Language::kJava);
  const auto examples = prompt::select_few_shot(prompt::builtin_bank(Language::kJava), 5);
  for (const auto& ctx : corpus) {
    const auto written = read_file(out.path() / "prompts" / (std::to_string(ctx.answer_id) + ".txt"));
    const auto bundle = prompt::render_prompt(ctx, plan, examples, {});
    CHECK(written == bundle.rendered);
    CHECK(item(record, ctx.answer_id).prompt_hash == prompt_hash(bundle.rendered));
  }
}

TEST_CASE("ablation flags only change prompt content") {
  const auto plan = prompt::default_cot(Language::kJava);
  const auto cot = prompt::render_cot(plan);
  const auto examples_marker = std::string("Here are some examples:");
  std::map<std::string, RunRecord> runs;
  std::map<std::string, std::map<std::int64_t, std::string>> prompts;
  for (const prompt::Ablation a : {prompt::Ablation{true, true}, prompt::Ablation{false, true},
                                   prompt::Ablation{true, false}, prompt::Ablation{false, false}}) {
    TempDir out;
    auto cfg = base_config(out.path());
    cfg.ablation = a;
    const auto label = ablation_label(a);
    runs[label] = run_benchmark(cfg, quiet_hooks());
    for (std::int64_t id : {1, 2, 3}) {
      prompts[label][id] = read_file(out.path() / "prompts" / (std::to_string(id) + ".txt"));
    }
  }
  REQUIRE(runs.size() == 4);
  for (std::int64_t id : {1, 2, 3}) {
    const auto& full = prompts["Code2API"][id];
    REQUIRE(full.find(cot) != std::string::npos);
    REQUIRE(full.find(examples_marker) != std::string::npos);
    CHECK(prompts["w/o CoT"][id].find(cot) == std::string::npos);
    CHECK(prompts["w/o both"][id].find(cot) == std::string::npos);
    CHECK(prompts["w/o few-shot"][id].find(examples_marker) == std::string::npos);
    CHECK(prompts["w/o both"][id].find(examples_marker) == std::string::npos);

    // Removing the CoT block from the full prompt gives the w/o CoT prompt.
    std::string without_cot = full;
    without_cot.erase(without_cot.find(cot), cot.size() + 2);
    CHECK(without_cot == prompts["w/o CoT"][id]);
  }
  // Same replies, same generated APIs and verdicts in every configuration.
  for (const auto& [label, run] : runs) {
    CHECK(run.label == label);
    for (std::size_t i = 0; i < run.items.size(); ++i) {
      const auto& a = run.items[i];
      const auto& b = runs["Code2API"].items[i];
      CHECK(a.api == b.api);
      CHECK(a.param_verdict == b.param_verdict);
      CHECK(a.return_verdict == b.return_verdict);
      CHECK(a.status == b.status);
    }
  }
}

TEST_CASE("cached replies are reused and an interrupted run resumes") {
  TempDir out;
  auto cfg = base_config(out.path());

  auto mock = fixture_backend();
  auto hooks = quiet_hooks();
  hooks.backend = std::make_shared<FlakyBackend>(mock, std::set<std::int64_t>{2});
  const auto first = run_benchmark(cfg, hooks);
  CHECK(item(first, 2).status == ItemStatus::kError);
  CHECK(item(first, 2).error_kind == "backend");
  CHECK(mock->calls() == 2);

  auto mock2 = fixture_backend();
  hooks.backend = mock2;
  const auto second = run_benchmark(cfg, hooks);
  CHECK(mock2->calls() == 1);  // only the failed item
  CHECK(item(second, 1).cached);
  CHECK_FALSE(item(second, 2).cached);
  CHECK(item(second, 2).status == ItemStatus::kOk);

  auto mock3 = fixture_backend();
  hooks.backend = mock3;
  const auto third = run_benchmark(cfg, hooks);
  CHECK(mock3->calls() == 0);
  for (const auto& i : third.items) CHECK(i.cached);

  SUBCASE("the model name is part of the key") {
    auto mock4 = fixture_backend();
    hooks.backend = mock4;
    cfg.model_name = "another-model";
    run_benchmark(cfg, hooks);
    CHECK(mock4->calls() == 3);
  }
  SUBCASE("disabling the cache queries every item") {
    auto mock4 = fixture_backend();
    hooks.backend = mock4;
    cfg.use_cache = false;
    run_benchmark(cfg, hooks);
    CHECK(mock4->calls() == 3);
  }
}

TEST_CASE("mock runs are deterministic") {
  TempDir a;
  TempDir b;
  auto ca = base_config(a.path());
  auto cb = base_config(b.path());
  cb.workers = 1;
  CHECK(run_benchmark(ca, quiet_hooks()) == run_benchmark(cb, quiet_hooks()));
}

TEST_CASE("empty corpus") {
  TempDir out;
  const auto corpus = out.path() / "empty.jsonl";
  std::ofstream(corpus).close();
  auto cfg = base_config(out.path());
  cfg.corpus_path = corpus;
  const auto record = run_benchmark(cfg, quiet_hooks());
  CHECK(record.items.empty());
  REQUIRE(record.metrics);
  CHECK(record.metrics->total == 0);
  const auto path = emit_report(record, ReportFormat::kMarkdownTable, out.path() / "report.md");
  const auto md = read_file(path);
  CHECK(md.find("| Code2API | n/a | n/a | n/a | n/a |") != std::string::npos);
}

TEST_CASE("bad corpus lines become item errors") {
  TempDir out;
  const auto corpus = out.path() / "corpus.jsonl";
  {
    std::ofstream f(corpus);
    f << read_file(data_path("eval/corpus.jsonl")) << "{not json\n";
  }
  auto cfg = base_config(out.path());
  cfg.corpus_path = corpus;
  const auto record = run_benchmark(cfg, quiet_hooks());
  CHECK(record.items.size() == 4);
  CHECK(record.error_count() == 2);
  CHECK(record.items.back().error_kind == "corpus");
  CHECK(record.items.back().error_message.find("line 4") != std::string::npos);
}

TEST_CASE("percentages") {
  CHECK(format_percent(0.435, 200) == "43.5%");
  CHECK(format_percent(0.65, 200) == "65.0%");
  CHECK(format_percent(0.66, 200) == "66.0%");
  CHECK(format_percent(0.865, 200) == "86.5%");
  CHECK(format_percent(1.0, 1) == "100.0%");
  CHECK(format_percent(0.0, 5) == "0.0%");
  CHECK(format_percent(0.0, 0) == "n/a");
  for (int n = 1; n <= 400; ++n) {
    for (int k = 0; k <= n; k += 7) {
      const double ratio = double(k) / n;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f%%", std::round(k * 1000.0 / n) / 10.0);
      CHECK(format_percent(ratio, n) == buf);
    }
  }
}

TEST_CASE("markdown report keeps the metric column order") {
  RunRecord r;
  r.label = "Code2API";
  equivalence::MetricsSummary m;
  m.total = 200;
  m.p_acc = 0.65;
  m.r_acc = 0.66;
  m.m_acc = 0.435;
  m.pr_acc = 0.865;
  r.metrics = m;
  const auto md = render_markdown(r);
  CHECK(md.find("| Approach | M-Acc | P-Acc | R-Acc | PR-Acc |") != std::string::npos);
  CHECK(md.find("| Code2API | 43.5% | 65.0% | 66.0% | 86.5% |") != std::string::npos);
  CHECK(md.find("Compilation rate") == std::string::npos);

  r.compile_summary = CompileSummary{200, 190, 170, 0.95};
  CHECK(render_markdown(r).find("| Code2API | 190/200 | 170 | 95.0% |") != std::string::npos);

  RunRecord other = r;
  other.label = "w/o CoT";
  const auto grid = render_markdown(std::vector<RunRecord>{r, other});
  CHECK(grid.find("| Code2API |") < grid.find("| w/o CoT |"));
}

TEST_CASE("line records round-trip, compile outcomes included") {
  TempDir out;
  auto cfg = base_config(out.path());
  cfg.compile_check = true;
  cfg.toolchains_path = CODE2API_TOOLCHAINS;
  auto hooks = quiet_hooks();
  hooks.oracle = test_oracle;
  const auto record = run_benchmark(cfg, hooks);
  REQUIRE(record.compile_summary);
  CHECK(record.compile_summary->attempted == 2);
  CHECK(record.compile_summary->compiled == 2);
  CHECK(record.compile_summary->compiled_first_try == 2);
  CHECK(record.compile_summary->rate == 1.0);

  const auto path = emit_report(record, ReportFormat::kLineRecords, out.path() / "run.jsonl");
  CHECK(load_line_records(path) == record);

  const auto md = read_file(emit_report(record, ReportFormat::kMarkdownTable, out.path() / "r.md"));
  CHECK(md.find("| Code2API | 2/2 | 2 | 100.0% |") != std::string::npos);
  // 3 items: M 1/3, P 2/3, R 1/3, PR 2/3.
  CHECK(md.find("| Code2API | 33.3% | 66.7% | 33.3% | 66.7% |") != std::string::npos);
}

TEST_CASE("configuration errors") {
  TempDir out;
  auto cfg = base_config(out.path());
  SUBCASE("mock without fixtures") {
    cfg.fixtures_path.reset();
    CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
  }
  SUBCASE("missing corpus") {
    cfg.corpus_path = out.path() / "nope.jsonl";
    CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
  }
  SUBCASE("bad ground truth") {
    const auto bad = out.path() / "truth.jsonl";
    std::ofstream(bad) << "{\"answer_id\": 1, \"source\": \"no method here\"}\n";
    cfg.ground_truth_path = bad;
    CHECK_THROWS_WITH_AS(run_benchmark(cfg), doctest::Contains("line 1"), ConfigError);
  }
  SUBCASE("missing toolchain config") {
    cfg.compile_check = true;
    cfg.toolchains_path = out.path() / "none.json";
    CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
  }
  SUBCASE("rounds") {
    cfg.max_rounds = 0;
    CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
  }
}

TEST_CASE("prompt hash") {
  CHECK(prompt_hash("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(prompt_hash("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
