// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

// Extension module. Structured values cross the boundary as JSON text and the
// Python package turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "code2api/api_extractor.hpp"
#include "code2api/code_model.hpp"
#include "code2api/compile_check.hpp"
#include "code2api/corpus.hpp"
#include "code2api/equivalence.hpp"
#include "code2api/eval_harness.hpp"
#include "code2api/json_io.hpp"
#include "code2api/prompt_builder.hpp"
#include "code2api/service.hpp"
#include "code2api/version.hpp"
#include "json.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using nlohmann::json;
using namespace code2api;

namespace {

json signature_json(const code_model::ApiSignature& sig) {
  return {{"language", sig.language},         {"method_name", sig.method_name},
          {"parameters", sig.params},         {"return_type", sig.return_type},
          {"return_statements", sig.return_statements},
          {"imports", sig.imports},           {"throws", sig.throws},
          {"modifiers", sig.modifiers},       {"type_parameters", sig.type_parameters},
          {"wrapper_class", sig.wrapper_class ? json(*sig.wrapper_class) : json(nullptr)}};
}

json metrics_json(const equivalence::MetricsSummary& m) {
  return {{"total", m.total},   {"p_count", m.p_count}, {"r_count", m.r_count},
          {"m_count", m.m_count}, {"pr_count", m.pr_count}, {"p_acc", m.p_acc},
          {"r_acc", m.r_acc},   {"m_acc", m.m_acc},     {"pr_acc", m.pr_acc},
          {"warnings", m.warnings}};
}

json outcome_json(const compile::CompileOutcome& out) {
  json diags = json::array();
  for (const auto& d : out.diagnostics) {
    diags.push_back({{"line", d.line}, {"column", d.column}, {"message", d.message}});
  }
  return {{"success", out.success},           {"diagnostics", diags},
          {"rounds_used", out.rounds_used},   {"final_source", out.final_source},
          {"toolchain_id", out.toolchain_id}, {"raw_output", out.raw_output}};
}

std::vector<compile::Toolchain> toolchains_from(const std::optional<fs::path>& path) {
  return compile::load_toolchains(path ? *path : compile::default_toolchains_path());
}

std::string render_prompt(const std::string& context_json, bool use_cot, bool use_few_shot,
                          std::size_t budget) {
  const auto ctx = json::parse(context_json).get<corpus::SnippetContext>();
  const auto b = prompt::render_default_prompt(ctx, {use_cot, use_few_shot}, budget);
  return json{{"rendered", b.rendered},
              {"token_estimate", b.token_estimate},
              {"role_directive", b.role_directive},
              {"cot", b.cot_text},
              {"examples", b.examples_text},
              {"test_input", b.test_input_text},
              {"format_constraints", b.format_constraints_text}}
      .dump();
}

std::string extract_api(const std::string& raw_text, const std::string& language,
                        std::int64_t answer_id) {
  return json(extract::extract_api(raw_text, parse_language(language), answer_id)).dump();
}

std::string parse_signature(const std::string& source, const std::string& language) {
  return signature_json(code_model::parse_method_signature(source, parse_language(language))).dump();
}

std::string compare(const std::string& truth, const std::string& generated,
                    const std::string& language, std::int64_t answer_id) {
  const Language lang = parse_language(language);
  const auto pair = equivalence::evaluate_pair(answer_id,
                                               code_model::parse_method_signature(truth, lang),
                                               code_model::parse_method_signature(generated, lang));
  return json{{"answer_id", answer_id},
              {"params", equivalence::to_string(pair.param_verdict)},
              {"returns", pair.return_verdict},
              {"impl", equivalence::to_string(pair.impl_verdict)}}
      .dump();
}

std::string compile_source(const std::string& source, const std::string& language,
                           std::int64_t answer_id, const std::optional<fs::path>& toolchains) {
  const auto all = toolchains_from(toolchains);
  const auto& tc = compile::toolchain_for(all, parse_language(language));
  py::gil_scoped_release release;
  return outcome_json(compile::compile_once(source, tc, answer_id)).dump();
}

std::string ingest(const fs::path& dump, const std::string& language, std::int64_t min_score,
                   std::int64_t top, bool require_accepted, const std::optional<fs::path>& out) {
  const Language lang = parse_language(language);
  corpus::FilterCriteria criteria;
  criteria.min_answer_score = min_score;
  criteria.max_view_rank = top;
  criteria.language_tag = std::string(default_tag(lang));
  criteria.require_accepted = require_accepted;
  corpus::validate(criteria);
  corpus::IngestResult result;
  {
    py::gil_scoped_release release;
    result = corpus::ingest(dump, lang, criteria);
  }
  if (out) corpus::store_corpus(result.contexts, *out);
  return json{{"contexts", result.contexts},
              {"rows", result.stats.rows},
              {"candidates", result.candidates},
              {"no_code_snippet", result.no_code_snippet}}
      .dump();
}

std::string run_benchmark(const fs::path& corpus, const fs::path& out_dir,
                          const std::optional<fs::path>& fixtures,
                          const std::optional<fs::path>& truth,
                          const std::optional<fs::path>& manual, const std::string& language,
                          bool use_cot, bool use_few_shot, bool compile_check,
                          std::size_t workers, bool use_cache) {
  eval::RunConfig cfg;
  cfg.corpus_path = corpus;
  cfg.out_dir = out_dir;
  cfg.fixtures_path = fixtures;
  cfg.ground_truth_path = truth;
  cfg.manual_path = manual;
  cfg.language = parse_language(language);
  cfg.ablation = {use_cot, use_few_shot};
  cfg.compile_check = compile_check;
  cfg.workers = workers;
  cfg.use_cache = use_cache;
  eval::RunRecord record;
  {
    py::gil_scoped_release release;
    record = eval::run_benchmark(cfg);
  }
  const auto records =
      eval::emit_report(record, eval::ReportFormat::kLineRecords, out_dir / "records.jsonl");
  json result{{"label", record.label},
              {"items", record.items.size()},
              {"errors", record.error_count()},
              {"records_path", records.string()},
              {"markdown", eval::render_markdown(record)},
              {"metrics", record.metrics ? metrics_json(*record.metrics) : json(nullptr)}};
  if (record.compile_summary) {
    const auto& c = *record.compile_summary;
    result["compile"] = {{"attempted", c.attempted},
                         {"compiled", c.compiled},
                         {"compiled_first_try", c.compiled_first_try},
                         {"rate", c.rate}};
  }
  return result.dump();
}

std::optional<std::string> parse_post_url(const std::string& url) {
  const auto ref = service::parse_post_url(url);
  if (!ref) return std::nullopt;
  return json{{"question_id", ref->question_id ? json(*ref->question_id) : json(nullptr)},
              {"answer_id", ref->answer_id ? json(*ref->answer_id) : json(nullptr)}}
      .dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the code2api package";
  m.attr("__version__") = kVersion;

  py::register_exception<extract::ExtractError>(m, "ExtractError", PyExc_ValueError);
  py::register_exception<prompt::OverBudget>(m, "OverBudget", PyExc_ValueError);
  py::register_exception<code_model::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<compile::CompileError>(m, "CompileError", PyExc_RuntimeError);
  py::register_exception<corpus::IngestError>(m, "IngestError", PyExc_RuntimeError);

  m.def("render_prompt", &render_prompt, py::arg("context_json"), py::arg("use_cot") = true,
        py::arg("use_few_shot") = true, py::arg("budget") = prompt::kDefaultBudget);
  m.def("extract_api", &extract_api, py::arg("raw_text"), py::arg("language"),
        py::arg("answer_id") = 0);
  m.def("parse_signature", &parse_signature, py::arg("source"), py::arg("language"));
  m.def("compare", &compare, py::arg("truth"), py::arg("generated"), py::arg("language"),
        py::arg("answer_id") = 0);
  m.def("compile_source", &compile_source, py::arg("source"), py::arg("language"),
        py::arg("answer_id") = 0, py::arg("toolchains") = std::nullopt);
  m.def("ingest", &ingest, py::arg("dump"), py::arg("language"), py::arg("min_score") = 2,
        py::arg("top") = 20000, py::arg("require_accepted") = true, py::arg("out") = std::nullopt);
  m.def("run_benchmark", &run_benchmark, py::arg("corpus"), py::arg("out_dir"),
        py::arg("fixtures") = std::nullopt, py::arg("truth") = std::nullopt,
        py::arg("manual") = std::nullopt, py::arg("language") = "java",
        py::arg("use_cot") = true, py::arg("use_few_shot") = true,
        py::arg("compile_check") = false, py::arg("workers") = 4, py::arg("use_cache") = true);
  m.def("parse_post_url", &parse_post_url, py::arg("url"));
  m.def("format_percent", &eval::format_percent, py::arg("ratio"), py::arg("total"));
}
