// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include "code2api/corpus.hpp"
#include "code2api/json_io.hpp"
#include "code2api/text.hpp"

namespace code2api::corpus {

IngestResult ingest(const std::filesystem::path& dump, Language language,
                    const FilterCriteria& criteria) {
  validate(criteria);
  IngestResult result;
  ViewRanking ranking;
  // Dump rows are ordered by Id and answers always follow their question, so
  // one pass suffices. Only questions that can still pass are retained.
  std::unordered_map<std::int64_t, RawPost> questions;
  // Contexts that passed every criterion except the view rank.
  std::vector<SnippetContext> pending;

  result.stats = parse_data_dump(dump, criteria.language_tag, [&](RawPost&& post) {
    if (post.type == PostType::kQuestion) {
      ranking.add(post.id, post.view_count);
      if (criteria.require_how_to_title && !is_how_to_title(post.title)) return;
      if (criteria.require_accepted && !post.accepted_answer_id) return;
      questions.emplace(post.id, std::move(post));
      return;
    }
    const auto q = questions.find(*post.parent_id);
    if (q == questions.end()) return;
    ++result.candidates;
    SnippetContext ctx;
    try {
      ctx = extract_context(q->second, post, language);
    } catch (const NoCodeSnippet&) {
      ++result.no_code_snippet;
      return;
    }
    if (filter_candidates(ctx, criteria, code_blocks(post.body).size(), nullptr)) {
      pending.push_back(std::move(ctx));
    }
  });

  for (auto& ctx : pending) {
    if (filter_candidates(ctx, criteria, 1, &ranking)) result.contexts.push_back(std::move(ctx));
  }
  return result;
}

void store_corpus(const std::vector<SnippetContext>& contexts, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IngestError("cannot write corpus " + path.string());
  for (const auto& ctx : contexts) out << nlohmann::json(ctx).dump() << '\n';
  if (!out) throw IngestError("write failed for corpus " + path.string());
}

LoadResult load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open corpus " + path.string());
  LoadResult result;
  std::unordered_set<std::int64_t> seen;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (text::trim(line).empty()) continue;
    try {
      auto ctx = nlohmann::json::parse(line).get<SnippetContext>();
      if (const auto problem = validate(ctx)) throw std::invalid_argument(*problem);
      if (!seen.insert(ctx.answer_id).second) {
        throw std::invalid_argument("duplicate answer_id " + std::to_string(ctx.answer_id));
      }
      result.records.push_back(std::move(ctx));
    } catch (const std::exception& e) {
      result.errors.push_back({n, e.what()});
    }
  }
  return result;
}

}  // namespace code2api::corpus
