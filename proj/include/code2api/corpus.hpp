// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "code2api/language.hpp"

// Stack Exchange posts dump ingestion: streaming row parser, markup handling,
// candidate filters and the one-record-per-line corpus file.
namespace code2api::corpus {

struct SnippetContext {
  std::int64_t question_id = 0;
  std::int64_t answer_id = 0;
  std::string question_title;
  std::string question_body;  // plain text, code regions verbatim
  std::string answer_body;    // plain text, code regions verbatim
  std::string code_snippet;
  Language language = Language::kJava;
  std::int64_t answer_score = 0;
  std::int64_t view_count = 0;
  std::vector<std::string> tags;
  bool is_accepted = false;

  friend bool operator==(const SnippetContext&, const SnippetContext&) = default;
};

/// Returns the first violated invariant, if any.
std::optional<std::string> validate(const SnippetContext& ctx);

struct FilterCriteria {
  bool require_how_to_title = true;
  std::int64_t min_answer_score = 2;
  bool require_single_code_block = true;
  std::int64_t max_view_rank = 20000;
  std::string language_tag = "java";
  /// Only accepted answers qualify.
  bool require_accepted = true;
};

/// Throws std::invalid_argument when min_answer_score < 0 or max_view_rank < 1.
void validate(const FilterCriteria& criteria);

enum class PostType { kQuestion = 1, kAnswer = 2 };

/// One row of the posts archive, attributes as stored (Body is still markup).
struct RawPost {
  std::int64_t id = 0;
  PostType type = PostType::kQuestion;
  std::optional<std::int64_t> parent_id;
  std::optional<std::int64_t> accepted_answer_id;
  std::string title;
  std::string body;
  std::int64_t score = 0;
  std::int64_t view_count = 0;
  std::vector<std::string> tags;
};

struct DumpStats {
  std::size_t rows = 0;
  std::size_t emitted = 0;
  std::size_t skipped = 0;  // malformed rows
  std::vector<std::string> diagnostics;  // first few skip reasons
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Streams rows in document order. Questions are emitted when they carry
/// `language_tag`; answers are always emitted (their parent decides later).
/// Other post types are ignored. Rows missing Id, PostTypeId or Body, or a
/// question missing Title, an answer missing ParentId, or any unparsable
/// number are skipped and counted. Throws IngestError on unreadable input or
/// broken XML.
DumpStats parse_data_dump(std::istream& in, std::string_view language_tag,
                          const std::function<void(RawPost&&)>& sink);
DumpStats parse_data_dump(const std::filesystem::path& path, std::string_view language_tag,
                          const std::function<void(RawPost&&)>& sink);

/// "<java><arrays>" or "|java|arrays|" -> {"java", "arrays"}, lowercased.
std::vector<std::string> parse_tags(std::string_view tags);

/// Decodes &lt; &gt; &amp; &quot; &apos; and numeric references.
std::string decode_entities(std::string_view s);

/// Plain text of a post body. Tags are dropped, block elements become line
/// breaks, and the content of <pre> blocks is kept verbatim after decoding.
std::string html_to_text(std::string_view html);

/// Decoded contents of every <code> element inside a <pre> block.
std::vector<std::string> code_blocks(std::string_view html);

class NoCodeSnippet : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds the context for an answer. The snippet is the longest code block.
/// Throws NoCodeSnippet when the answer has no code block and
/// std::invalid_argument when `answer` does not belong to `question`.
SnippetContext extract_context(const RawPost& question, const RawPost& answer, Language language);

/// Case-insensitive "how to" / "how do i" / "how can i" anywhere in the title.
bool is_how_to_title(std::string_view title);

/// Questions ordered by view count (descending), ties by lower id.
class ViewRanking {
 public:
  void add(std::int64_t question_id, std::int64_t view_count);
  /// 1-based rank; 0 when the question was never added.
  std::size_t rank_of(std::int64_t question_id) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    std::int64_t views;
    std::int64_t id;
  };
  void sort() const;

  mutable std::vector<Entry> entries_;
  mutable std::unordered_map<std::int64_t, std::size_t> rank_;
  mutable bool sorted_ = true;
};

/// True iff every enabled criterion passes. The view-rank check is skipped
/// when `ranking` is null.
bool filter_candidates(const SnippetContext& ctx, const FilterCriteria& criteria,
                       std::size_t answer_code_block_count, const ViewRanking* ranking);

struct IngestResult {
  std::vector<SnippetContext> contexts;  // dump order of answers
  DumpStats stats;
  std::size_t candidates = 0;       // answers to a language question
  std::size_t no_code_snippet = 0;  // candidates without a code block
};

/// parse -> extract -> filter over a whole dump.
IngestResult ingest(const std::filesystem::path& dump, Language language,
                    const FilterCriteria& criteria);

struct LineError {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  std::vector<SnippetContext> records;
  std::vector<LineError> errors;
};

void store_corpus(const std::vector<SnippetContext>& contexts, const std::filesystem::path& path);
/// Throws IngestError when the file cannot be opened.
LoadResult load_corpus(const std::filesystem::path& path);

}  // namespace code2api::corpus
