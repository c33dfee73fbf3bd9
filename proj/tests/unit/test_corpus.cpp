// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include <fstream>
#include <sstream>

#include "code2api/corpus.hpp"
#include "code2api/json_io.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace code2api;
using namespace code2api::corpus;
using testing::data_path;
using testing::read_data;

namespace {

std::vector<RawPost> parse_all(const std::string& relative, DumpStats* stats = nullptr) {
  std::vector<RawPost> posts;
  const auto s = parse_data_dump(data_path(relative), "java",
                                 [&](RawPost&& p) { posts.push_back(std::move(p)); });
  if (stats != nullptr) *stats = s;
  return posts;
}

SnippetContext sample_context(std::int64_t id) {
  SnippetContext c;
  c.question_id = id;
  c.answer_id = id + 1000;
  c.question_title = "How to do thing " + std::to_string(id) + "?";
  c.question_body = "Body with <angle> & \"quotes\"\nand a second line";
  c.answer_body = "Use:\n\nfoo();\n";
  c.code_snippet = "foo();\n";
  c.language = id % 2 == 0 ? Language::kJava : Language::kPython;
  c.answer_score = id;
  c.view_count = 10 * id;
  c.tags = {"java", "tag" + std::to_string(id)};
  c.is_accepted = id % 3 == 0;
  return c;
}

RawPost question(std::int64_t id, std::string title, std::string body) {
  RawPost q;
  q.id = id;
  q.type = PostType::kQuestion;
  q.title = std::move(title);
  q.body = std::move(body);
  q.tags = {"java"};
  return q;
}

RawPost answer(std::int64_t id, std::int64_t parent, std::string body) {
  RawPost a;
  a.id = id;
  a.type = PostType::kAnswer;
  a.parent_id = parent;
  a.body = std::move(body);
  return a;
}

}  // namespace

TEST_CASE("two-row dump yields both records") {
  DumpStats stats;
  const auto posts = parse_all("corpus/two_rows.xml", &stats);
  REQUIRE(posts.size() == 2);
  CHECK(stats.skipped == 0);
  CHECK(posts[0].type == PostType::kQuestion);
  CHECK(posts[0].title == "How to convert int[] into List<Integer> in Java?");
  CHECK(posts[0].accepted_answer_id == 11);
  CHECK(posts[0].tags == std::vector<std::string>{"java", "arrays"});
  CHECK(posts[1].parent_id == 10);
}

TEST_CASE("row without Body is skipped and counted") {
  DumpStats stats;
  const auto posts = parse_all("corpus/missing_body.xml", &stats);
  CHECK(posts.size() == 1);
  CHECK(stats.skipped == 1);
  REQUIRE(stats.diagnostics.size() == 1);
  CHECK(stats.diagnostics[0].find("no Body") != std::string::npos);
}

TEST_CASE("empty and unreadable sources") {
  DumpStats stats;
  CHECK(parse_all("corpus/empty.xml", &stats).empty());
  CHECK(stats.rows == 0);
  CHECK_THROWS_AS(parse_all("corpus/does_not_exist.xml"), IngestError);
  CHECK_THROWS_AS(parse_all("corpus/broken.xml"), IngestError);
}

TEST_CASE("tags in both dump spellings") {
  CHECK(parse_tags("<java><Arrays>") == std::vector<std::string>{"java", "arrays"});
  CHECK(parse_tags("|python|list|") == std::vector<std::string>{"python", "list"});
  CHECK(parse_tags("").empty());
}

TEST_CASE("entity decoding") {
  CHECK(decode_entities("a &lt; b &amp;&amp; c &gt; d") == "a < b && c > d");
  CHECK(decode_entities("&quot;x&quot; &apos;y&apos;") == "\"x\" 'y'");
  CHECK(decode_entities("&#65;&#x42;&#x20AC;") == "AB\xe2\x82\xac");
  CHECK(decode_entities("&nbsp; &bogus; & alone") == "&nbsp; &bogus; & alone");
  CHECK(html_to_text("<p>if x &lt; 3</p>") == "if x < 3");
}

TEST_CASE("html_to_text keeps code verbatim") {
  const std::string html =
      "<p>First   paragraph\nwraps.</p><ul><li>one</li><li>two</li></ul>"
      "<pre><code>  indented();\n\n    deeper &amp;&amp; done;\n</code></pre><p>End.</p>";
  CHECK(html_to_text(html) ==
        "First paragraph wraps.\n\none\ntwo\n\n  indented();\n\n    deeper && done;\n\nEnd.");
}

TEST_CASE("remove-item answer: snippet is the loop, verbatim") {
  auto q = question(1, "How to remove specific value from string array in java?",
                    "<p>Remove an item.</p>");
  q.accepted_answer_id = 2;
  const auto a = answer(2, 1, read_data("remove_item/answer_body.html"));
  const auto ctx = extract_context(q, a, Language::kJava);
  CHECK(ctx.code_snippet == read_data("remove_item/snippet.java"));
  CHECK(ctx.answer_body.find(ctx.code_snippet) != std::string::npos);
  CHECK(ctx.answer_body.starts_with("Copy the items you want to keep into a list & convert"));
  CHECK(ctx.is_accepted);
  CHECK_FALSE(validate(ctx).has_value());
}

TEST_CASE("extract_context errors and block choice") {
  const auto q = question(1, "How to x", "<p>q</p>");
  auto a = answer(2, 1, "<p>Use <code>inline()</code>.</p>");
  CHECK_THROWS_AS(extract_context(q, a, Language::kJava), NoCodeSnippet);
  a.body = "<pre><code>a();</code></pre><p>or</p><pre><code>longer();\nb();</code></pre>";
  CHECK(extract_context(q, a, Language::kJava).code_snippet == "longer();\nb();");
  CHECK(code_blocks(a.body).size() == 2);
  a.parent_id = 5;
  CHECK_THROWS_AS(extract_context(q, a, Language::kJava), std::invalid_argument);
}

TEST_CASE("how-to titles") {
  CHECK(is_how_to_title("How to convert int[] into List<Integer> in Java?"));
  CHECK(is_how_to_title("Java: HOW DO I split"));
  CHECK(is_how_to_title("how can i sort"));
  CHECK_FALSE(is_how_to_title("Best way to count words"));
  CHECK_FALSE(is_how_to_title("Howto"));
}

TEST_CASE("filter_candidates on the int-list context") {
  auto ctx = sample_context(3);
  ctx.question_title = "How to convert int[] into List<Integer> in Java?";
  ctx.answer_score = 5;
  ctx.is_accepted = true;
  ViewRanking ranking;
  ranking.add(ctx.question_id, 1'000'000);
  ranking.add(77, 10);
  const FilterCriteria criteria;
  CHECK(filter_candidates(ctx, criteria, 1, &ranking));
  ctx.answer_score = 1;
  CHECK_FALSE(filter_candidates(ctx, criteria, 1, &ranking));
  ctx.answer_score = 2;
  CHECK(filter_candidates(ctx, criteria, 1, &ranking));
  CHECK_FALSE(filter_candidates(ctx, criteria, 2, &ranking));
  FilterCriteria top1 = criteria;
  top1.max_view_rank = 1;
  CHECK(filter_candidates(ctx, top1, 1, &ranking));
  ctx.question_id = 77;
  CHECK_FALSE(filter_candidates(ctx, top1, 1, &ranking));
}

TEST_CASE("view ranking ties go to the lower id") {
  ViewRanking r;
  r.add(9, 100);
  r.add(4, 100);
  r.add(7, 500);
  CHECK(r.rank_of(7) == 1);
  CHECK(r.rank_of(4) == 2);
  CHECK(r.rank_of(9) == 3);
  CHECK(r.rank_of(1) == 0);
}

TEST_CASE("criteria validation") {
  FilterCriteria c;
  c.min_answer_score = -1;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
  c = {};
  c.max_view_rank = 0;
  CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("50-row fixture selects exactly the oracle subset") {
  const auto expected = nlohmann::json::parse(read_data("corpus/expected_selection.json"));
  FilterCriteria criteria;
  criteria.max_view_rank = expected.at("top").get<std::int64_t>();
  const auto result = ingest(data_path("corpus/fixture_dump.xml"), Language::kJava, criteria);
  std::vector<std::int64_t> ids;
  for (const auto& c : result.contexts) ids.push_back(c.answer_id);
  CHECK(ids == expected.at("selected_answer_ids").get<std::vector<std::int64_t>>());
  CHECK(ids.size() == 7);
  CHECK(result.stats.rows == 50);
  CHECK(result.stats.skipped == 2);
}

TEST_CASE("relaxing min score never drops a selection") {
  std::vector<std::int64_t> previous;
  for (std::int64_t min_score = 10; min_score >= 0; --min_score) {
    FilterCriteria criteria;
    criteria.max_view_rank = 15;
    criteria.min_answer_score = min_score;
    std::vector<std::int64_t> ids;
    for (const auto& c : ingest(data_path("corpus/fixture_dump.xml"), Language::kJava, criteria).contexts) {
      ids.push_back(c.answer_id);
    }
    for (const auto id : previous) {
      CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());
    }
    previous = ids;
  }
}

TEST_CASE("corpus round trip") {
  testing::TempDir dir;
  const auto path = dir.path() / "corpus.jsonl";
  store_corpus({}, path);
  CHECK(testing::read_file(path).empty());
  CHECK(load_corpus(path).records.empty());

  const std::vector<SnippetContext> three{sample_context(1), sample_context(2), sample_context(3)};
  store_corpus(three, path);
  const auto loaded = load_corpus(path);
  CHECK(loaded.errors.empty());
  CHECK(loaded.records == three);
}

TEST_CASE("corrupted line is reported with its number") {
  testing::TempDir dir;
  const auto path = dir.path() / "corpus.jsonl";
  std::vector<SnippetContext> ten;
  for (int i = 1; i <= 10; ++i) ten.push_back(sample_context(i));
  store_corpus(ten, path);
  std::istringstream lines(testing::read_file(path));
  std::ostringstream damaged;
  std::string line;
  for (int n = 1; std::getline(lines, line); ++n) {
    damaged << (n == 6 ? line.substr(0, line.size() / 2) : line) << '\n';
  }
  std::ofstream(path, std::ios::trunc) << damaged.str();
  const auto loaded = load_corpus(path);
  CHECK(loaded.records.size() == 9);
  REQUIRE(loaded.errors.size() == 1);
  CHECK(loaded.errors[0].line == 6);
  CHECK_THROWS_AS(load_corpus(dir.path() / "missing.jsonl"), IngestError);
}
