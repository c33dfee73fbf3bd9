// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include <expat.h>

#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>

#include "code2api/corpus.hpp"
#include "code2api/text.hpp"

namespace code2api::corpus {

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr std::size_t kMaxDiagnostics = 20;

std::optional<std::int64_t> to_int(const char* s) {
  if (s == nullptr) return std::nullopt;
  std::int64_t v = 0;
  const auto end = s + std::strlen(s);
  const auto [ptr, ec] = std::from_chars(s, end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

struct ParseState {
  std::string tag;
  const std::function<void(RawPost&&)>* sink;
  DumpStats stats;
  XML_Parser parser;

  void skip(const std::string& reason) {
    ++stats.skipped;
    if (stats.diagnostics.size() < kMaxDiagnostics) {
      stats.diagnostics.push_back("line " + std::to_string(XML_GetCurrentLineNumber(parser)) +
                                  ": " + reason);
    }
  }

  void on_row(const XML_Char** attrs) {
    ++stats.rows;
    const char* id = nullptr;
    const char* type = nullptr;
    const char* parent = nullptr;
    const char* accepted = nullptr;
    const char* title = nullptr;
    const char* body = nullptr;
    const char* score = nullptr;
    const char* views = nullptr;
    const char* tags = nullptr;
    for (int i = 0; attrs[i] != nullptr; i += 2) {
      const std::string_view name = attrs[i];
      const char* value = attrs[i + 1];
      if (name == "Id") id = value;
      else if (name == "PostTypeId") type = value;
      else if (name == "ParentId") parent = value;
      else if (name == "AcceptedAnswerId") accepted = value;
      else if (name == "Title") title = value;
      else if (name == "Body") body = value;
      else if (name == "Score") score = value;
      else if (name == "ViewCount") views = value;
      else if (name == "Tags") tags = value;
    }
    const auto type_id = to_int(type);
    if (!type_id) return skip("missing or invalid PostTypeId");
    if (*type_id != 1 && *type_id != 2) return;  // wiki, moderator posts, ...

    RawPost post;
    post.type = static_cast<PostType>(*type_id);
    const auto post_id = to_int(id);
    if (!post_id || *post_id <= 0) return skip("missing or invalid Id");
    post.id = *post_id;
    if (body == nullptr) return skip("post " + std::to_string(post.id) + " has no Body");
    post.body = body;
    if (score != nullptr) {
      const auto s = to_int(score);
      if (!s) return skip("post " + std::to_string(post.id) + " has an invalid Score");
      post.score = *s;
    }

    if (post.type == PostType::kQuestion) {
      if (title == nullptr) return skip("question " + std::to_string(post.id) + " has no Title");
      post.title = title;
      if (tags != nullptr) post.tags = parse_tags(tags);
      bool tagged = false;
      for (const auto& t : post.tags) tagged |= t == tag;
      if (!tagged) return;
      if (views != nullptr) {
        const auto v = to_int(views);
        if (!v || *v < 0) return skip("question " + std::to_string(post.id) + " has an invalid ViewCount");
        post.view_count = *v;
      }
      if (accepted != nullptr) {
        const auto a = to_int(accepted);
        if (!a) return skip("question " + std::to_string(post.id) + " has an invalid AcceptedAnswerId");
        post.accepted_answer_id = *a;
      }
    } else {
      const auto p = to_int(parent);
      if (!p) return skip("answer " + std::to_string(post.id) + " has no ParentId");
      post.parent_id = *p;
    }
    ++stats.emitted;
    (*sink)(std::move(post));
  }
};

void XMLCALL start_element(void* user, const XML_Char* name, const XML_Char** attrs) {
  if (std::strcmp(name, "row") == 0) static_cast<ParseState*>(user)->on_row(attrs);
}

}  // namespace

std::vector<std::string> parse_tags(std::string_view tags) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(text::to_lower(current));
    current.clear();
  };
  for (const char c : tags) {
    if (c == '<' || c == '>' || c == '|' || c == ' ') {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return out;
}

DumpStats parse_data_dump(std::istream& in, std::string_view language_tag,
                          const std::function<void(RawPost&&)>& sink) {
  if (!in) throw IngestError("dump source is not readable");
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate("UTF-8"), &XML_ParserFree);
  if (!parser) throw IngestError("cannot create XML parser");
  ParseState state{text::to_lower(language_tag), &sink, {}, parser.get()};
  XML_SetUserData(parser.get(), &state);
  XML_SetStartElementHandler(parser.get(), start_element);

  bool any = false;
  for (;;) {
    void* buf = XML_GetBuffer(parser.get(), kChunk);
    if (buf == nullptr) throw IngestError("out of memory while parsing dump");
    in.read(static_cast<char*>(buf), kChunk);
    const auto got = in.gcount();
    if (in.bad()) throw IngestError("read error in dump source");
    const bool done = got < static_cast<std::streamsize>(kChunk);
    if (got > 0) any = true;
    if (!any && done) return state.stats;  // empty file
    if (XML_ParseBuffer(parser.get(), static_cast<int>(got), done) == XML_STATUS_ERROR) {
      throw IngestError("malformed dump XML at line " +
                        std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                        XML_ErrorString(XML_GetErrorCode(parser.get())));
    }
    if (done) break;
  }
  return state.stats;
}

DumpStats parse_data_dump(const std::filesystem::path& path, std::string_view language_tag,
                          const std::function<void(RawPost&&)>& sink) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open dump " + path.string());
  return parse_data_dump(in, language_tag, sink);
}

}  // namespace code2api::corpus
