// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "code2api/corpus.hpp"
#include "code2api/text.hpp"

namespace code2api::corpus {

namespace {

constexpr std::array kParagraphTags = {"p",  "div", "pre", "ul", "ol", "blockquote", "table",
                                       "h1", "h2",  "h3",  "h4", "h5", "h6",         "hr"};
constexpr std::array kLineTags = {"br", "li", "tr"};

template <std::size_t N>
bool one_of(const std::array<const char*, N>& table, std::string_view name) {
  return std::find(table.begin(), table.end(), name) != table.end();
}

struct Tag {
  std::string name;  // lowercase
  bool closing = false;
};

// Calls on_tag / on_text for each tag and each text run between tags.
// Text is passed still encoded. A '<' that does not start a tag is text.
template <typename OnTag, typename OnText>
void scan_markup(std::string_view html, OnTag&& on_tag, OnText&& on_text) {
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] == '<') {
      const std::size_t close = html.find('>', i);
      std::size_t p = i + 1;
      Tag tag;
      if (p < html.size() && html[p] == '/') {
        tag.closing = true;
        ++p;
      }
      while (p < html.size() && std::isalnum(static_cast<unsigned char>(html[p]))) {
        tag.name += static_cast<char>(std::tolower(static_cast<unsigned char>(html[p])));
        ++p;
      }
      if (close != std::string_view::npos && !tag.name.empty()) {
        on_tag(tag);
        i = close + 1;
        continue;
      }
    }
    std::size_t next = html.find('<', i + 1);
    if (next == std::string_view::npos) next = html.size();
    on_text(html.substr(i, next - i));
    i = next;
  }
}

}  // namespace

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    const std::size_t semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += s[i++];
      continue;
    }
    const std::string_view name = s.substr(i + 1, semi - i - 1);
    std::string decoded;
    if (name == "lt") decoded = "<";
    else if (name == "gt") decoded = ">";
    else if (name == "amp") decoded = "&";
    else if (name == "quot") decoded = "\"";
    else if (name == "apos") decoded = "'";
    else if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string_view digits = name.substr(hex ? 2 : 1);
      std::uint32_t cp = 0;
      const auto [ptr, ec] =
          std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty() &&
          cp <= 0x10FFFF) {
        text::append_utf8(decoded, cp);
      }
    }
    if (decoded.empty()) {
      out += s[i++];
      continue;
    }
    out += decoded;
    i = semi + 1;
  }
  return out;
}

std::string html_to_text(std::string_view html) {
  std::string out;
  int pre = 0;
  std::size_t pending_breaks = 0;
  bool pending_space = false;

  auto flush = [&] {
    if (out.empty()) {
      pending_breaks = 0;
      pending_space = false;
      return;
    }
    if (pending_breaks > 0) {
      std::size_t have = 0;
      while (have < out.size() && out[out.size() - 1 - have] == '\n') ++have;
      for (; have < pending_breaks; ++have) out += '\n';
    } else if (pending_space && !std::isspace(static_cast<unsigned char>(out.back()))) {
      out += ' ';
    }
    pending_breaks = 0;
    pending_space = false;
  };
  auto request_break = [&](std::size_t n) {
    pending_breaks = std::max(pending_breaks, n);
    pending_space = false;
  };

  scan_markup(
      html,
      [&](const Tag& tag) {
        if (tag.name == "pre") {
          pre = tag.closing ? std::max(0, pre - 1) : pre + 1;
          request_break(2);
        } else if (pre > 0) {
          if (tag.name == "br") out += '\n';
        } else if (one_of(kParagraphTags, tag.name)) {
          request_break(2);
        } else if (one_of(kLineTags, tag.name)) {
          request_break(1);
        }
      },
      [&](std::string_view raw) {
        const std::string decoded = decode_entities(raw);
        if (pre > 0) {
          flush();
          out += decoded;
          return;
        }
        for (const char c : decoded) {
          if (std::isspace(static_cast<unsigned char>(c))) {
            if (pending_breaks == 0) pending_space = true;
            continue;
          }
          flush();
          out += c;
        }
      });
  return out;
}

std::vector<std::string> code_blocks(std::string_view html) {
  std::vector<std::string> blocks;
  int pre = 0;
  bool in_code = false;
  scan_markup(
      html,
      [&](const Tag& tag) {
        if (tag.name == "pre") {
          pre = tag.closing ? std::max(0, pre - 1) : pre + 1;
          if (tag.closing) in_code = false;
        } else if (tag.name == "code" && pre > 0) {
          if (!tag.closing && !in_code) blocks.emplace_back();
          in_code = !tag.closing;
        } else if (in_code && tag.name == "br") {
          blocks.back() += '\n';
        }
      },
      [&](std::string_view raw) {
        if (in_code) blocks.back() += decode_entities(raw);
      });
  return blocks;
}

bool is_how_to_title(std::string_view title) {
  return text::icontains(title, "how to") || text::icontains(title, "how do i") ||
         text::icontains(title, "how can i");
}

SnippetContext extract_context(const RawPost& question, const RawPost& answer, Language language) {
  if (question.type != PostType::kQuestion || answer.type != PostType::kAnswer ||
      answer.parent_id != question.id) {
    throw std::invalid_argument("answer " + std::to_string(answer.id) +
                                " does not belong to question " + std::to_string(question.id));
  }
  const auto blocks = code_blocks(answer.body);
  const std::string* best = nullptr;
  std::size_t best_len = 0;
  for (const auto& b : blocks) {
    if (text::trim(b).empty()) continue;
    const std::size_t len = text::utf8_length(b);
    if (best == nullptr || len > best_len) {
      best = &b;
      best_len = len;
    }
  }
  if (best == nullptr) {
    throw NoCodeSnippet("answer " + std::to_string(answer.id) + " contains no code block");
  }
  SnippetContext ctx;
  ctx.question_id = question.id;
  ctx.answer_id = answer.id;
  ctx.question_title = text::trim_copy(decode_entities(question.title));
  ctx.question_body = html_to_text(question.body);
  ctx.answer_body = html_to_text(answer.body);
  ctx.code_snippet = *best;
  ctx.language = language;
  ctx.answer_score = answer.score;
  ctx.view_count = question.view_count;
  ctx.tags = question.tags;
  ctx.is_accepted = question.accepted_answer_id == answer.id;
  return ctx;
}

std::optional<std::string> validate(const SnippetContext& ctx) {
  if (ctx.question_id <= 0) return "question_id must be positive";
  if (ctx.answer_id <= 0) return "answer_id must be positive";
  if (text::trim(ctx.question_title).empty()) return "question_title is empty";
  if (text::trim(ctx.code_snippet).empty()) return "code_snippet is empty";
  if (ctx.view_count < 0) return "view_count is negative";
  return std::nullopt;
}

void validate(const FilterCriteria& criteria) {
  if (criteria.min_answer_score < 0) throw std::invalid_argument("min_answer_score must be >= 0");
  if (criteria.max_view_rank < 1) throw std::invalid_argument("max_view_rank must be >= 1");
}

void ViewRanking::add(std::int64_t question_id, std::int64_t view_count) {
  entries_.push_back({view_count, question_id});
  sorted_ = false;
}

void ViewRanking::sort() const {
  if (sorted_) return;
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
    return a.views != b.views ? a.views > b.views : a.id < b.id;
  });
  rank_.clear();
  for (std::size_t i = 0; i < entries_.size(); ++i) rank_.emplace(entries_[i].id, i + 1);
  sorted_ = true;
}

std::size_t ViewRanking::rank_of(std::int64_t question_id) const {
  sort();
  const auto it = rank_.find(question_id);
  return it == rank_.end() ? 0 : it->second;
}

bool filter_candidates(const SnippetContext& ctx, const FilterCriteria& criteria,
                       std::size_t answer_code_block_count, const ViewRanking* ranking) {
  if (criteria.require_how_to_title && !is_how_to_title(ctx.question_title)) return false;
  if (ctx.answer_score < criteria.min_answer_score) return false;
  if (criteria.require_single_code_block && answer_code_block_count != 1) return false;
  if (criteria.require_accepted && !ctx.is_accepted) return false;
  if (!criteria.language_tag.empty() &&
      std::find(ctx.tags.begin(), ctx.tags.end(), criteria.language_tag) == ctx.tags.end()) {
    return false;
  }
  if (ranking != nullptr) {
    const std::size_t rank = ranking->rank_of(ctx.question_id);
    if (rank == 0 || rank > static_cast<std::size_t>(criteria.max_view_rank)) return false;
  }
  return true;
}

}  // namespace code2api::corpus
