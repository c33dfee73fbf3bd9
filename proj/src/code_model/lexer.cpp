// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/lexer.hpp"

#include <cctype>

namespace code2api::lexer {

namespace {

bool ident_start(unsigned char c) {
  return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool ident_part(unsigned char c) { return ident_start(c) || std::isdigit(c); }

class Scanner {
 public:
  Scanner(std::string_view src, Language lang, LexOptions opts)
      : src_(src), lang_(lang), opts_(opts) {}

  std::vector<Token> run() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        if (lang_ == Language::kPython && opts_.logical_newlines && depth_ == 0 &&
            !out_.empty() && out_.back().kind != TokenKind::kNewline) {
          out_.push_back({TokenKind::kNewline, src_.substr(pos_, 1), pos_});
        }
        ++pos_;
        continue;
      }
      if (c == '\\' && lang_ == Language::kPython && peek(1) == '\n') {
        pos_ += 2;  // explicit line continuation
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        continue;
      }
      if (lang_ == Language::kJava && c == '/' && peek(1) == '/') {
        skip_to_eol();
        continue;
      }
      if (lang_ == Language::kJava && c == '/' && peek(1) == '*') {
        const auto end = src_.find("*/", pos_ + 2);
        pos_ = end == std::string_view::npos ? src_.size() : end + 2;
        continue;
      }
      if (lang_ == Language::kPython && c == '#') {
        skip_to_eol();
        continue;
      }
      if (string_start()) {
        lex_string();
        continue;
      }
      const auto uc = static_cast<unsigned char>(c);
      if (std::isdigit(uc) || (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_number();
        continue;
      }
      if (ident_start(uc)) {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        out_.push_back({TokenKind::kIdent, src_.substr(start, pos_ - start), start});
        continue;
      }
      lex_punct();
    }
    if (lang_ == Language::kPython && opts_.logical_newlines && !out_.empty() &&
        out_.back().kind != TokenKind::kNewline) {
      out_.push_back({TokenKind::kNewline, std::string_view{}, src_.size()});
    }
    return std::move(out_);
  }

 private:
  char peek(std::size_t ahead) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void skip_to_eol() {
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
  }

  // Python string prefixes (r, b, f, u and two-letter combinations).
  std::size_t python_prefix_length() const {
    std::size_t n = 0;
    while (n < 2 && pos_ + n < src_.size() &&
           std::string_view("rRbBfFuU").find(src_[pos_ + n]) != std::string_view::npos) {
      ++n;
    }
    const char q = pos_ + n < src_.size() ? src_[pos_ + n] : '\0';
    if (q != '\'' && q != '"') return std::string_view::npos;
    if (n > 0 && pos_ > 0 && ident_part(static_cast<unsigned char>(src_[pos_ - 1]))) {
      return std::string_view::npos;
    }
    return n;
  }

  bool string_start() const {
    const char c = src_[pos_];
    if (c == '"' || c == '\'') return true;
    return lang_ == Language::kPython && python_prefix_length() != std::string_view::npos &&
           python_prefix_length() > 0;
  }

  void lex_string() {
    const std::size_t start = pos_;
    if (lang_ == Language::kPython) pos_ += python_prefix_length();
    const char quote = src_[pos_];
    const bool triple = peek(1) == quote && peek(2) == quote &&
                        (lang_ == Language::kPython || quote == '"');
    if (triple) {
      pos_ += 3;
      const std::string closing(3, quote);
      const auto end = src_.find(closing, pos_);
      pos_ = end == std::string_view::npos ? src_.size() : end + 3;
    } else {
      ++pos_;
      while (pos_ < src_.size() && src_[pos_] != quote) {
        if (src_[pos_] == '\\') ++pos_;
        else if (src_[pos_] == '\n') break;
        ++pos_;
      }
      if (pos_ < src_.size() && src_[pos_] == quote) ++pos_;
    }
    if (pos_ > src_.size()) pos_ = src_.size();
    out_.push_back({TokenKind::kString, src_.substr(start, pos_ - start), start});
  }

  void lex_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
        if (c == '.' && !std::isdigit(static_cast<unsigned char>(peek(1))) &&
            !(pos_ > start && std::isdigit(static_cast<unsigned char>(src_[pos_ - 1])))) {
          break;
        }
        ++pos_;
        continue;
      }
      if ((c == '+' || c == '-') && pos_ > start) {
        // exponent sign, e.g. 1e-9 or 0x1p-3
        const char prev = src_[pos_ - 1];
        const bool hex = src_.substr(start, 2) == "0x" || src_.substr(start, 2) == "0X";
        const bool exponent = hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E');
        if (!exponent) break;
        ++pos_;
        continue;
      }
      break;
    }
    out_.push_back({TokenKind::kNumber, src_.substr(start, pos_ - start), start});
  }

  void lex_punct() {
    const std::size_t start = pos_;
    std::size_t len = 1;
    const std::string_view rest = src_.substr(pos_);
    if (rest.starts_with("...")) {
      len = 3;
    } else {
      // ">>" is deliberately absent so nested generics always close one '>' at a time.
      static constexpr std::string_view kPairs[] = {"->", "::", "==", "!=", "<=", ">=", "&&", "||",
                                                    "++", "--", "+=", "-=", "*=", "/=", "%=",
                                                    "&=", "|=", "^=", "<<", "**", "//", ":="};
      for (const auto pair : kPairs) {
        if (!rest.starts_with(pair)) continue;
        if (lang_ == Language::kJava && (pair == "**" || pair == "//" || pair == ":=")) continue;
        len = 2;
        break;
      }
    }
    const char c = src_[pos_];
    if (c == '(' || c == '[' || c == '{') ++depth_;
    if ((c == ')' || c == ']' || c == '}') && depth_ > 0) --depth_;
    pos_ += len;
    out_.push_back({TokenKind::kPunct, src_.substr(start, len), start});
  }

  std::string_view src_;
  Language lang_;
  LexOptions opts_;
  std::size_t pos_ = 0;
  int depth_ = 0;
  std::vector<Token> out_;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source, Language language, LexOptions options) {
  return Scanner(source, language, options).run();
}

std::size_t column_of(std::string_view source, std::size_t offset) {
  if (offset > source.size()) offset = source.size();
  const auto nl = source.rfind('\n', offset == 0 ? 0 : offset - 1);
  if (offset == 0 || nl == std::string_view::npos) return offset;
  return offset - nl - 1;
}

}  // namespace code2api::lexer
