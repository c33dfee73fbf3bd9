// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "code2api/language.hpp"

namespace code2api::lexer {

enum class TokenKind { kIdent, kNumber, kString, kPunct, kNewline };

/// A token is a view into the lexed source; the source must outlive it.
struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t offset;
};

struct LexOptions {
  /// Python only: emit kNewline at the end of each logical line.
  bool logical_newlines = false;
};

/// Tolerant tokenizer for Java and Python source. Comments and whitespace are
/// dropped. Compound operators ("==", "&&", "->", "::", "...", ...) are single
/// tokens, except ">>" and ">>>", so nested generics split the same way
/// regardless of spacing.
/// Unterminated strings or comments extend to the end of input.
std::vector<Token> tokenize(std::string_view source, Language language, LexOptions options = {});

inline bool is_word(const Token& t) {
  return t.kind == TokenKind::kIdent || t.kind == TokenKind::kNumber ||
         t.kind == TokenKind::kString;
}

inline bool is_punct(const Token& t, std::string_view p) {
  return t.kind == TokenKind::kPunct && t.text == p;
}

inline bool is_ident(const Token& t, std::string_view name) {
  return t.kind == TokenKind::kIdent && t.text == name;
}

/// Column (0-based, in bytes) of `offset` within its line.
std::size_t column_of(std::string_view source, std::size_t offset);

}  // namespace code2api::lexer
