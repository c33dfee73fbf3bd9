// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/code_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <span>

#include "code2api/lexer.hpp"
#include "code2api/text.hpp"

namespace code2api::code_model {

using lexer::Token;
using lexer::TokenKind;
using lexer::is_ident;
using lexer::is_punct;
using lexer::is_word;

namespace {

constexpr std::array kJavaKeywords = {
    "abstract", "assert",     "boolean",  "break",     "byte",         "case",
    "catch",    "char",       "class",    "const",     "continue",     "default",
    "do",       "double",     "else",     "enum",      "extends",      "final",
    "finally",  "float",      "for",      "goto",      "if",           "implements",
    "import",   "instanceof", "int",      "interface", "long",         "native",
    "new",      "package",    "private",  "protected", "public",       "return",
    "short",    "static",     "strictfp", "super",     "switch",       "synchronized",
    "this",     "throw",      "throws",   "transient", "try",          "void",
    "volatile", "while",      "true",     "false",     "null"};

constexpr std::array kPythonKeywords = {
    "False", "None",   "True",    "and",      "as",   "assert", "async", "await",
    "break", "class",  "continue", "def",     "del",  "elif",   "else",  "except",
    "finally", "for",  "from",    "global",   "if",   "import", "in",    "is",
    "lambda", "nonlocal", "not",  "or",       "pass", "raise",  "return", "try",
    "while", "with",   "yield"};

constexpr std::array kJavaModifiers = {"public",   "protected", "private",      "static",
                                       "final",    "abstract",  "synchronized", "native",
                                       "strictfp", "default",   "transient",    "volatile",
                                       "sealed"};

constexpr std::array kJavaTypeKeywords = {"class", "interface", "enum", "record"};

template <std::size_t N>
bool contains(const std::array<const char*, N>& table, std::string_view word) {
  return std::any_of(table.begin(), table.end(),
                     [&](const char* entry) { return word == entry; });
}

bool is_java_modifier(const Token& t) {
  return t.kind == TokenKind::kIdent && contains(kJavaModifiers, t.text);
}

bool is_open(const Token& t) {
  return t.kind == TokenKind::kPunct && (t.text == "(" || t.text == "[" || t.text == "{");
}

bool is_close(const Token& t) {
  return t.kind == TokenKind::kPunct && (t.text == ")" || t.text == "]" || t.text == "}");
}

// Joins tokens with a single space only where two words would otherwise fuse.
std::string join_compact(std::span<const Token> tokens) {
  std::string out;
  const Token* prev = nullptr;
  for (const Token& t : tokens) {
    if (prev != nullptr && is_word(t) && (is_word(*prev) || is_punct(*prev, "?"))) {
      out.push_back(' ');
    }
    out.append(t.text);
    prev = &t;
  }
  return out;
}

std::string join_spaced(std::span<const Token> tokens) {
  std::string out;
  for (const Token& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out.append(t.text);
  }
  return out;
}

// Drops lowercase leading segments of dotted names: java.util.Map.Entry -> Map.Entry.
std::vector<Token> strip_qualifiers(std::span<const Token> tokens) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i].kind != TokenKind::kIdent) {
      out.push_back(tokens[i++]);
      continue;
    }
    std::vector<std::size_t> chain{i};
    std::size_t j = i + 1;
    while (j + 1 < tokens.size() && is_punct(tokens[j], ".") &&
           tokens[j + 1].kind == TokenKind::kIdent) {
      chain.push_back(j + 1);
      j += 2;
    }
    std::size_t keep = 0;
    while (keep + 1 < chain.size() &&
           std::islower(static_cast<unsigned char>(tokens[chain[keep]].text.front()))) {
      ++keep;
    }
    for (std::size_t k = chain[keep]; k < j; ++k) out.push_back(tokens[k]);
    i = j;
  }
  return out;
}

// Removes Java annotations (@Name, @a.b.Name(...)) and optionally `final`.
std::vector<Token> strip_annotations(std::span<const Token> tokens, bool drop_final = true) {
  std::vector<Token> out;
  for (std::size_t i = 0; i < tokens.size();) {
    if (is_punct(tokens[i], "@") && i + 1 < tokens.size() &&
        tokens[i + 1].kind == TokenKind::kIdent && !is_ident(tokens[i + 1], "interface")) {
      i += 2;
      while (i + 1 < tokens.size() && is_punct(tokens[i], ".") &&
             tokens[i + 1].kind == TokenKind::kIdent) {
        i += 2;
      }
      if (i < tokens.size() && is_punct(tokens[i], "(")) {
        int depth = 0;
        for (; i < tokens.size(); ++i) {
          if (is_open(tokens[i])) ++depth;
          if (is_close(tokens[i]) && --depth == 0) {
            ++i;
            break;
          }
        }
      }
      continue;
    }
    if (drop_final && is_ident(tokens[i], "final")) {
      ++i;
      continue;
    }
    out.push_back(tokens[i++]);
  }
  return out;
}

std::string canonical_type(std::span<const Token> tokens) {
  const auto cleaned = strip_annotations(tokens);
  const auto stripped = strip_qualifiers(cleaned);
  return join_compact(stripped);
}

// Index of the token closing the bracket opened at `open`, or npos.
std::size_t match_close(std::span<const Token> tokens, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < tokens.size(); ++i) {
    if (is_open(tokens[i])) ++depth;
    if (is_close(tokens[i]) && --depth == 0) return i;
  }
  return std::string_view::npos;
}

// Splits on commas that are not nested in (), [], {} or <>.
std::vector<std::span<const Token>> split_top_level(std::span<const Token> tokens,
                                                    bool angle_brackets) {
  std::vector<std::span<const Token>> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (is_open(t) || (angle_brackets && is_punct(t, "<"))) ++depth;
    if (is_close(t) || (angle_brackets && is_punct(t, ">"))) depth = std::max(0, depth - 1);
    if (depth == 0 && is_punct(t, ",")) {
      parts.push_back(tokens.subspan(start, i - start));
      start = i + 1;
    }
  }
  if (start < tokens.size()) parts.push_back(tokens.subspan(start));
  return parts;
}

void sort_unique(std::vector<std::string>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// ---------------------------------------------------------------- Java

struct JavaMethod {
  std::string name;
  std::string modifiers;
  std::string type_parameters;
  std::string return_type;
  std::vector<Param> params;
  std::vector<std::string> throws;
  bool is_public = false;
  int owner = -1;  // index into classes, -1 for top level
  std::size_t open = 0;
  std::size_t close = 0;
};

std::vector<Param> parse_java_params(std::span<const Token> tokens) {
  std::vector<Param> params;
  for (auto part : split_top_level(tokens, true)) {
    auto cleaned = strip_annotations(part);
    if (cleaned.empty()) continue;
    std::size_t dims = 0;
    while (cleaned.size() >= 3 && is_punct(cleaned.back(), "]") &&
           is_punct(cleaned[cleaned.size() - 2], "[")) {
      cleaned.resize(cleaned.size() - 2);
      ++dims;
    }
    if (cleaned.size() < 2 || cleaned.back().kind != TokenKind::kIdent) continue;
    Param p;
    p.name = std::string(cleaned.back().text);
    if (p.name == "this") continue;
    cleaned.pop_back();
    p.type_text = canonical_type(cleaned);
    for (std::size_t d = 0; d < dims; ++d) p.type_text += "[]";
    params.push_back(std::move(p));
  }
  return params;
}

bool is_statement_keyword(std::string_view word) {
  static const std::set<std::string_view> kWords = {
      "if", "for", "while", "switch", "catch", "synchronized", "return", "new",
      "throw", "else", "try", "do", "case", "assert", "super", "this"};
  return kWords.contains(word);
}

// Matches `[modifiers] [<T>] Type name(params) [dims] [throws A, B]` ending right
// before a '{'.
std::optional<JavaMethod> match_java_method(std::span<const Token> header) {
  const auto tokens = strip_annotations(header, /*drop_final=*/false);
  if (tokens.empty()) return std::nullopt;
  for (const Token& t : tokens) {
    if (is_punct(t, "=") || is_punct(t, "->") || is_punct(t, ";")) return std::nullopt;
  }
  std::size_t open = std::string_view::npos;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (is_punct(tokens[i], "(")) {
      open = i;
      break;
    }
  }
  if (open == std::string_view::npos || open == 0) return std::nullopt;
  const Token& name = tokens[open - 1];
  if (name.kind != TokenKind::kIdent || contains(kJavaKeywords, name.text) ||
      is_statement_keyword(name.text)) {
    return std::nullopt;
  }
  const std::span<const Token> all(tokens);
  const std::size_t close = match_close(all, open);
  if (close == std::string_view::npos) return std::nullopt;

  JavaMethod m;
  m.name = std::string(name.text);
  m.params = parse_java_params(all.subspan(open + 1, close - open - 1));

  std::size_t i = close + 1;
  std::string dims;
  while (i + 1 < tokens.size() && is_punct(tokens[i], "[") && is_punct(tokens[i + 1], "]")) {
    dims += "[]";
    i += 2;
  }
  if (i < tokens.size() && is_ident(tokens[i], "throws")) {
    for (auto part : split_top_level(all.subspan(i + 1), true)) {
      if (!part.empty()) m.throws.push_back(canonical_type(part));
    }
    i = tokens.size();
  }
  if (i != tokens.size()) return std::nullopt;

  std::size_t k = 0;
  std::vector<std::string> modifiers;
  while (k < open - 1 && is_java_modifier(tokens[k])) {
    modifiers.emplace_back(tokens[k].text);
    if (tokens[k].text == "public") m.is_public = true;
    ++k;
  }
  if (k < open - 1 && is_punct(tokens[k], "<")) {
    int depth = 0;
    const std::size_t start = k;
    for (; k < open - 1; ++k) {
      if (is_punct(tokens[k], "<")) ++depth;
      if (is_punct(tokens[k], ">") && --depth == 0) {
        ++k;
        break;
      }
    }
    m.type_parameters = canonical_type(all.subspan(start, k - start));
  }
  while (k < open - 1 && is_java_modifier(tokens[k])) {
    modifiers.emplace_back(tokens[k].text);
    if (tokens[k].text == "public") m.is_public = true;
    ++k;
  }
  if (k >= open - 1) return std::nullopt;  // constructor or malformed
  for (std::size_t j = k; j < open - 1; ++j) {
    const Token& t = tokens[j];
    if (t.kind == TokenKind::kIdent && is_statement_keyword(t.text)) return std::nullopt;
  }
  if (is_punct(tokens[open - 2], ".")) return std::nullopt;
  m.return_type = canonical_type(all.subspan(k, open - 1 - k)) + dims;
  for (const auto& mod : modifiers) {
    if (!m.modifiers.empty()) m.modifiers.push_back(' ');
    m.modifiers += mod;
  }
  sort_unique(m.throws);
  return m;
}

std::string python_canonical_type(std::span<const Token> tokens) {
  return join_compact(strip_qualifiers(tokens));
}

bool has_type_keyword(std::span<const Token> header) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i].kind != TokenKind::kIdent || !contains(kJavaTypeKeywords, header[i].text)) {
      continue;
    }
    if (i > 0 && is_punct(header[i - 1], ".")) continue;  // Foo.class
    return true;
  }
  return false;
}

bool is_expression_header(std::span<const Token> header) {
  return std::any_of(header.begin(), header.end(), [](const Token& t) {
    return is_punct(t, "=") || is_punct(t, "->") || is_ident(t, "new") || is_ident(t, "return");
  });
}

std::string type_name_after_keyword(std::span<const Token> header) {
  for (std::size_t i = 0; i + 1 < header.size(); ++i) {
    if (header[i].kind == TokenKind::kIdent && contains(kJavaTypeKeywords, header[i].text) &&
        header[i + 1].kind == TokenKind::kIdent) {
      return std::string(header[i + 1].text);
    }
  }
  return {};
}

struct JavaScan {
  std::vector<JavaMethod> methods;
  std::vector<std::string> class_names;
  int wrapper = -1;  // first top-level class
};

JavaScan scan_java(std::span<const Token> tokens) {
  enum class FrameKind { kClass, kMethod, kBlock, kExpr };
  struct Frame {
    FrameKind kind;
    int class_id = -1;
    int method_index = -1;
    int saved_paren = 0;
    std::size_t saved_stmt_start = 0;
  };
  std::vector<Frame> frames;
  JavaScan scan;
  std::size_t stmt_start = 0;
  int paren = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != TokenKind::kPunct) continue;
    if (t.text == "(" || t.text == "[") {
      ++paren;
    } else if (t.text == ")" || t.text == "]") {
      paren = std::max(0, paren - 1);
    } else if (t.text == ";" && paren == 0) {
      stmt_start = i + 1;
    } else if (t.text == "{") {
      const auto header = tokens.subspan(stmt_start, i - stmt_start);
      Frame frame{FrameKind::kBlock, -1, -1, paren, stmt_start};
      const bool expr = paren > 0 || is_expression_header(header);
      const bool at_class_level = frames.empty() || frames.back().kind == FrameKind::kClass;
      if (expr) {
        frame.kind = FrameKind::kExpr;
      } else if (has_type_keyword(header)) {
        frame.kind = FrameKind::kClass;
        frame.class_id = static_cast<int>(scan.class_names.size());
        scan.class_names.push_back(type_name_after_keyword(header));
        if (frames.empty() && scan.wrapper < 0) scan.wrapper = frame.class_id;
      } else if (at_class_level) {
        if (auto m = match_java_method(header)) {
          m->owner = frames.empty() ? -1 : frames.back().class_id;
          m->open = i;
          frame.kind = FrameKind::kMethod;
          frame.method_index = static_cast<int>(scan.methods.size());
          scan.methods.push_back(std::move(*m));
        }
      }
      frames.push_back(frame);
      paren = 0;
      stmt_start = i + 1;
    } else if (t.text == "}") {
      if (frames.empty()) {
        throw ParseError(ParseError::Kind::kUnbalancedBraces, "unmatched '}'");
      }
      const Frame frame = frames.back();
      frames.pop_back();
      if (frame.kind == FrameKind::kMethod) {
        scan.methods[static_cast<std::size_t>(frame.method_index)].close = i;
      }
      paren = frame.saved_paren;
      stmt_start = frame.kind == FrameKind::kExpr ? frame.saved_stmt_start : i + 1;
    }
  }
  if (!frames.empty()) {
    throw ParseError(ParseError::Kind::kUnbalancedBraces, "unclosed '{'");
  }
  return scan;
}

const JavaMethod* pick_primary(const JavaScan& scan) {
  auto pick_from = [&](auto&& accept) -> const JavaMethod* {
    const JavaMethod* first = nullptr;
    for (const auto& m : scan.methods) {
      if (!accept(m)) continue;
      if (m.is_public) return &m;
      if (first == nullptr) first = &m;
    }
    return first;
  };
  if (scan.wrapper >= 0) {
    if (const auto* m = pick_from([&](const JavaMethod& m) { return m.owner == scan.wrapper; })) {
      return m;
    }
  }
  if (const auto* m = pick_from([](const JavaMethod& m) { return m.owner == -1; })) return m;
  return pick_from([](const JavaMethod&) { return true; });
}

// Index of the '(' matching the ')' at `close`, scanning backwards.
std::size_t match_open_backwards(std::span<const Token> tokens, std::size_t close) {
  int depth = 0;
  for (std::size_t i = close + 1; i-- > 0;) {
    if (is_close(tokens[i])) ++depth;
    if (is_open(tokens[i]) && --depth == 0) return i;
  }
  return std::string_view::npos;
}

bool opens_anonymous_class(std::span<const Token> tokens, std::size_t brace) {
  if (brace == 0 || !is_punct(tokens[brace - 1], ")")) return false;
  const std::size_t open = match_open_backwards(tokens, brace - 1);
  if (open == std::string_view::npos) return false;
  for (std::size_t i = open; i-- > 0;) {
    const Token& t = tokens[i];
    if (is_ident(t, "new")) return true;
    const bool type_part = t.kind == TokenKind::kIdent || is_punct(t, ".") || is_punct(t, "<") ||
                           is_punct(t, ">") || is_punct(t, ",") || is_punct(t, "?");
    if (!type_part) return false;
  }
  return false;
}

std::vector<std::string> java_returns(std::string_view body) {
  const auto tokens = lexer::tokenize(body, Language::kJava);
  const std::span<const Token> all(tokens);
  std::vector<std::string> out;
  std::vector<bool> excluded;
  int excluded_count = 0;
  std::size_t stmt_start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (is_punct(t, "{")) {
      const bool ex = (i > 0 && is_punct(tokens[i - 1], "->")) || opens_anonymous_class(all, i) ||
                      has_type_keyword(all.subspan(stmt_start, i - stmt_start));
      excluded.push_back(ex);
      if (ex) ++excluded_count;
      stmt_start = i + 1;
    } else if (is_punct(t, "}")) {
      if (!excluded.empty()) {
        if (excluded.back()) --excluded_count;
        excluded.pop_back();
      }
      stmt_start = i + 1;
    } else if (is_punct(t, ";")) {
      stmt_start = i + 1;
    } else if (is_ident(t, "return") && excluded_count == 0) {
      int depth = 0;
      std::size_t j = i + 1;
      for (; j < tokens.size(); ++j) {
        if (is_open(tokens[j])) ++depth;
        if (is_close(tokens[j])) {
          if (depth == 0) break;  // malformed: ran into the enclosing '}'
          --depth;
        }
        if (depth == 0 && is_punct(tokens[j], ";")) break;
      }
      out.push_back(join_spaced(all.subspan(i, j - i)));
      if (j < tokens.size() && is_punct(tokens[j], ";")) {
        i = j;
        stmt_start = j + 1;
      } else {
        i = j - 1;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------- Python

struct LogicalLine {
  std::size_t begin;  // token index
  std::size_t end;    // index of the terminating newline token
  std::size_t column;
};

std::vector<LogicalLine> logical_lines(std::string_view source, std::span<const Token> tokens) {
  std::vector<LogicalLine> lines;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].kind != TokenKind::kNewline) continue;
    if (i > begin) {
      lines.push_back({begin, i, lexer::column_of(source, tokens[begin].offset)});
    }
    begin = i + 1;
  }
  if (begin < tokens.size()) {
    lines.push_back({begin, tokens.size(), lexer::column_of(source, tokens[begin].offset)});
  }
  return lines;
}

bool starts_nested_scope(std::span<const Token> tokens, const LogicalLine& line) {
  const Token& first = tokens[line.begin];
  if (is_ident(first, "def") || is_ident(first, "class")) return true;
  return is_ident(first, "async") && line.begin + 1 < line.end &&
         is_ident(tokens[line.begin + 1], "def");
}

// Visits statements of the body that begin with `keyword`, skipping nested
// def/class blocks. `visit` receives the statement tokens.
template <typename Visit>
void for_each_statement(std::string_view body, std::string_view keyword, Visit&& visit) {
  const auto tokens = lexer::tokenize(body, Language::kPython, {.logical_newlines = true});
  const std::span<const Token> all(tokens);
  std::size_t skip_column = std::string_view::npos;
  for (const auto& line : logical_lines(body, all)) {
    if (skip_column != std::string_view::npos) {
      if (line.column > skip_column) continue;
      skip_column = std::string_view::npos;
    }
    if (starts_nested_scope(all, line)) {
      skip_column = line.column;
      continue;
    }
    int depth = 0;
    for (std::size_t k = line.begin; k < line.end; ++k) {
      const Token& t = tokens[k];
      if (is_open(t)) ++depth;
      if (is_close(t)) depth = std::max(0, depth - 1);
      if (depth != 0 || !is_ident(t, keyword)) continue;
      if (k != line.begin && !is_punct(tokens[k - 1], ":") && !is_punct(tokens[k - 1], ";")) {
        continue;
      }
      std::size_t j = k + 1;
      int inner = 0;
      for (; j < line.end; ++j) {
        if (is_open(tokens[j])) ++inner;
        if (is_close(tokens[j])) inner = std::max(0, inner - 1);
        if (inner == 0 && is_punct(tokens[j], ";")) break;
      }
      visit(all.subspan(k, j - k));
      k = j;
    }
  }
}

std::vector<std::string> python_returns(std::string_view body) {
  std::vector<std::string> out;
  for_each_statement(body, "return",
                     [&](std::span<const Token> stmt) { out.push_back(join_spaced(stmt)); });
  return out;
}

std::string render_python_import(const std::string& entry) {
  const auto dot = entry.rfind('.');
  if (dot == std::string::npos) return "import " + entry;
  const std::string name = entry.substr(dot + 1);
  std::string module = entry.substr(0, dot);
  if (module.find_first_not_of('.') == std::string::npos) module = entry.substr(0, dot + 1);
  if (name == "*" || entry.front() == '.') return "from " + module + " import " + name;
  return "import " + entry;
}

ApiSignature parse_python(std::string_view src) {
  const auto tokens = lexer::tokenize(src, Language::kPython, {.logical_newlines = true});
  const std::span<const Token> all(tokens);

  std::size_t def_index = std::string_view::npos;
  std::size_t def_column = 0;
  bool is_async = false;
  for (const auto& line : logical_lines(src, all)) {
    std::size_t d = line.begin;
    bool async_def = false;
    if (is_ident(tokens[d], "async") && d + 1 < line.end && is_ident(tokens[d + 1], "def")) {
      ++d;
      async_def = true;
    }
    if (!is_ident(tokens[d], "def")) continue;
    if (def_index == std::string_view::npos || (def_column != 0 && line.column == 0)) {
      def_index = d;
      def_column = line.column;
      is_async = async_def;
      if (line.column == 0) break;
    }
  }
  if (def_index == std::string_view::npos || def_index + 2 >= tokens.size() ||
      tokens[def_index + 1].kind != TokenKind::kIdent || !is_punct(tokens[def_index + 2], "(")) {
    throw ParseError(ParseError::Kind::kNoMethodFound, "no function definition found");
  }

  ApiSignature sig;
  sig.language = Language::kPython;
  sig.method_name = std::string(tokens[def_index + 1].text);
  sig.modifiers = is_async ? "async" : "";

  const std::size_t open = def_index + 2;
  const std::size_t close = match_close(all, open);
  if (close == std::string_view::npos) {
    throw ParseError(ParseError::Kind::kUnbalancedBraces, "unclosed parameter list");
  }
  for (auto part : split_top_level(all.subspan(open + 1, close - open - 1), false)) {
    std::size_t k = 0;
    std::string stars;
    while (k < part.size() && (is_punct(part[k], "*") || is_punct(part[k], "**"))) {
      stars += part[k].text;
      ++k;
    }
    if (k >= part.size() || part[k].kind != TokenKind::kIdent) continue;  // bare * or /
    Param p;
    p.name = std::string(part[k].text);
    std::size_t ann = k + 1;
    std::size_t ann_end = part.size();
    int depth = 0;
    for (std::size_t q = ann; q < part.size(); ++q) {
      if (is_open(part[q])) ++depth;
      if (is_close(part[q])) depth = std::max(0, depth - 1);
      if (depth == 0 && is_punct(part[q], "=")) {
        ann_end = q;
        break;
      }
    }
    if (ann < ann_end && is_punct(part[ann], ":")) {
      p.type_text = stars + python_canonical_type(part.subspan(ann + 1, ann_end - ann - 1));
    } else {
      p.type_text = stars + std::string(kUnannotated);
    }
    sig.params.push_back(std::move(p));
  }

  std::size_t k = close + 1;
  if (k < tokens.size() && is_punct(tokens[k], "->")) {
    const std::size_t start = k + 1;
    while (k < tokens.size() && !is_punct(tokens[k], ":") &&
           tokens[k].kind != TokenKind::kNewline) {
      ++k;
    }
    sig.return_type = python_canonical_type(all.subspan(start, k - start));
  } else {
    while (k < tokens.size() && !is_punct(tokens[k], ":") &&
           tokens[k].kind != TokenKind::kNewline) {
      ++k;
    }
  }
  if (sig.return_type.empty()) sig.return_type = std::string(kUnannotated);

  if (k < tokens.size() && is_punct(tokens[k], ":")) {
    const std::size_t colon = tokens[k].offset;
    std::size_t end = src.size();
    if (k + 1 < tokens.size() && tokens[k + 1].kind != TokenKind::kNewline) {
      std::size_t n = k + 1;
      while (n < tokens.size() && tokens[n].kind != TokenKind::kNewline) ++n;
      end = n < tokens.size() ? tokens[n].offset : src.size();
    } else if (k + 1 < tokens.size()) {
      end = tokens[k + 1].offset;
      std::size_t j = k + 2;
      while (j < tokens.size()) {
        if (lexer::column_of(src, tokens[j].offset) <= def_column) break;
        std::size_t n = j;
        while (n < tokens.size() && tokens[n].kind != TokenKind::kNewline) ++n;
        end = n < tokens.size() ? tokens[n].offset : src.size();
        j = n + 1;
      }
    }
    end = std::min(end, src.size());
    sig.body = std::string(src.substr(colon + 1, end - colon - 1));
  }

  sig.return_statements = python_returns(sig.body);
  sig.throws = extract_raises(sig.body);
  sig.imports = extract_imports(src, Language::kPython);
  return sig;
}

ApiSignature parse_java(std::string_view src) {
  const auto tokens = lexer::tokenize(src, Language::kJava);
  const JavaScan scan = scan_java(tokens);
  const JavaMethod* m = pick_primary(scan);
  if (m == nullptr) {
    throw ParseError(ParseError::Kind::kNoMethodFound, "no method declaration found");
  }
  ApiSignature sig;
  sig.language = Language::kJava;
  sig.method_name = m->name;
  sig.params = m->params;
  sig.return_type = m->return_type;
  sig.throws = m->throws;
  sig.modifiers = m->modifiers;
  sig.type_parameters = m->type_parameters;
  if (m->owner >= 0) sig.wrapper_class = scan.class_names[static_cast<std::size_t>(m->owner)];
  const std::size_t body_begin = tokens[m->open].offset + 1;
  sig.body = std::string(src.substr(body_begin, tokens[m->close].offset - body_begin));
  sig.return_statements = java_returns(sig.body);
  sig.imports = extract_imports(src, Language::kJava);
  return sig;
}

}  // namespace

ApiSignature parse_method_signature(std::string_view source, Language language) {
  return language == Language::kJava ? parse_java(source) : parse_python(source);
}

std::vector<std::string> extract_return_statements(std::string_view body, Language language) {
  return language == Language::kJava ? java_returns(body) : python_returns(body);
}

std::string normalize_type(std::string_view type_text, Language language) {
  const auto tokens = lexer::tokenize(type_text, language);
  return language == Language::kJava ? canonical_type(tokens) : python_canonical_type(tokens);
}

std::vector<std::string> extract_imports(std::string_view source, Language language) {
  std::vector<std::string> out;
  if (language == Language::kJava) {
    const auto tokens = lexer::tokenize(source, Language::kJava);
    const std::span<const Token> all(tokens);
    int depth = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (is_punct(tokens[i], "{")) ++depth;
      if (is_punct(tokens[i], "}")) depth = std::max(0, depth - 1);
      if (depth != 0 || !is_ident(tokens[i], "import")) continue;
      if (i > 0 && !is_punct(tokens[i - 1], ";") && !is_punct(tokens[i - 1], "}")) continue;
      std::size_t j = i + 1;
      while (j < tokens.size() && !is_punct(tokens[j], ";")) ++j;
      if (j > i + 1) out.push_back(join_compact(all.subspan(i + 1, j - i - 1)));
      i = j;
    }
  } else {
    const auto tokens = lexer::tokenize(source, Language::kPython, {.logical_newlines = true});
    const std::span<const Token> all(tokens);
    for (const auto& line : logical_lines(source, all)) {
      auto stmt = all.subspan(line.begin, line.end - line.begin);
      auto dotted = [](std::span<const Token> part) {
        std::size_t n = 0;
        while (n < part.size() && !is_ident(part[n], "as")) ++n;
        return join_compact(part.first(n));
      };
      if (is_ident(stmt[0], "import")) {
        for (auto part : split_top_level(stmt.subspan(1), false)) {
          if (!part.empty()) out.push_back(dotted(part));
        }
      } else if (is_ident(stmt[0], "from")) {
        std::size_t imp = 1;
        while (imp < stmt.size() && !is_ident(stmt[imp], "import")) ++imp;
        if (imp >= stmt.size()) continue;
        const std::string module = join_compact(stmt.subspan(1, imp - 1));
        auto names = stmt.subspan(imp + 1);
        if (!names.empty() && is_punct(names.front(), "(")) names = names.subspan(1);
        if (!names.empty() && is_punct(names.back(), ")")) names = names.first(names.size() - 1);
        for (auto part : split_top_level(names, false)) {
          if (part.empty()) continue;
          const std::string sep = !module.empty() && module.back() == '.' ? "" : ".";
          out.push_back(module + sep + dotted(part));
        }
      }
    }
  }
  sort_unique(out);
  return out;
}

std::vector<std::string> extract_raises(std::string_view body) {
  std::vector<std::string> out;
  for_each_statement(body, "raise", [&](std::span<const Token> stmt) {
    std::size_t n = 1;
    while (n < stmt.size() && (stmt[n].kind == TokenKind::kIdent || is_punct(stmt[n], "."))) {
      if (is_ident(stmt[n], "from")) break;
      ++n;
    }
    if (n > 1) out.push_back(python_canonical_type(stmt.subspan(1, n - 1)));
  });
  sort_unique(out);
  return out;
}

std::string render_signature(const ApiSignature& sig) {
  std::string out;
  if (sig.language == Language::kJava) {
    for (const auto& imp : sig.imports) out += "import " + imp + ";\n";
    const std::string indent = sig.wrapper_class ? "    " : "";
    if (sig.wrapper_class) out += "public class " + *sig.wrapper_class + " {\n";
    out += indent;
    if (!sig.modifiers.empty()) out += sig.modifiers + " ";
    if (!sig.type_parameters.empty()) out += sig.type_parameters + " ";
    out += sig.return_type + " " + sig.method_name + "(";
    for (std::size_t i = 0; i < sig.params.size(); ++i) {
      if (i > 0) out += ", ";
      out += sig.params[i].type_text + " " + sig.params[i].name;
    }
    out += ")";
    for (std::size_t i = 0; i < sig.throws.size(); ++i) {
      out += (i == 0 ? " throws " : ", ") + sig.throws[i];
    }
    out += " {" + sig.body + "}\n";
    if (sig.wrapper_class) out += "}\n";
    return out;
  }
  for (const auto& imp : sig.imports) out += render_python_import(imp) + "\n";
  if (!sig.modifiers.empty()) out += sig.modifiers + " ";
  out += "def " + sig.method_name + "(";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    if (i > 0) out += ", ";
    const auto& type = sig.params[i].type_text;
    const auto stars = type.find_first_not_of('*');
    const std::string base = stars == std::string::npos ? "" : type.substr(stars);
    out += type.substr(0, stars == std::string::npos ? type.size() : stars) + sig.params[i].name;
    if (base != kUnannotated && !base.empty()) out += ": " + base;
  }
  out += ")";
  if (sig.return_type != kUnannotated) out += " -> " + sig.return_type;
  out += ":" + sig.body + "\n";
  return out;
}

bool is_valid_identifier(std::string_view name, Language language) {
  if (name.empty()) return false;
  const auto first = static_cast<unsigned char>(name.front());
  if (!(std::isalpha(first) || first == '_' || (language == Language::kJava && first == '$'))) {
    return false;
  }
  for (const char c : name) {
    const auto uc = static_cast<unsigned char>(c);
    if (!(std::isalnum(uc) || uc == '_' || (language == Language::kJava && uc == '$'))) {
      return false;
    }
  }
  return language == Language::kJava ? !contains(kJavaKeywords, name)
                                     : !contains(kPythonKeywords, name);
}

std::vector<JavaTypeDecl> java_top_level_types(std::string_view source) {
  const auto tokens = lexer::tokenize(source, Language::kJava);
  std::vector<JavaTypeDecl> out;
  int depth = 0;
  std::size_t decl_start = 0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (is_punct(t, "{")) ++depth;
    if (is_punct(t, "}")) depth = std::max(0, depth - 1);
    if (depth == 0 && (is_punct(t, ";") || is_punct(t, "}"))) decl_start = i + 1;
    if (depth != 0 || t.kind != TokenKind::kIdent || !contains(kJavaTypeKeywords, t.text)) {
      continue;
    }
    if (i > 0 && (is_punct(tokens[i - 1], ".") || is_punct(tokens[i - 1], "@"))) continue;
    if (i + 1 >= tokens.size() || tokens[i + 1].kind != TokenKind::kIdent) continue;
    JavaTypeDecl decl{std::string(tokens[i + 1].text), false};
    for (std::size_t k = decl_start; k < i; ++k) decl.is_public |= is_ident(tokens[k], "public");
    out.push_back(std::move(decl));
  }
  return out;
}

}  // namespace code2api::code_model
