// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "code2api/language.hpp"

// Declaration-level parsing of Java and Python methods. This is a token
// scanner with brace and bracket depth tracking, not a grammar: it only needs
// names, parameters, return types, return statements, imports and throws, and
// it has to cope with slightly malformed model output.
namespace code2api::code_model {

/// Return type recorded for Python functions without a "->" annotation.
inline constexpr std::string_view kUnannotated = "unannotated";

struct Param {
  std::string type_text;  // canonical, see normalize_type
  std::string name;

  friend bool operator==(const Param&, const Param&) = default;
};

struct ApiSignature {
  Language language = Language::kJava;
  std::string method_name;
  std::vector<Param> params;
  std::string return_type;
  std::vector<std::string> return_statements;
  std::vector<std::string> imports;  // sorted, unique
  std::vector<std::string> throws;   // sorted, unique

  // Declaration details that render_signature needs to reproduce the source.
  std::string modifiers;        // "public static", "async", ...
  std::string type_parameters;  // Java generic method parameters, e.g. "<T>"
  std::optional<std::string> wrapper_class;
  std::string body;  // raw text between the braces (Java) or after the ':' (Python)

  friend bool operator==(const ApiSignature&, const ApiSignature&) = default;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { kNoMethodFound, kUnbalancedBraces };

  ParseError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Extracts the primary method: the first public method of the first
/// top-level class for Java (first method of any kind when none is public,
/// bare methods when there is no class), the first top-level function for
/// Python (falling back to the first nested def).
ApiSignature parse_method_signature(std::string_view source, Language language);

/// Every return statement of the body in textual order, excluding returns that
/// belong to nested lambdas, anonymous or local classes, and nested defs.
/// Each statement is rendered as single-space separated tokens without the
/// trailing ';'. A bare return is recorded as "return".
std::vector<std::string> extract_return_statements(std::string_view body, Language language);

/// Canonical type text: whitespace removed except between words, lowercase
/// package/module qualifiers stripped ("java.util.List<Integer>" -> "List<Integer>"),
/// generics, arrays and varargs preserved. Idempotent.
std::string normalize_type(std::string_view type_text, Language language);

/// Import targets, normalized and sorted, duplicates removed.
/// Java: "java.util.List", "static java.lang.Math.max".
/// Python: "os", "os.path" (for "from os import path"); aliases dropped.
std::vector<std::string> extract_imports(std::string_view source, Language language);

/// Exception types raised by `raise X(...)` statements in a Python body.
std::vector<std::string> extract_raises(std::string_view body);

/// Renders a compilable-looking declaration that parses back to `sig`.
std::string render_signature(const ApiSignature& sig);

bool is_valid_identifier(std::string_view name, Language language);

struct JavaTypeDecl {
  std::string name;
  bool is_public = false;
};

/// Top-level class, interface, enum and record declarations in source order.
std::vector<JavaTypeDecl> java_top_level_types(std::string_view source);

}  // namespace code2api::code_model
