// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "code2api/code_model.hpp"
#include "code2api/language.hpp"

// Turns a formatted model response ("Specific steps: ... Complete code: ...")
// into a GeneratedApi. The complete code is authoritative; the step answers
// are only cross-checked against it.
namespace code2api::extract {

class ExtractError : public std::runtime_error {
 public:
  enum class Kind { kMissingCompleteCode, kUnparseable };

  ExtractError(Kind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

struct ExtractedFields {
  std::map<int, std::string> steps_raw;  // step index -> payload of its line
  std::string complete_code;
  /// No "Step k" lines were found. Fields can still be recovered from the code.
  bool degraded = false;
  std::vector<std::string> diagnostics;
};

/// Captures "Step k:" line payloads (before the complete-code marker) and the
/// code after the last "Complete code:" marker. Markdown bold around labels
/// and code fences around the code are tolerated; surrounding prose is
/// ignored. Throws ExtractError::kMissingCompleteCode.
ExtractedFields extract_fields(std::string_view raw_text);

/// Re-renders fields in the response format that extract_fields reads.
std::string render_response(const std::map<int, std::string>& steps_raw,
                            std::string_view complete_code);

struct GeneratedApi {
  std::int64_t answer_id = 0;
  Language language = Language::kJava;
  std::vector<std::string> imports;
  std::optional<std::string> wrapper_class;
  std::string modifiers;
  std::string method_name;
  std::vector<code_model::Param> parameters;
  std::string return_type;
  std::vector<std::string> return_statements;
  std::vector<std::string> throws;
  std::string method_body;
  std::string complete_source;
  std::map<int, std::string> steps_raw;
  std::vector<std::string> diagnostics;

  friend bool operator==(const GeneratedApi&, const GeneratedApi&) = default;
};

struct ParseOptions {
  /// Class used when Java code arrives without one.
  std::string wrapper_class = "Chatgpt";
};

/// Parses `complete_code` into a GeneratedApi and merges `steps_raw`.
/// Where a step answer disagrees with the code the code wins and a
/// "Disagreement" diagnostic names the step. Java code without a top-level
/// class is wrapped in `options.wrapper_class` ("WrappedInClass" diagnostic).
/// Throws ExtractError::kUnparseable when no method is found, braces are
/// unbalanced, or parameter names repeat.
GeneratedApi parse_generated(std::string_view complete_code, Language language,
                             std::int64_t answer_id,
                             const std::map<int, std::string>& steps_raw = {},
                             const ParseOptions& options = {});

/// extract_fields followed by parse_generated; extraction diagnostics are kept.
GeneratedApi extract_api(std::string_view raw_text, Language language, std::int64_t answer_id,
                         const ParseOptions& options = {});

/// "Code2API<id>.java" or "code2api_<id>.py".
std::string artifact_file_name(std::int64_t answer_id, Language language);

/// Writes complete_source byte-for-byte plus a "<file>.meta.json" sidecar
/// holding the structured fields on one line. Returns the source path.
std::filesystem::path write_artifact(const GeneratedApi& api, const std::filesystem::path& out_dir);

/// True for step answers that mean "nothing": "None", "// None", "# none.", "".
bool is_none_answer(std::string_view step_text);

}  // namespace code2api::extract
