// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "code2api/api_extractor.hpp"
#include "code2api/language.hpp"
#include "code2api/llm_backend.hpp"

// Compiles generated sources with an external toolchain and drives the
// bounded compile-error feedback loop.
namespace code2api::compile {

inline constexpr int kDefaultMaxRounds = 3;

/// Placeholders in args: {file} (source path), {dir} (scratch directory),
/// {out} (class output directory inside the scratch directory).
struct Toolchain {
  std::string id;
  Language language = Language::kJava;
  std::string command;
  std::vector<std::string> args;
  std::string diagnostic_pattern;  // ECMAScript regex, matched per output line
  int line_group = 1;              // 0 = not captured
  int column_group = 0;
  int message_group = 2;
  std::chrono::milliseconds timeout{30000};
};

/// Reads {"toolchains": [...]}. Throws std::runtime_error on bad files.
std::vector<Toolchain> load_toolchains(const std::filesystem::path& path);
/// $CODE2API_TOOLCHAINS, else the file detected at configure time.
std::filesystem::path default_toolchains_path();
/// First toolchain for the language. Throws CompileError(kToolchainMissing).
const Toolchain& toolchain_for(const std::vector<Toolchain>& toolchains, Language language);

struct Diagnostic {
  int line = 0;  // 1-based in the submitted source; 0 when unknown
  int column = 0;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct CompileOutcome {
  bool success = false;
  std::vector<Diagnostic> diagnostics;
  int rounds_used = 0;
  std::string final_source;
  std::string toolchain_id;
  std::string raw_output;  // combined stdout and stderr of the last run

  friend bool operator==(const CompileOutcome&, const CompileOutcome&) = default;
};

class CompileError : public std::runtime_error {
 public:
  enum class Kind { kToolchainMissing, kTimeout, kWorkspaceError };
  CompileError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Java statements that are not inside any type declaration or method get a
/// wrapper class and method; a bare method gets a wrapper class. Returns
/// nullopt when the source already declares a top-level type. The second
/// member is the number of lines added before the original text.
std::optional<std::pair<std::string, int>> wrap_java_snippet(std::string_view source,
                                                             std::string_view class_name);

/// Writes the source into a fresh scratch directory, runs the toolchain and
/// parses its diagnostics. Java files are named after their public top-level
/// type (the compiler requires it), otherwise "Code2API<answer_id>.java".
/// Blank sources fail without running anything. The scratch directory is
/// removed before returning.
CompileOutcome compile_once(std::string_view source, const Toolchain& toolchain,
                            std::int64_t answer_id = 0);

/// Scratch directories currently left under the temp directory by this
/// process (for leak checks).
std::size_t live_scratch_dirs();

class RepairError : public std::runtime_error {
 public:
  RepairError(const llm::BackendError& cause, CompileOutcome partial)
      : std::runtime_error(std::string("repair loop stopped: ") + cause.what()),
        kind_(cause.kind()),
        partial_(std::move(partial)) {}
  llm::BackendError::Kind backend_kind() const noexcept { return kind_; }
  const CompileOutcome& partial() const noexcept { return partial_; }

 private:
  llm::BackendError::Kind kind_;
  CompileOutcome partial_;
};

struct RepairOptions {
  int max_rounds = kDefaultMaxRounds;
  std::string model_name = std::string(llm::kDefaultModel);
};

/// Compiles the API; while it fails and rounds remain, asks the backend for a
/// corrected version (previous source plus diagnostics), re-extracts and
/// recompiles. rounds_used counts backend calls.
CompileOutcome repair_loop(const extract::GeneratedApi& api, llm::Client& client,
                           const Toolchain& toolchain, const RepairOptions& options = {});

/// One "Line L, Column C: message" line per diagnostic; unknown positions are omitted.
std::string format_diagnostics(const std::vector<Diagnostic>& diagnostics);

}  // namespace code2api::compile
