// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "code2api/corpus.hpp"
#include "code2api/language.hpp"

// Six-part prompt assembly: role designation, chain of thought, example
// input/output pairs, test input, and format constraints.
namespace code2api::prompt {

inline constexpr std::string_view kDefaultWrapperClass = "Chatgpt";
inline constexpr std::size_t kContextLimit = 4096;
inline constexpr std::size_t kCompletionReserve = 700;
inline constexpr std::size_t kDefaultBudget = kContextLimit - kCompletionReserve;

struct CotPlan {
  Language language = Language::kJava;
  std::vector<std::string> steps;  // directive text without the "Step k - " prefix
  /// Java only. Examples are rendered with this class name in place of the
  /// default one.
  std::string wrapper_class = std::string(kDefaultWrapperClass);
};

/// Java: the eight steps of the published prompt. Python: the class step is
/// dropped and the modifier step becomes a module-level "def" step (7 steps).
CotPlan default_cot(Language language, std::string_view wrapper_class = kDefaultWrapperClass);

struct FewShotExample {
  corpus::SnippetContext context;
  std::vector<std::string> worked_steps;  // answers to every step but the last
  std::string complete_code;

  friend bool operator==(const FewShotExample&, const FewShotExample&) = default;
};

/// Names the offending field, e.g. "worked_steps: expected 7 entries, got 5".
class BankError : public std::invalid_argument {
 public:
  BankError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Checks the example against the plan of its language: one worked step per
/// non-final step, at least 7 steps in total, snippet of 3..10 lines,
/// non-empty title and complete code. Throws BankError.
void validate_example(const FewShotExample& example);

/// The shipped banks: five examples per language. The Java bank starts with
/// the published int[] -> List<Integer> example.
const std::vector<FewShotExample>& builtin_bank(Language language);

/// One example per line. Every line is validated; the first failure throws
/// BankError with the line number in the message.
std::vector<FewShotExample> load_bank(const std::filesystem::path& path);
void store_bank(const std::vector<FewShotExample>& bank, const std::filesystem::path& path);

struct SelectionScore {
  std::size_t coverage = 0;  // distinct steps answered with something other than "None"
  std::size_t spread = 0;    // max - min snippet line count

  friend auto operator<=>(const SelectionScore&, const SelectionScore&) = default;
};

SelectionScore score_subset(const std::vector<const FewShotExample*>& subset);

/// Picks the k-subset with the best (coverage, spread); ties go to the subset
/// whose sorted answer ids are lexicographically smallest. The result keeps
/// bank order. Throws std::invalid_argument when k > bank size.
std::vector<FewShotExample> select_few_shot(const std::vector<FewShotExample>& bank, std::size_t k);

struct Ablation {
  bool use_cot = true;
  bool use_few_shot = true;

  friend bool operator==(const Ablation&, const Ablation&) = default;
};

struct PromptBundle {
  std::string role_directive;
  std::string cot_text;
  std::string examples_text;
  std::string test_input_text;
  std::string format_constraints_text;
  std::string rendered;
  std::size_t token_estimate = 0;
  Ablation ablation;
};

class OverBudget : public std::runtime_error {
 public:
  OverBudget(std::size_t estimate, std::size_t budget);
  std::size_t estimate() const noexcept { return estimate_; }
  std::size_t budget() const noexcept { return budget_; }

 private:
  std::size_t estimate_;
  std::size_t budget_;
};

/// ceil(code points / 4).
std::size_t estimate_tokens(std::string_view text);

std::string role_directive(Language language);
std::string render_cot(const CotPlan& plan);
std::string render_examples(const std::vector<FewShotExample>& examples, const CotPlan& plan);
std::string render_test_input(const corpus::SnippetContext& ctx);
std::string format_constraints(const CotPlan& plan);

/// Joins the enabled parts with one blank line between them. Throws
/// OverBudget when the estimate exceeds `budget`.
PromptBundle render_prompt(const corpus::SnippetContext& ctx, const CotPlan& cot,
                           const std::vector<FewShotExample>& examples, Ablation ablation,
                           std::size_t budget = kDefaultBudget);

/// Convenience: default plan and the first five built-in examples for the
/// context's language.
PromptBundle render_default_prompt(const corpus::SnippetContext& ctx, Ablation ablation = {},
                                   std::size_t budget = kDefaultBudget);

/// Follow-up prompt for the compile repair loop.
std::string render_repair_prompt(Language language, std::string_view source,
                                 std::string_view diagnostics, const CotPlan& plan);

}  // namespace code2api::prompt
