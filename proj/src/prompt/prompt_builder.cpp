// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/prompt_builder.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "code2api/api_extractor.hpp"
#include "code2api/json_io.hpp"
#include "code2api/text.hpp"

namespace code2api::prompt {

namespace {

constexpr std::string_view kSeparator = "\n\n";

constexpr std::array<std::string_view, 10> kOrdinals = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

std::string example_label(std::size_t index) {
  const std::string n =
      index < kOrdinals.size() ? std::string(kOrdinals[index]) : std::to_string(index + 1);
  return "Example " + n + ":";
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

// Replaces whole-word occurrences of `from`.
std::string replace_word(std::string_view s, std::string_view from, std::string_view to) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::size_t hit = s.find(from, i);
    if (hit == std::string_view::npos) break;
    const std::size_t end = hit + from.size();
    const bool bounded = (hit == 0 || !is_ident_char(s[hit - 1])) &&
                         (end == s.size() || !is_ident_char(s[end]));
    out.append(s.substr(i, hit - i));
    out.append(bounded ? to : from);
    i = end;
  }
  out.append(s.substr(i));
  return out;
}

void validate_wrapper(std::string_view name) {
  if (name.empty() || std::isdigit(static_cast<unsigned char>(name.front())) ||
      !std::all_of(name.begin(), name.end(), is_ident_char)) {
    throw std::invalid_argument("wrapper class name is not an identifier: " + std::string(name));
  }
}

std::string join_parts(const std::vector<const std::string*>& parts) {
  std::string out;
  for (const auto* p : parts) {
    if (p->empty()) continue;
    if (!out.empty()) out += kSeparator;
    out += *p;
  }
  return out;
}

}  // namespace

CotPlan default_cot(Language language, std::string_view wrapper_class) {
  validate_wrapper(wrapper_class);
  CotPlan plan;
  plan.language = language;
  plan.wrapper_class = std::string(wrapper_class);
  if (language == Language::kJava) {
    plan.steps = {
        "Recover import statements based on the code snippet. If necessary, it can be none.",
        "Define a public class " + plan.wrapper_class + " that will be used to wrap the method.",
        "Create \"public static\" modifier for the method.",
        "Create the method name based on the context or the code snippet itself.",
        "Infer parameter list based on the code snippet. If necessary, it can be none.",
        "Infer return statements based on the code snippet. If necessary, it can be none.",
        "Infer throws statements based on the code snippet. If necessary, it can be none.",
        "Output the complete code based on the above results.",
    };
  } else {
    plan.steps = {
        "Recover import statements based on the code snippet. If necessary, it can be none.",
        "Use the \"def\" keyword to define the function at module level.",
        "Create the function name based on the context or the code snippet itself.",
        "Infer parameter list based on the code snippet. If necessary, it can be none.",
        "Infer return statements based on the code snippet. If necessary, it can be none.",
        "Infer raise statements based on the code snippet. If necessary, it can be none.",
        "Output the complete code based on the above results.",
    };
  }
  return plan;
}

void validate_example(const FewShotExample& example) {
  const auto& ctx = example.context;
  if (const auto problem = corpus::validate(ctx)) {
    const std::string& p = *problem;
    throw BankError("context." + p.substr(0, p.find(' ')), p);
  }
  const std::size_t lines = text::count_lines(ctx.code_snippet);
  if (lines < 3 || lines > 10) {
    throw BankError("context.code_snippet",
                    "expected 3 to 10 lines, got " + std::to_string(lines));
  }
  const std::size_t expected = default_cot(ctx.language).steps.size() - 1;
  if (example.worked_steps.size() != expected) {
    throw BankError("worked_steps", "expected " + std::to_string(expected) + " entries, got " +
                                        std::to_string(example.worked_steps.size()));
  }
  for (std::size_t i = 0; i < example.worked_steps.size(); ++i) {
    const auto& s = example.worked_steps[i];
    if (text::trim(s).empty() || s.find('\n') != std::string::npos) {
      throw BankError("worked_steps",
                      "step " + std::to_string(i + 1) + " must be one non-empty line");
    }
  }
  if (text::trim(example.complete_code).empty()) {
    throw BankError("complete_code", "is empty");
  }
}

std::vector<FewShotExample> load_bank(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open few-shot bank " + path.string());
  std::vector<FewShotExample> bank;
  std::set<std::int64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const std::string where = " (line " + std::to_string(line_no) + ")";
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw BankError("line", std::string("invalid JSON") + where + ": " + e.what());
    }
    if (!j.is_object()) throw BankError("line", "expected an object" + where);
    for (const char* key : {"question_id", "answer_id", "question_title", "question_body",
                            "answer_body", "code_snippet", "language", "answer_score",
                            "view_count", "tags", "is_accepted", "worked_steps",
                            "complete_code"}) {
      if (!j.contains(key)) throw BankError(key, "missing" + where);
    }
    FewShotExample ex;
    try {
      j.get_to(ex);
    } catch (const nlohmann::json::exception& e) {
      throw BankError("line", std::string("wrong field type") + where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw BankError("language", e.what() + where);
    }
    try {
      validate_example(ex);
    } catch (const BankError& e) {
      throw BankError(e.field(), e.what() + where);
    }
    if (!ids.insert(ex.context.answer_id).second) {
      throw BankError("context.answer_id", "duplicate " + std::to_string(ex.context.answer_id) +
                                               where);
    }
    bank.push_back(std::move(ex));
  }
  return bank;
}

void store_bank(const std::vector<FewShotExample>& bank, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write few-shot bank " + path.string());
  for (const auto& ex : bank) out << nlohmann::json(ex).dump() << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

SelectionScore score_subset(const std::vector<const FewShotExample*>& subset) {
  SelectionScore score;
  if (subset.empty()) return score;
  std::set<std::size_t> covered;
  std::size_t lo = SIZE_MAX;
  std::size_t hi = 0;
  for (const auto* ex : subset) {
    for (std::size_t i = 0; i < ex->worked_steps.size(); ++i) {
      if (!extract::is_none_answer(ex->worked_steps[i])) covered.insert(i);
    }
    const std::size_t lines = text::count_lines(ex->context.code_snippet);
    lo = std::min(lo, lines);
    hi = std::max(hi, lines);
  }
  score.coverage = covered.size();
  score.spread = hi - lo;
  return score;
}

std::vector<FewShotExample> select_few_shot(const std::vector<FewShotExample>& bank,
                                            std::size_t k) {
  if (k > bank.size()) {
    throw std::invalid_argument("cannot select " + std::to_string(k) + " examples from a bank of " +
                                std::to_string(bank.size()));
  }
  if (k == 0) return {};
  // Enumerate combinations over the id-sorted bank in lexicographic order and
  // keep only strict improvements, so the first best subset found is the one
  // with the smallest sorted ids.
  std::vector<std::size_t> by_id(bank.size());
  for (std::size_t i = 0; i < by_id.size(); ++i) by_id[i] = i;
  std::stable_sort(by_id.begin(), by_id.end(), [&](std::size_t a, std::size_t b) {
    return bank[a].context.answer_id < bank[b].context.answer_id;
  });

  std::vector<std::size_t> combo(k);
  for (std::size_t i = 0; i < k; ++i) combo[i] = i;
  std::vector<std::size_t> best;
  SelectionScore best_score;
  std::vector<const FewShotExample*> subset(k);
  const std::size_t n = bank.size();
  for (;;) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = &bank[by_id[combo[i]]];
    const SelectionScore s = score_subset(subset);
    if (best.empty() || s > best_score) {
      best_score = s;
      best = combo;
    }
    std::size_t i = k;
    while (i > 0 && combo[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++combo[i - 1];
    for (std::size_t j = i; j < k; ++j) combo[j] = combo[j - 1] + 1;
  }

  std::vector<std::size_t> chosen;
  for (const std::size_t c : best) chosen.push_back(by_id[c]);
  std::sort(chosen.begin(), chosen.end());
  std::vector<FewShotExample> out;
  for (const std::size_t c : chosen) out.push_back(bank[c]);
  return out;
}

OverBudget::OverBudget(std::size_t estimate, std::size_t budget)
    : std::runtime_error("prompt needs about " + std::to_string(estimate) +
                         " tokens, budget is " + std::to_string(budget)),
      estimate_(estimate),
      budget_(budget) {}

std::size_t estimate_tokens(std::string_view text) { return (text::utf8_length(text) + 3) / 4; }

std::string role_directive(Language language) {
  const std::string name(display_name(language));
  const char* unit = language == Language::kJava ? " method" : " function";
  return "Give you a context including a question title, a question post and an answer post, "
         "your task is to transform the " +
         name + " code snippet within the answer post into " + name + unit +
         " based on the context.";
}

std::string render_cot(const CotPlan& plan) {
  if (plan.steps.empty()) throw std::invalid_argument("chain of thought has no steps");
  std::string out = "To solve the problem, do the following:";
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    out += "\nStep " + std::to_string(i + 1) + " - " + plan.steps[i];
  }
  return out;
}

std::string render_examples(const std::vector<FewShotExample>& examples, const CotPlan& plan) {
  if (examples.empty()) return {};
  const bool rename = plan.language == Language::kJava && plan.wrapper_class != kDefaultWrapperClass;
  auto adapt = [&](const std::string& s) {
    return rename ? replace_word(s, kDefaultWrapperClass, plan.wrapper_class) : s;
  };
  std::string out = "Here are some examples:";
  for (std::size_t e = 0; e < examples.size(); ++e) {
    const auto& ex = examples[e];
    const auto& c = ex.context;
    out += e == 0 ? "\n" : "\n\n";
    out += example_label(e);
    out += "\nQuestion title:\n" + c.question_title;
    out += "\nQuestion post:\n" + c.question_body;
    out += "\nAnswer post:\n" + c.answer_body;
    out += "\nCode snippet in the answer post:\n" + c.code_snippet;
    out += "\n\nSpecific steps:";
    for (std::size_t i = 0; i < ex.worked_steps.size(); ++i) {
      out += "\nStep " + std::to_string(i + 1) + ": " + adapt(ex.worked_steps[i]);
    }
    out += "\nComplete code:\n" + adapt(ex.complete_code);
  }
  return out;
}

std::string render_test_input(const corpus::SnippetContext& ctx) {
  return "Now, give you the following context:\nQuestion title: <" + ctx.question_title +
         ">;\nQuestion post: <" + ctx.question_body + ">;\nAnswer post: <" + ctx.answer_body +
         ">;\nCode snippet in the answer post: <" + ctx.code_snippet + ">";
}

std::string format_constraints(const CotPlan& plan) {
  const std::size_t n = plan.steps.size();
  if (n < 2) throw std::invalid_argument("chain of thought needs at least two steps");
  return "Please output the results in the following format:\nSpecific steps: <the results of "
         "step 1-" +
         std::to_string(n - 1) + ">\nComplete code: <the result of step " + std::to_string(n) +
         ">";
}

PromptBundle render_prompt(const corpus::SnippetContext& ctx, const CotPlan& cot,
                           const std::vector<FewShotExample>& examples, Ablation ablation,
                           std::size_t budget) {
  if (const auto problem = corpus::validate(ctx)) {
    throw std::invalid_argument("invalid context: " + *problem);
  }
  PromptBundle b;
  b.ablation = ablation;
  b.role_directive = role_directive(cot.language);
  if (ablation.use_cot) b.cot_text = render_cot(cot);
  if (ablation.use_few_shot) b.examples_text = render_examples(examples, cot);
  b.test_input_text = render_test_input(ctx);
  b.format_constraints_text = format_constraints(cot);
  b.rendered = join_parts({&b.role_directive, &b.cot_text, &b.examples_text, &b.test_input_text,
                           &b.format_constraints_text});
  b.token_estimate = estimate_tokens(b.rendered);
  if (b.token_estimate > budget) throw OverBudget(b.token_estimate, budget);
  return b;
}

PromptBundle render_default_prompt(const corpus::SnippetContext& ctx, Ablation ablation,
                                   std::size_t budget) {
  return render_prompt(ctx, default_cot(ctx.language), builtin_bank(ctx.language), ablation,
                       budget);
}

std::string render_repair_prompt(Language language, std::string_view source,
                                 std::string_view diagnostics, const CotPlan& plan) {
  std::string out = role_directive(language);
  out += kSeparator;
  out += "The following code failed to compile:\n";
  out += source;
  out += kSeparator;
  out += "Compiler diagnostics:\n";
  out += diagnostics;
  out += kSeparator;
  out += "Fix the code so that it compiles and keeps the same behavior.";
  out += kSeparator;
  out += format_constraints(plan);
  return out;
}

}  // namespace code2api::prompt
