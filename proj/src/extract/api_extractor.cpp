// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/api_extractor.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>

#include "code2api/json_io.hpp"
#include "code2api/lexer.hpp"
#include "code2api/text.hpp"

namespace code2api::extract {

namespace {

// "Step 4: name", "**Step 4** - name", "- step 4. name"
const std::regex kStepLine(R"(^\s*(?:[-*>#]+\s*)?(?:\*\*|__)?step\s*(\d+)\s*(?:\*\*|__)?\s*[-:.)]?\s*(?:\*\*|__)?\s*(.*)$)",
                           std::regex::icase);
// "Complete code:", "**Complete code:**", "### Complete code**:**"
const std::regex kCompleteCode(R"(^\s*(?:[#>]+\s*)?(?:\*\*|__)?complete\s+code\s*(?:\*\*|__)?\s*:\s*(?:\*\*|__)?\s*(.*)$)",
                               std::regex::icase);
const std::regex kSpecificSteps(R"(^\s*(?:[#>]+\s*)?(?:\*\*|__)?specific\s+steps\b.*$)",
                                std::regex::icase);

bool is_fence(std::string_view line) { return text::trim(line).starts_with("```"); }

std::string join_lines(const std::vector<std::string_view>& lines, std::size_t begin,
                       std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += '\n';
    out += lines[i];
  }
  return out;
}

// Drops blank lines at both ends and trailing whitespace, keeping the first
// line's indentation.
std::string trim_block(std::string_view block) {
  auto lines = text::split_lines(block);
  std::size_t begin = 0;
  std::size_t end = lines.size();
  while (begin < end && text::trim(lines[begin]).empty()) ++begin;
  while (end > begin && text::trim(lines[end - 1]).empty()) --end;
  std::string out = join_lines(lines, begin, end);
  while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
  return out;
}

std::string code_after_marker(const std::vector<std::string_view>& lines, std::size_t marker,
                              std::string_view rest) {
  std::vector<std::string_view> region;
  if (!text::trim(rest).empty()) region.push_back(text::trim(rest));
  for (std::size_t i = marker + 1; i < lines.size(); ++i) region.push_back(lines[i]);

  for (std::size_t i = 0; i < region.size(); ++i) {
    if (!is_fence(region[i])) continue;
    std::size_t close = i + 1;
    while (close < region.size() && !is_fence(region[close])) ++close;
    return trim_block(join_lines(region, i + 1, close));
  }
  return trim_block(join_lines(region, 0, region.size()));
}

std::string strip_code_marks(std::string_view s) {
  std::string out = text::trim_copy(s);
  while (out.size() >= 2 && out.front() == '`' && out.back() == '`') {
    out = text::trim_copy(std::string_view(out).substr(1, out.size() - 2));
  }
  return out;
}

std::string spaced_tokens(std::string_view s, Language language) {
  std::string out;
  for (const auto& t : lexer::tokenize(s, language)) {
    if (!out.empty()) out += ' ';
    out += t.text;
  }
  return out;
}

std::vector<std::string> split_trimmed(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto end = std::min(s.find(sep, start), s.size());
    auto piece = text::trim(s.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end + 1;
  }
  return out;
}

struct StepLayout {
  int imports, name, params, returns, throws;
};

StepLayout layout_for(Language language) {
  if (language == Language::kJava) return {1, 4, 5, 6, 7};
  return {1, 3, 4, 5, 6};
}

void check_steps(const GeneratedApi& api, std::vector<std::string>& diags) {
  const auto layout = layout_for(api.language);
  const Language lang = api.language;
  auto step = [&](int k) -> std::optional<std::string> {
    const auto it = api.steps_raw.find(k);
    if (it == api.steps_raw.end()) return std::nullopt;
    return strip_code_marks(it->second);
  };
  auto disagree = [&](int k, std::string_view what) {
    diags.push_back("Disagreement: step " + std::to_string(k) + " " + std::string(what) +
                    " differs from the complete code");
  };

  if (const auto s = step(layout.imports)) {
    std::vector<std::string> stated;
    if (!is_none_answer(*s)) {
      stated = code_model::extract_imports(*s, lang);
    }
    if (stated != api.imports) disagree(layout.imports, "imports");
  }
  if (const auto s = step(layout.name)) {
    std::string name = *s;
    if (const auto paren = name.find('('); paren != std::string::npos) name.resize(paren);
    if (text::trim(name) != api.method_name) disagree(layout.name, "method name");
  }
  if (const auto s = step(layout.params)) {
    std::string stated = is_none_answer(*s) ? "()" : spaced_tokens(*s, lang);
    if (!stated.starts_with("(")) stated = "( " + stated + " )";
    std::string actual = "(";
    for (std::size_t i = 0; i < api.parameters.size(); ++i) {
      if (i > 0) actual += ",";
      actual += " " + api.parameters[i].type_text + " " + api.parameters[i].name;
    }
    actual += " )";
    auto squash = [](std::string v) {
      v.erase(std::remove(v.begin(), v.end(), ' '), v.end());
      return v;
    };
    // Python steps usually omit annotations; compare names only there.
    if (lang == Language::kPython) {
      std::vector<std::string> names;
      for (const auto& p : api.parameters) names.push_back(p.name);
      std::vector<std::string> stated_names;
      for (const auto& piece : split_trimmed(*s, ',')) {
        std::string n = piece;
        n.erase(std::remove_if(n.begin(), n.end(), [](char c) { return c == '(' || c == ')' || c == '*'; }),
                n.end());
        n = text::trim_copy(n.substr(0, n.find_first_of(":=")));
        if (!n.empty()) stated_names.push_back(n);
      }
      if (is_none_answer(*s)) stated_names.clear();
      if (stated_names != names) disagree(layout.params, "parameters");
    } else if (squash(stated) != squash(actual)) {
      disagree(layout.params, "parameters");
    }
  }
  if (const auto s = step(layout.returns)) {
    std::vector<std::string> stated;
    if (!is_none_answer(*s)) {
      for (const auto& piece : split_trimmed(*s, lang == Language::kJava ? ';' : '\n')) {
        stated.push_back(spaced_tokens(piece, lang));
      }
    }
    if (stated != api.return_statements) disagree(layout.returns, "return statements");
  }
  if (const auto s = step(layout.throws)) {
    std::set<std::string> stated;
    if (!is_none_answer(*s)) {
      std::string list = *s;
      for (const std::string_view kw : {"throws", "raises", "raise"}) {
        if (text::istarts_with(list, kw)) list = list.substr(kw.size());
      }
      for (auto piece : split_trimmed(list, ',')) {
        while (!piece.empty() && (piece.back() == ';' || piece.back() == '.')) piece.pop_back();
        piece = code_model::normalize_type(piece.substr(0, piece.find('(')), lang);
        if (!piece.empty()) stated.insert(piece);
      }
    }
    if (std::vector<std::string>(stated.begin(), stated.end()) != api.throws) {
      disagree(layout.throws, lang == Language::kJava ? "throws" : "raises");
    }
  }
}

// Hoists import/package lines and indents everything else into a class.
std::string wrap_in_class(std::string_view code, const std::string& class_name) {
  std::string header;
  std::string body;
  for (const auto line : text::split_lines(code)) {
    const auto t = text::trim(line);
    if (t.starts_with("import ") || t.starts_with("package ")) {
      header += std::string(t) + "\n";
    } else {
      body += t.empty() ? "\n" : "    " + std::string(line) + "\n";
    }
  }
  return header + "public class " + class_name + " {\n" + body + "}";
}

}  // namespace

bool is_none_answer(std::string_view step_text) {
  std::string s = strip_code_marks(step_text);
  for (const std::string_view lead : {"//", "#", "/*"}) {
    if (std::string_view(s).starts_with(lead)) s = text::trim_copy(std::string_view(s).substr(lead.size()));
  }
  if (std::string_view(s).ends_with("*/")) s = text::trim_copy(std::string_view(s).substr(0, s.size() - 2));
  while (!s.empty() && (s.back() == '.' || s.back() == ';')) s.pop_back();
  return s.empty() || text::to_lower(s) == "none";
}

ExtractedFields extract_fields(std::string_view raw_text) {
  ExtractedFields out;
  const auto lines = text::split_lines(raw_text);

  std::optional<std::size_t> marker;
  std::string marker_rest;
  int markers = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_match(lines[i].begin(), lines[i].end(), m, kCompleteCode)) {
      marker = i;
      marker_rest = m[1].str();
      ++markers;
    }
  }
  if (!marker) {
    throw ExtractError(ExtractError::Kind::kMissingCompleteCode,
                       "response has no \"Complete code:\" field");
  }
  if (markers > 1) {
    out.diagnostics.push_back("MultipleCompleteCode: using the last of " +
                              std::to_string(markers) + " blocks");
  }
  out.complete_code = code_after_marker(lines, *marker, marker_rest);
  if (text::trim(out.complete_code).empty()) {
    throw ExtractError(ExtractError::Kind::kMissingCompleteCode,
                       "\"Complete code:\" field is empty");
  }

  // Steps: a payload continues over following lines until a blank line,
  // another step, or a section label.
  for (std::size_t i = 0; i < *marker; ++i) {
    std::match_results<std::string_view::const_iterator> m;
    if (!std::regex_match(lines[i].begin(), lines[i].end(), m, kStepLine)) continue;
    const int k = std::stoi(m[1].str());
    std::string payload = text::trim_copy(m[2].str());
    std::size_t j = i + 1;
    for (; j < *marker; ++j) {
      const auto line = lines[j];
      if (text::trim(line).empty() || std::regex_match(line.begin(), line.end(), kStepLine) ||
          std::regex_match(line.begin(), line.end(), kSpecificSteps)) {
        break;
      }
      if (!payload.empty()) payload += '\n';
      payload += text::trim(line);
    }
    out.steps_raw.emplace(k, std::move(payload));  // first occurrence wins
    i = j - 1;
  }
  if (out.steps_raw.empty()) {
    out.degraded = true;
    out.diagnostics.emplace_back("MissingSteps: fields recovered from the complete code");
  }
  return out;
}

std::string render_response(const std::map<int, std::string>& steps_raw,
                            std::string_view complete_code) {
  std::string out = "Specific steps:\n";
  for (const auto& [k, payload] : steps_raw) {
    out += "Step " + std::to_string(k) + ": " + payload + "\n";
  }
  out += "Complete code:\n";
  out += complete_code;
  out += "\n";
  return out;
}

GeneratedApi parse_generated(std::string_view complete_code, Language language,
                             std::int64_t answer_id, const std::map<int, std::string>& steps_raw,
                             const ParseOptions& options) {
  if (text::trim(complete_code).empty()) {
    throw ExtractError(ExtractError::Kind::kUnparseable, "complete code is empty");
  }
  GeneratedApi api;
  api.answer_id = answer_id;
  api.language = language;
  api.complete_source = std::string(complete_code);
  api.steps_raw = steps_raw;

  code_model::ApiSignature sig;
  try {
    if (language == Language::kJava && code_model::java_top_level_types(complete_code).empty()) {
      api.complete_source = wrap_in_class(complete_code, options.wrapper_class);
      api.diagnostics.push_back("WrappedInClass: " + options.wrapper_class);
    }
    sig = code_model::parse_method_signature(api.complete_source, language);
  } catch (const code_model::ParseError& e) {
    throw ExtractError(ExtractError::Kind::kUnparseable, e.what());
  }
  std::set<std::string> names;
  for (const auto& p : sig.params) {
    if (!names.insert(p.name).second) {
      throw ExtractError(ExtractError::Kind::kUnparseable, "duplicate parameter name " + p.name);
    }
  }

  api.imports = sig.imports;
  if (language == Language::kJava) api.wrapper_class = sig.wrapper_class;
  api.modifiers = sig.modifiers;
  api.method_name = sig.method_name;
  api.parameters = sig.params;
  api.return_type = sig.return_type;
  api.return_statements = sig.return_statements;
  api.throws = sig.throws;
  api.method_body = sig.body;
  if (language == Language::kJava && !api.wrapper_class) {
    // A class exists but the method lives outside it (e.g. after the class).
    api.diagnostics.emplace_back("MethodOutsideClass");
  }
  check_steps(api, api.diagnostics);
  return api;
}

GeneratedApi extract_api(std::string_view raw_text, Language language, std::int64_t answer_id,
                         const ParseOptions& options) {
  auto fields = extract_fields(raw_text);
  auto api = parse_generated(fields.complete_code, language, answer_id, fields.steps_raw, options);
  api.diagnostics.insert(api.diagnostics.begin(), fields.diagnostics.begin(),
                         fields.diagnostics.end());
  return api;
}

std::string artifact_file_name(std::int64_t answer_id, Language language) {
  return language == Language::kJava ? "Code2API" + std::to_string(answer_id) + ".java"
                                     : "code2api_" + std::to_string(answer_id) + ".py";
}

std::filesystem::path write_artifact(const GeneratedApi& api, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto path = out_dir / artifact_file_name(api.answer_id, api.language);
  {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << api.complete_source;
    if (!f) throw std::runtime_error("cannot write " + path.string());
  }
  auto meta = path;
  meta += ".meta.json";
  std::ofstream f(meta, std::ios::binary | std::ios::trunc);
  f << nlohmann::json(api).dump() << '\n';
  if (!f) throw std::runtime_error("cannot write " + meta.string());
  return path;
}

}  // namespace code2api::extract
