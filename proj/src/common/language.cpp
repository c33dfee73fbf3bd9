// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#include "code2api/language.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace code2api {

std::string_view to_string(Language language) {
  return language == Language::kJava ? "java" : "python";
}

Language parse_language(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "java") return Language::kJava;
  if (lowered == "python") return Language::kPython;
  throw std::invalid_argument("unsupported language: " + std::string(text));
}

std::string_view default_tag(Language language) { return to_string(language); }

std::string_view display_name(Language language) {
  return language == Language::kJava ? "Java" : "Python";
}

}  // namespace code2api
