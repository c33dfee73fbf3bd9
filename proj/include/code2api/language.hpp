// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <string>
#include <string_view>

namespace code2api {

enum class Language { kJava, kPython };

/// Lowercase name used in files and on the command line ("java", "python").
std::string_view to_string(Language language);

/// Accepts "java"/"python" in any case. Throws std::invalid_argument otherwise.
Language parse_language(std::string_view text);

/// The dump tag that selects this language ("java", "python").
std::string_view default_tag(Language language);

std::string_view display_name(Language language);

}  // namespace code2api
