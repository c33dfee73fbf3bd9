// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 Code2API Contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace code2api::text {

std::string_view trim(std::string_view s);
std::string trim_copy(std::string_view s);

/// Splits on '\n'; a trailing '\r' is dropped from each line.
std::vector<std::string_view> split_lines(std::string_view s);

std::string to_lower(std::string_view s);
bool istarts_with(std::string_view s, std::string_view prefix);
bool icontains(std::string_view haystack, std::string_view needle);

/// Number of Unicode code points in a UTF-8 string (invalid bytes count as one each).
std::size_t utf8_length(std::string_view s);

void append_utf8(std::string& out, std::uint32_t code_point);

/// Line count of a snippet, ignoring leading and trailing blank lines.
std::size_t count_lines(std::string_view s);

/// Stable 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view s);

}  // namespace code2api::text
