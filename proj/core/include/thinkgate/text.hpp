// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace thinkgate {

/// Number of Unicode scalar values in a UTF-8 string (continuation bytes
/// are not counted). Invalid bytes count as one scalar each.
std::size_t utf8_length(std::string_view s);

/// Leading and trailing ASCII whitespace removed.
std::string_view trim(std::string_view s);

/// Lowercase copy (ASCII only).
std::string to_lower(std::string_view s);

/// Case-insensitive equality (ASCII only).
bool iequals(std::string_view a, std::string_view b);

/// Maximal run of alphanumeric characters after skipping any non-alphanumeric
/// prefix; empty if the string has no alphanumeric character.
std::string_view first_alnum_run(std::string_view s);

} // namespace thinkgate
