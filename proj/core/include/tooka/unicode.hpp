// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tooka {

bool utf8_valid(std::string_view bytes);

// Decodes to codepoints; throws Error naming the byte offset on invalid input.
std::u32string utf8_decode(std::string_view bytes);

// Decodes one codepoint at pos and advances pos past it; throws Error naming
// the byte offset on invalid input. pos must be < bytes.size().
char32_t utf8_next(std::string_view bytes, size_t& pos);

void utf8_append(std::string& out, char32_t cp);
std::string utf8_encode(std::u32string_view cps);

size_t utf8_codepoint_count(std::string_view bytes);

// Unicode White_Space property.
bool is_unicode_whitespace(char32_t cp);
// Unicode general category P*.
bool is_unicode_punct(char32_t cp);

// NFKC normalization of a UTF-8 string.
std::string nfkc(std::string_view utf8);

// True when NFKC of the single codepoint differs from the codepoint itself.
bool nfkc_changes_codepoint(char32_t cp);

// True when the string is already in NFKC form.
bool is_nfkc(std::string_view utf8);

}  // namespace tooka
