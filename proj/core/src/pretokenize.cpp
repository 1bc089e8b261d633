// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/pretokenize.hpp"

#include "tooka/unicode.hpp"

namespace tooka {

std::vector<std::string> pretokenize(std::string_view text) {
  std::vector<std::string> words;
  std::string pending;  // whitespace run awaiting the next word
  std::string current;  // word body under construction
  auto flush_current = [&] {
    if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  };
  size_t i = 0;
  while (i < text.size()) {
    size_t start = i;
    char32_t cp = utf8_next(text, i);
    std::string_view bytes = text.substr(start, i - start);
    if (is_unicode_whitespace(cp)) {
      flush_current();
      pending.append(bytes);
      continue;
    }
    if (is_unicode_punct(cp)) {
      flush_current();
      words.push_back(pending + std::string(bytes));
      pending.clear();
      continue;
    }
    if (current.empty()) {
      current = std::move(pending);
      pending.clear();
    }
    current.append(bytes);
  }
  flush_current();
  if (!pending.empty()) {
    words.push_back(std::move(pending));
  }
  return words;
}

}  // namespace tooka
