// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tooka/corpus.hpp"

namespace tooka {

// Pipeline: NFKC, then the character map, then whitespace collapse. Each stage
// can be switched off. The default map rewrites Arabic codepoints to their
// Persian equivalents and strips tatweel and harakat; ZWNJ is preserved.
struct NormalizationConfig {
  bool apply_nfkc = true;
  bool collapse_whitespace = true;
  // Ordered (source codepoint, replacement sequence); an empty replacement
  // removes the source.
  std::vector<std::pair<char32_t, std::u32string>> char_map;

  static NormalizationConfig defaults();

  // Checks: sources distinct; no replacement codepoint is also a source
  // (the map is closed after one pass); replacements already NFKC-normal.
  void validate() const;

  // Codepoints are spelled as "U+XXXX"; replacements are space-separated
  // sequences ("" removes). {"apply_nfkc", "collapse_whitespace",
  // "char_map": [{"from": "U+064A", "to": "U+06CC"}, ...]}
  static NormalizationConfig from_json(const std::string& json_text);
  std::string to_json() const;
};

struct NormalizationReport {
  uint64_t documents = 0;
  uint64_t input_codepoints = 0;
  uint64_t output_codepoints = 0;
  // Input codepoints whose singleton NFKC form differs from themselves.
  // Cross-codepoint compositions are not attributed to any single character.
  uint64_t nfkc_changed_chars = 0;
  std::map<char32_t, uint64_t> replacements;

  void merge(const NormalizationReport& other);
  std::string to_json() const;
};

// Total on valid UTF-8; throws Error on invalid byte sequences. Idempotent:
// normalizing the output again returns it unchanged.
std::pair<std::string, NormalizationReport> normalize_text(std::string_view text,
                                                           const NormalizationConfig& config);

// Order-preserving, one output document per input. Parallelizes per document;
// output is identical for any worker count. I/O failures abort naming the
// offending document.
NormalizationReport normalize_corpus(const DocumentSource& src, const DocumentSink& sink,
                                     const NormalizationConfig& config, int workers = 1);

// "U+XXXX" <-> codepoint helpers used by config and report serialization.
char32_t parse_codepoint_literal(const std::string& text);
std::string codepoint_literal(char32_t cp);

}  // namespace tooka
