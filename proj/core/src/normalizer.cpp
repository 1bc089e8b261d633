// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/normalizer.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"
#include "tooka/parallel.hpp"
#include "tooka/unicode.hpp"

namespace tooka {

namespace {

using json = nlohmann::json;

std::u32string decode_all(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  size_t i = 0;
  while (i < utf8.size()) {
    out.push_back(utf8_next(utf8, i));
  }
  return out;
}

std::string encode_all(const std::u32string& cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t cp : cps) {
    utf8_append(out, cp);
  }
  return out;
}

}  // namespace

NormalizationConfig NormalizationConfig::defaults() {
  NormalizationConfig cfg;
  cfg.apply_nfkc = true;
  cfg.collapse_whitespace = true;
  auto map1 = [&cfg](char32_t from, char32_t to) { cfg.char_map.emplace_back(from, std::u32string(1, to)); };
  auto drop = [&cfg](char32_t from) { cfg.char_map.emplace_back(from, std::u32string()); };
  map1(0x064A, 0x06CC);  // Arabic yeh -> Farsi yeh
  map1(0x0643, 0x06A9);  // Arabic kaf -> keheh
  map1(0x0629, 0x0647);  // teh marbuta -> heh
  for (char32_t d = 0; d < 10; ++d) {
    map1(0x0660 + d, 0x06F0 + d);  // Arabic-Indic digits -> extended
  }
  drop(0x0640);  // tatweel
  for (char32_t cp = 0x064B; cp <= 0x0652; ++cp) {
    drop(cp);  // harakat
  }
  return cfg;
}

void NormalizationConfig::validate() const {
  std::set<char32_t> sources;
  for (const auto& [from, to] : char_map) {
    if (!sources.insert(from).second) {
      throw Error("char_map lists " + codepoint_literal(from) + " more than once");
    }
  }
  for (const auto& [from, to] : char_map) {
    for (char32_t cp : to) {
      if (sources.count(cp)) {
        throw Error("char_map replacement " + codepoint_literal(cp) +
                    " is itself a mapped source; the map must be closed after one pass");
      }
      if (apply_nfkc && nfkc_changes_codepoint(cp)) {
        throw Error("char_map replacement " + codepoint_literal(cp) +
                    " is not NFKC-normal, which would break idempotence");
      }
    }
  }
}

NormalizationConfig NormalizationConfig::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("normalization config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error("normalization config must be a JSON object");
  }
  NormalizationConfig cfg = defaults();
  if (j.contains("apply_nfkc")) {
    cfg.apply_nfkc = j.at("apply_nfkc").get<bool>();
  }
  if (j.contains("collapse_whitespace")) {
    cfg.collapse_whitespace = j.at("collapse_whitespace").get<bool>();
  }
  if (j.contains("char_map")) {
    cfg.char_map.clear();
    for (const auto& entry : j.at("char_map")) {
      char32_t from = parse_codepoint_literal(entry.at("from").get<std::string>());
      std::u32string to;
      std::istringstream parts(entry.at("to").get<std::string>());
      std::string part;
      while (parts >> part) {
        to.push_back(parse_codepoint_literal(part));
      }
      cfg.char_map.emplace_back(from, std::move(to));
    }
  }
  cfg.validate();
  return cfg;
}

std::string NormalizationConfig::to_json() const {
  json entries = json::array();
  for (const auto& [from, to] : char_map) {
    std::string to_text;
    for (size_t i = 0; i < to.size(); ++i) {
      if (i > 0) to_text += ' ';
      to_text += codepoint_literal(to[i]);
    }
    entries.push_back({{"from", codepoint_literal(from)}, {"to", to_text}});
  }
  json j{{"apply_nfkc", apply_nfkc},
         {"collapse_whitespace", collapse_whitespace},
         {"char_map", std::move(entries)}};
  return j.dump(2);
}

void NormalizationReport::merge(const NormalizationReport& other) {
  documents += other.documents;
  input_codepoints += other.input_codepoints;
  output_codepoints += other.output_codepoints;
  nfkc_changed_chars += other.nfkc_changed_chars;
  for (const auto& [cp, n] : other.replacements) {
    replacements[cp] += n;
  }
}

std::string NormalizationReport::to_json() const {
  json repl = json::object();
  for (const auto& [cp, n] : replacements) {
    repl[codepoint_literal(cp)] = n;
  }
  json j{{"documents", documents},
         {"input_codepoints", input_codepoints},
         {"output_codepoints", output_codepoints},
         {"nfkc_changed_chars", nfkc_changed_chars},
         {"replacements", std::move(repl)}};
  return j.dump(2);
}

std::pair<std::string, NormalizationReport> normalize_text(std::string_view text,
                                                           const NormalizationConfig& config) {
  NormalizationReport report;
  report.documents = 1;

  std::u32string cps = decode_all(text);
  report.input_codepoints = cps.size();
  if (config.apply_nfkc) {
    for (char32_t cp : cps) {
      if (nfkc_changes_codepoint(cp)) {
        ++report.nfkc_changed_chars;
      }
    }
    std::string normalized = nfkc(encode_all(cps));
    cps = decode_all(normalized);
  }

  if (!config.char_map.empty()) {
    std::unordered_map<char32_t, const std::u32string*> map;
    map.reserve(config.char_map.size());
    for (const auto& [from, to] : config.char_map) {
      map.emplace(from, &to);
    }
    std::u32string mapped;
    mapped.reserve(cps.size());
    for (char32_t cp : cps) {
      auto it = map.find(cp);
      if (it == map.end()) {
        mapped.push_back(cp);
        continue;
      }
      ++report.replacements[cp];
      mapped.append(*it->second);
    }
    cps = std::move(mapped);
  }

  if (config.collapse_whitespace) {
    // A run collapses to '\n' when it contains a line feed, else to ' '.
    // Leading and trailing runs are dropped.
    std::u32string collapsed;
    collapsed.reserve(cps.size());
    size_t i = 0;
    while (i < cps.size()) {
      if (!is_unicode_whitespace(cps[i])) {
        collapsed.push_back(cps[i]);
        ++i;
        continue;
      }
      bool has_newline = false;
      while (i < cps.size() && is_unicode_whitespace(cps[i])) {
        has_newline = has_newline || cps[i] == U'\n';
        ++i;
      }
      if (collapsed.empty() || i >= cps.size()) {
        continue;  // trim
      }
      collapsed.push_back(has_newline ? U'\n' : U' ');
    }
    cps = std::move(collapsed);
  }

  report.output_codepoints = cps.size();
  return {encode_all(cps), std::move(report)};
}

NormalizationReport normalize_corpus(const DocumentSource& src, const DocumentSink& sink,
                                     const NormalizationConfig& config, int workers) {
  config.validate();
  if (workers < 1) {
    throw Error("worker count must be at least 1");
  }
  constexpr size_t kBatch = 512;
  NormalizationReport total;
  std::vector<RawDocument> batch;
  batch.reserve(kBatch);
  bool more = true;
  while (more) {
    batch.clear();
    RawDocument doc;
    while (batch.size() < kBatch && (more = src(doc))) {
      batch.push_back(std::move(doc));
    }
    if (batch.empty()) {
      break;
    }
    std::vector<NormalizationReport> reports(batch.size());
    parallel_for(batch.size(), workers, [&](size_t i) {
      try {
        auto [text, report] = normalize_text(batch[i].text, config);
        batch[i].text = std::move(text);
        reports[i] = std::move(report);
      } catch (const Error& e) {
        throw Error("document " + batch[i].id + ": " + e.what());
      }
    });
    for (size_t i = 0; i < batch.size(); ++i) {
      total.merge(reports[i]);
      sink(batch[i]);
    }
  }
  return total;
}

char32_t parse_codepoint_literal(const std::string& text) {
  if (text.size() < 3 || text[0] != 'U' || text[1] != '+') {
    throw Error("codepoint literal must look like U+XXXX, got \"" + text + "\"");
  }
  uint32_t value = 0;
  for (size_t i = 2; i < text.size(); ++i) {
    char c = text[i];
    uint32_t digit;
    if (c >= '0' && c <= '9') {
      digit = static_cast<uint32_t>(c - '0');
    } else if (c >= 'A' && c <= 'F') {
      digit = static_cast<uint32_t>(c - 'A' + 10);
    } else if (c >= 'a' && c <= 'f') {
      digit = static_cast<uint32_t>(c - 'a' + 10);
    } else {
      throw Error("codepoint literal must look like U+XXXX, got \"" + text + "\"");
    }
    value = value * 16 + digit;
    if (value > 0x10FFFF) {
      throw Error("codepoint literal out of range: \"" + text + "\"");
    }
  }
  return static_cast<char32_t>(value);
}

std::string codepoint_literal(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<uint32_t>(cp));
  return buf;
}

}  // namespace tooka
