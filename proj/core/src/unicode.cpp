// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <mutex>
#include <unordered_map>

#include "tooka/common.hpp"

namespace tooka {
namespace {

const icu::Normalizer2& nfkc_instance() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode ec = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFKCInstance(ec);
    if (U_FAILURE(ec) || n == nullptr) {
      throw Error(std::string("ICU NFKC instance unavailable: ") + u_errorName(ec));
    }
    return n;
  }();
  return *instance;
}

}  // namespace

bool utf8_valid(std::string_view bytes) {
  const auto* s = reinterpret_cast<const uint8_t*>(bytes.data());
  int32_t i = 0;
  const auto len = static_cast<int32_t>(bytes.size());
  while (i < len) {
    UChar32 cp;
    U8_NEXT(s, i, len, cp);
    if (cp < 0) return false;
  }
  return true;
}

std::u32string utf8_decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  const auto* s = reinterpret_cast<const uint8_t*>(bytes.data());
  int32_t i = 0;
  const auto len = static_cast<int32_t>(bytes.size());
  while (i < len) {
    const int32_t at = i;
    UChar32 cp;
    U8_NEXT(s, i, len, cp);
    if (cp < 0) {
      throw Error("invalid UTF-8 byte sequence at offset " + std::to_string(at));
    }
    out.push_back(static_cast<char32_t>(cp));
  }
  return out;
}

char32_t utf8_next(std::string_view bytes, size_t& pos) {
  const auto* s = reinterpret_cast<const uint8_t*>(bytes.data());
  auto i = static_cast<int32_t>(pos);
  const auto len = static_cast<int32_t>(bytes.size());
  UChar32 cp;
  U8_NEXT(s, i, len, cp);
  if (cp < 0) {
    throw Error("invalid UTF-8 byte sequence at offset " + std::to_string(pos));
  }
  pos = static_cast<size_t>(i);
  return static_cast<char32_t>(cp);
}

void utf8_append(std::string& out, char32_t cp) {
  uint8_t buf[U8_MAX_LENGTH];
  int32_t i = 0;
  UBool err = false;
  U8_APPEND(buf, i, U8_MAX_LENGTH, static_cast<UChar32>(cp), err);
  if (err) throw Error("invalid codepoint " + std::to_string(static_cast<uint32_t>(cp)));
  out.append(reinterpret_cast<char*>(buf), static_cast<size_t>(i));
}

std::string utf8_encode(std::u32string_view cps) {
  std::string out;
  out.reserve(cps.size() * 2);
  for (char32_t cp : cps) utf8_append(out, cp);
  return out;
}

size_t utf8_codepoint_count(std::string_view bytes) {
  const auto* s = reinterpret_cast<const uint8_t*>(bytes.data());
  int32_t i = 0;
  const auto len = static_cast<int32_t>(bytes.size());
  size_t n = 0;
  while (i < len) {
    U8_FWD_1(s, i, len);
    ++n;
  }
  return n;
}

bool is_unicode_whitespace(char32_t cp) {
  return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0;
}

bool is_unicode_punct(char32_t cp) {
  return u_ispunct(static_cast<UChar32>(cp)) != 0;
}

std::string nfkc(std::string_view utf8) {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  icu::UnicodeString out = nfkc_instance().normalize(in, ec);
  if (U_FAILURE(ec)) {
    throw Error(std::string("NFKC normalization failed: ") + u_errorName(ec));
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

bool nfkc_changes_codepoint(char32_t cp) {
  // Per-codepoint singleton check, memoized. Composition across codepoints is
  // not attributed to any single input character.
  static std::mutex mu;
  static std::unordered_map<char32_t, bool> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(cp);
    if (it != cache.end()) return it->second;
  }
  UErrorCode ec = U_ZERO_ERROR;
  const icu::UnicodeString in(static_cast<UChar32>(cp));
  icu::UnicodeString out = nfkc_instance().normalize(in, ec);
  const bool changed = U_FAILURE(ec) ? false : (out != in);
  {
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(cp, changed);
  }
  return changed;
}

bool is_nfkc(std::string_view utf8) {
  UErrorCode ec = U_ZERO_ERROR;
  const icu::UnicodeString in = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  const UBool ok = nfkc_instance().isNormalized(in, ec);
  if (U_FAILURE(ec)) {
    throw Error(std::string("NFKC quick check failed: ") + u_errorName(ec));
  }
  return ok != 0;
}

}  // namespace tooka
