// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/vocab.hpp"

#include <array>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"
#include "tooka/util.hpp"

namespace tooka {

namespace {

using json = nlohmann::json;

constexpr std::array<const char*, Vocab::kNumSpecials> kSpecialNames = {
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "[DOC]"};

std::string hash_hex(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

const char* Vocab::special_name(uint32_t id) {
  if (id >= kNumSpecials) {
    throw Error("token id " + std::to_string(id) + " is not a special");
  }
  return kSpecialNames[id];
}

Vocab Vocab::base() {
  Vocab v;
  v.bytes_.reserve(256);
  for (int b = 0; b < 256; ++b) {
    v.bytes_.emplace_back(1, static_cast<char>(b));
  }
  return v;
}

const std::string& Vocab::token_bytes(uint32_t id) const {
  if (id < kByteBase || id >= size()) {
    throw Error("token id " + std::to_string(id) + " has no byte content");
  }
  return bytes_[id - kByteBase];
}

uint32_t Vocab::add_merge(uint32_t left, uint32_t right) {
  const std::string& lb = token_bytes(left);
  const std::string& rb = token_bytes(right);
  uint32_t result = static_cast<uint32_t>(size());
  bytes_.push_back(lb + rb);
  merges_.push_back(MergeRule{left, right, result});
  return result;
}

uint64_t Vocab::content_hash() const {
  uint64_t h = kFnvOffset;
  for (const std::string& bytes : bytes_) {
    h = fnv1a64_u64(bytes.size(), h);
    h = fnv1a64(bytes, h);
  }
  for (const MergeRule& m : merges_) {
    h = fnv1a64_u64(m.left, h);
    h = fnv1a64_u64(m.right, h);
    h = fnv1a64_u64(m.result, h);
  }
  return h;
}

std::string Vocab::to_json() const {
  json tokens = json::array();
  for (const std::string& bytes : bytes_) {
    tokens.push_back(base64_encode(bytes));
  }
  json merges = json::array();
  for (const MergeRule& m : merges_) {
    merges.push_back({m.left, m.right, m.result});
  }
  json specials = json::array();
  for (const char* name : kSpecialNames) {
    specials.push_back(name);
  }
  json j{{"version", 1},
         {"special_tokens", std::move(specials)},
         {"tokens", std::move(tokens)},
         {"merges", std::move(merges)},
         {"content_hash", hash_hex(content_hash())}};
  return j.dump();
}

Vocab Vocab::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("vocabulary file is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("version").get<int64_t>() != 1) {
      throw Error("unsupported vocabulary version " + j.at("version").dump());
    }
    const auto& specials = j.at("special_tokens");
    if (specials.size() != kNumSpecials) {
      throw Error("vocabulary must list exactly " + std::to_string(kNumSpecials) +
                  " special tokens");
    }
    for (uint32_t i = 0; i < kNumSpecials; ++i) {
      if (specials.at(i).get<std::string>() != kSpecialNames[i]) {
        throw Error("special token " + std::to_string(i) + " must be " +
                    std::string(kSpecialNames[i]) + ", got " + specials.at(i).dump());
      }
    }

    const auto& tokens = j.at("tokens");
    const auto& merges = j.at("merges");
    if (tokens.size() < 256) {
      throw Error("vocabulary must contain the 256 byte tokens");
    }
    if (tokens.size() != 256 + merges.size()) {
      throw Error("vocabulary lists " + std::to_string(tokens.size()) + " tokens but " +
                  std::to_string(merges.size()) + " merges; expected tokens = 256 + merges");
    }

    Vocab v;
    v.bytes_.reserve(tokens.size());
    for (const auto& t : tokens) {
      v.bytes_.push_back(base64_decode(t.get<std::string>()));
    }
    for (int b = 0; b < 256; ++b) {
      if (v.bytes_[b].size() != 1 || static_cast<unsigned char>(v.bytes_[b][0]) != b) {
        throw Error("token id " + std::to_string(kByteBase + b) + " must be byte " +
                    std::to_string(b));
      }
    }
    v.merges_.reserve(merges.size());
    for (size_t r = 0; r < merges.size(); ++r) {
      const auto& triple = merges.at(r);
      if (!triple.is_array() || triple.size() != 3) {
        throw Error("merge " + std::to_string(r) + " must be a [left, right, result] triple");
      }
      MergeRule m{triple.at(0).get<uint32_t>(), triple.at(1).get<uint32_t>(),
                  triple.at(2).get<uint32_t>()};
      uint32_t expected = kFirstMergeId + static_cast<uint32_t>(r);
      if (m.result != expected) {
        throw Error("merge " + std::to_string(r) + " must produce id " +
                    std::to_string(expected) + ", got " + std::to_string(m.result));
      }
      if (m.left < kByteBase || m.left >= expected || m.right < kByteBase ||
          m.right >= expected) {
        throw Error("merge " + std::to_string(r) + " references an id not yet defined");
      }
      const std::string joined = v.bytes_[m.left - kByteBase] + v.bytes_[m.right - kByteBase];
      if (joined != v.bytes_[expected - kByteBase]) {
        throw Error("merge " + std::to_string(r) +
                    " bytes do not equal the concatenation of its parts");
      }
      v.merges_.push_back(m);
    }

    const std::string stored = j.at("content_hash").get<std::string>();
    const std::string actual = hash_hex(v.content_hash());
    if (stored != actual) {
      throw Error("vocabulary content hash mismatch: file says " + stored + ", computed " +
                  actual);
    }
    return v;
  } catch (const json::exception& e) {
    throw Error(std::string("malformed vocabulary JSON: ") + e.what());
  }
}

}  // namespace tooka
