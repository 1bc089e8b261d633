// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tooka {

// A merge combines two existing token ids; result holds the concatenated
// bytes. Rank (position in the merge list) doubles as priority: lower rank
// is applied first during encoding.
struct MergeRule {
  uint32_t left = 0;
  uint32_t right = 0;
  uint32_t result = 0;

  bool operator==(const MergeRule&) const = default;
};

// Id layout is fixed: six specials, then the 256 single bytes, then merge
// results in rank order. Byte 0xAB has id kByteBase + 0xAB; merge rank r
// produces id kByteBase + 256 + r.
class Vocab {
 public:
  static constexpr uint32_t kPad = 0;
  static constexpr uint32_t kUnk = 1;
  static constexpr uint32_t kCls = 2;
  static constexpr uint32_t kSep = 3;
  static constexpr uint32_t kMask = 4;
  static constexpr uint32_t kDoc = 5;
  static constexpr uint32_t kByteBase = 6;
  static constexpr uint32_t kNumSpecials = 6;
  static constexpr uint32_t kFirstMergeId = kByteBase + 256;

  static const char* special_name(uint32_t id);

  // Specials plus the 256 byte tokens; no merges.
  static Vocab base();

  size_t size() const { return kNumSpecials + bytes_.size(); }
  bool is_special(uint32_t id) const { return id < kNumSpecials; }

  // Byte content of a non-special token; throws Error for specials or
  // out-of-range ids.
  const std::string& token_bytes(uint32_t id) const;

  const std::vector<MergeRule>& merges() const { return merges_; }

  // Appends a merge of two existing non-special ids and returns the new id.
  uint32_t add_merge(uint32_t left, uint32_t right);

  // FNV-1a over every non-special token (length as 8 little-endian bytes,
  // then the bytes) followed by every merge triple. Identifies the vocabulary
  // in shard headers.
  uint64_t content_hash() const;

  std::string to_json() const;

  // Validates structure exhaustively: version, special list, id layout,
  // merge consistency, stored hash.
  static Vocab from_json(const std::string& json_text);

 private:
  // bytes_[i] holds the content of id kByteBase + i.
  std::vector<std::string> bytes_;
  std::vector<MergeRule> merges_;
};

}  // namespace tooka
