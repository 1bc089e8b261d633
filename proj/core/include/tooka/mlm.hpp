// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tooka/packer.hpp"
#include "tooka/vocab.hpp"

namespace tooka {

// Label value at positions the model must not predict.
inline constexpr uint32_t kIgnoreLabel = 0xFFFFFFFFu;

struct MaskingPolicy {
  double mask_rate = 0.15;
  // Action probabilities for a selected word: replace with [MASK], replace
  // with random non-special tokens, keep original. Must sum to 1.
  double mask_p = 0.8;
  double random_p = 0.1;
  double keep_p = 0.1;
  // When false every token counts as its own word.
  bool whole_word = true;
  uint64_t seed = 0;

  void validate() const;
};

struct MlmInstance {
  std::vector<uint32_t> input_ids;
  // Original token id at corrupted positions, kIgnoreLabel elsewhere.
  std::vector<uint32_t> labels;
  // Masked word spans, half-open, ascending, non-overlapping.
  std::vector<std::pair<uint32_t, uint32_t>> spans;
};

struct MaskingReport {
  uint64_t sequences = 0;
  uint64_t zero_maskable_sequences = 0;
  uint64_t tokens = 0;
  uint64_t labeled_tokens = 0;
  uint64_t masked_tokens = 0;   // labeled positions showing [MASK] in the input
  uint64_t random_tokens = 0;   // labeled positions showing a different id
  uint64_t kept_tokens = 0;     // labeled positions showing the original id
  std::map<uint32_t, uint64_t> span_length_histogram;

  void merge(const MaskingReport& other);
  std::string to_json() const;
};

// One instance per shard sequence, in order. Selection: maskable words are
// the fully-contained extents holding no special id; a deterministic shuffle
// keyed by (seed, shard ordinal, sequence index) orders them; words are taken
// whole until the selected token count first reaches
// floor(mask_rate * maskable token count), and at least one word is taken
// whenever any exists. One action draw covers a whole word; random
// replacements are drawn per token from the non-special id range.
// Deterministic for any worker count.
std::vector<MlmInstance> build_instances(const PackedShard& shard, const MaskingPolicy& policy,
                                         const Vocab& vocab, int workers = 1);

// Statistics recomputed from finished instances: a labeled position counts as
// masked/random/kept by comparing input to label.
MaskingReport masking_report(const std::vector<MlmInstance>& instances);

// Instance container: magic "TKMI", u32 version=1, u32 seq_len, u64
// vocab_hash, u64 count, count×seq_len u32 input ids, then the labels plane
// of the same shape. Little-endian.
void write_instances(const std::vector<MlmInstance>& instances, uint32_t seq_len,
                     uint64_t vocab_hash, const std::string& path);
std::vector<MlmInstance> read_instances(const std::string& path, uint32_t* seq_len_out = nullptr,
                                        uint64_t* vocab_hash_out = nullptr);

}  // namespace tooka
