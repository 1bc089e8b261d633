// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tooka/vocab.hpp"

namespace tooka {

struct EncodeOptions {
  // Probability of skipping an applicable merge site. 0 is canonical greedy
  // encoding; 1 leaves every word as single bytes. A skipped site stays
  // skipped for the rest of the word.
  double dropout_p = 0.0;
  uint64_t seed = 0;
  // Wrap the document as [CLS] ... [SEP] and shift word starts accordingly.
  bool add_specials = false;

  void validate() const;
};

struct Encoded {
  std::vector<uint32_t> ids;
  // Index into ids where each pretokenized word begins; specials are not
  // words.
  std::vector<uint32_t> word_starts;
};

// Memoizes dropout-free word encodings. Not thread-safe; give each worker its
// own cache.
class EncodeCache {
 public:
  std::unordered_map<std::string, std::vector<uint32_t>> words;
};

// Mixes the corpus-level seed with a document's position so every document
// draws from its own stream and results do not depend on worker scheduling.
uint64_t document_seed(uint64_t seed, uint64_t doc_ordinal);

class BpeEncoder {
 public:
  explicit BpeEncoder(const Vocab& vocab);

  // Deterministic in (text, options). Skip decisions are drawn from a
  // counter keyed by word ordinal, byte offset, and merge rank, so they are
  // permanent within a word and independent of evaluation order.
  Encoded encode(std::string_view text, const EncodeOptions& options,
                 EncodeCache* cache = nullptr) const;

  // Concatenates token bytes, skipping special ids. Inverse of encode for
  // any dropout probability.
  std::string decode(const std::vector<uint32_t>& ids) const;

  const Vocab& vocab() const { return *vocab_; }

 private:
  void encode_word(std::string_view word, uint64_t word_ordinal, const EncodeOptions& options,
                   std::vector<uint32_t>& out) const;

  const Vocab* vocab_;
  std::unordered_map<uint64_t, uint32_t> pair_rank_;
  std::vector<uint32_t> rank_result_;
};

}  // namespace tooka
