// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "tooka/corpus.hpp"
#include "tooka/vocab.hpp"

namespace tooka {

struct BpeTrainConfig {
  uint32_t target_vocab_size = 48000;
  uint64_t min_pair_frequency = 2;

  void validate() const;
};

struct BpeTrainReport {
  // False when every remaining pair fell below min_pair_frequency before the
  // vocabulary filled up; the vocabulary is still usable.
  bool reached_target = false;
  uint64_t merges = 0;
  uint64_t documents = 0;
  uint64_t word_instances = 0;
  uint64_t unique_words = 0;

  std::string to_json() const;
};

// Learns merges over the pretokenized corpus. Each round merges the most
// frequent adjacent pair, counting every adjacent position weighted by word
// frequency; ties go to the pair whose left bytes (then right bytes) compare
// lexicographically smaller. Replacement inside a word is left-to-right and
// non-overlapping. Deterministic for a given corpus regardless of document
// order. Throws Error when the corpus contains no words.
std::pair<Vocab, BpeTrainReport> train_bpe(const DocumentSource& src,
                                           const BpeTrainConfig& config);

}  // namespace tooka
