// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only to cross-check the library.
// Deliberately naive: recount everything, allocate freely, favor obviousness
// over speed. None of them share state or helpers with the code under test.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct ByteMerge {
  std::string left;
  std::string right;

  bool operator==(const ByteMerge&) const = default;
};

struct BpeResult {
  std::vector<ByteMerge> merges;
  // Token byte strings beyond the 256 single bytes, in creation order
  // (merges[i] produced tokens[i]).
  std::vector<std::string> tokens;
};

// Brute-force byte-level BPE: each round recounts every adjacent pair over
// every word from scratch, picks the highest count with ties to the
// lexicographically smaller (left, right) byte pair, and rewrites each word
// left to right without overlap. Words are (bytes, frequency) pairs; the
// caller pretokenizes.
BpeResult train_bpe_naive(const std::vector<std::pair<std::string, uint64_t>>& words,
                          size_t max_merges, uint64_t min_pair_frequency);

// ASCII-only pretokenizer mirroring the production rules on the ASCII subset:
// whitespace runs attach to the following word as a prefix, each punctuation
// character is its own word, a trailing run of whitespace is its own word.
std::vector<std::string> pretokenize_ascii(const std::string& text);

// The packed stream a corpus must reduce to: non-empty documents joined by
// one separator id. Built by plain concatenation, no windowing logic.
std::vector<uint32_t> join_with_separator(const std::vector<std::vector<uint32_t>>& docs,
                                          uint32_t separator);

// Number of positions where the two rows differ; rows must be equal length.
size_t hamming_distance(const std::vector<std::string>& a, const std::vector<std::string>& b);

}  // namespace oracle
