// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/bpe_codec.hpp"

#include <unordered_set>

#include "tooka/common.hpp"
#include "tooka/pretokenize.hpp"
#include "tooka/rng.hpp"

namespace tooka {

namespace {

constexpr uint64_t pack_pair(uint32_t left, uint32_t right) {
  return (static_cast<uint64_t>(left) << 32) | right;
}

// One decision counter per merge site. Ranks stay below 2^24 for any
// realistic vocabulary; offsets use the remaining bits.
constexpr uint64_t site_counter(uint64_t byte_offset, uint32_t rank) {
  return (byte_offset << 24) | rank;
}

}  // namespace

void EncodeOptions::validate() const {
  if (!(dropout_p >= 0.0 && dropout_p <= 1.0)) {
    throw Error("dropout probability must lie in [0, 1]");
  }
}

uint64_t document_seed(uint64_t seed, uint64_t doc_ordinal) {
  return hash_combine(seed, doc_ordinal);
}

BpeEncoder::BpeEncoder(const Vocab& vocab) : vocab_(&vocab) {
  const auto& merges = vocab.merges();
  pair_rank_.reserve(merges.size());
  rank_result_.reserve(merges.size());
  for (size_t r = 0; r < merges.size(); ++r) {
    pair_rank_.emplace(pack_pair(merges[r].left, merges[r].right), static_cast<uint32_t>(r));
    rank_result_.push_back(merges[r].result);
  }
}

void BpeEncoder::encode_word(std::string_view word, uint64_t word_ordinal,
                             const EncodeOptions& options, std::vector<uint32_t>& out) const {
  std::vector<uint32_t> ids;
  std::vector<uint64_t> offsets;
  ids.reserve(word.size());
  offsets.reserve(word.size());
  for (size_t i = 0; i < word.size(); ++i) {
    ids.push_back(Vocab::kByteBase + static_cast<unsigned char>(word[i]));
    offsets.push_back(i);
  }

  const bool dropping = options.dropout_p > 0.0;
  CounterRng rng(options.seed);
  std::unordered_set<uint64_t> skipped;

  while (ids.size() > 1) {
    // Best applicable site: lowest rank, then leftmost.
    size_t best_index = 0;
    uint32_t best_rank = 0;
    bool found = false;
    for (size_t i = 0; i + 1 < ids.size(); ++i) {
      auto it = pair_rank_.find(pack_pair(ids[i], ids[i + 1]));
      if (it == pair_rank_.end()) {
        continue;
      }
      if (dropping && skipped.count(site_counter(offsets[i], it->second))) {
        continue;
      }
      if (!found || it->second < best_rank) {
        found = true;
        best_rank = it->second;
        best_index = i;
      }
    }
    if (!found) {
      break;
    }
    if (dropping) {
      uint64_t counter = site_counter(offsets[best_index], best_rank);
      if (rng.uniform(word_ordinal, counter) < options.dropout_p) {
        skipped.insert(counter);
        continue;
      }
    }
    ids[best_index] = rank_result_[best_rank];
    ids.erase(ids.begin() + static_cast<ptrdiff_t>(best_index) + 1);
    offsets.erase(offsets.begin() + static_cast<ptrdiff_t>(best_index) + 1);
  }
  out.insert(out.end(), ids.begin(), ids.end());
}

Encoded BpeEncoder::encode(std::string_view text, const EncodeOptions& options,
                           EncodeCache* cache) const {
  options.validate();
  Encoded enc;
  if (options.add_specials) {
    enc.ids.push_back(Vocab::kCls);
  }
  std::vector<std::string> words = pretokenize(text);
  enc.word_starts.reserve(words.size());
  const bool cacheable = cache != nullptr && options.dropout_p == 0.0;
  for (size_t w = 0; w < words.size(); ++w) {
    enc.word_starts.push_back(static_cast<uint32_t>(enc.ids.size()));
    if (cacheable) {
      auto it = cache->words.find(words[w]);
      if (it != cache->words.end()) {
        enc.ids.insert(enc.ids.end(), it->second.begin(), it->second.end());
        continue;
      }
      std::vector<uint32_t> ids;
      encode_word(words[w], w, options, ids);
      enc.ids.insert(enc.ids.end(), ids.begin(), ids.end());
      cache->words.emplace(std::move(words[w]), std::move(ids));
    } else {
      encode_word(words[w], w, options, enc.ids);
    }
  }
  if (options.add_specials) {
    enc.ids.push_back(Vocab::kSep);
  }
  return enc;
}

std::string BpeEncoder::decode(const std::vector<uint32_t>& ids) const {
  std::string out;
  for (uint32_t id : ids) {
    if (id >= vocab_->size()) {
      throw Error("token id " + std::to_string(id) + " is outside the vocabulary");
    }
    if (!vocab_->is_special(id)) {
      out += vocab_->token_bytes(id);
    }
  }
  return out;
}

}  // namespace tooka
