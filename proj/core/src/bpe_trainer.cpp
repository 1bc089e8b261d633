// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/bpe_trainer.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"
#include "tooka/pretokenize.hpp"

namespace tooka {

namespace {

constexpr uint64_t pack_pair(uint32_t left, uint32_t right) {
  return (static_cast<uint64_t>(left) << 32) | right;
}
constexpr uint32_t pair_left(uint64_t p) { return static_cast<uint32_t>(p >> 32); }
constexpr uint32_t pair_right(uint64_t p) { return static_cast<uint32_t>(p); }

struct WordEntry {
  std::vector<uint32_t> ids;
  uint64_t freq = 0;
};

struct HeapEntry {
  uint64_t count = 0;
  uint64_t pair = 0;
};

}  // namespace

void BpeTrainConfig::validate() const {
  if (target_vocab_size < Vocab::kFirstMergeId) {
    throw Error("target_vocab_size must be at least " + std::to_string(Vocab::kFirstMergeId) +
                " (specials plus byte tokens)");
  }
  if (min_pair_frequency < 1) {
    throw Error("min_pair_frequency must be at least 1");
  }
}

std::string BpeTrainReport::to_json() const {
  nlohmann::json j{{"reached_target", reached_target},
                   {"merges", merges},
                   {"documents", documents},
                   {"word_instances", word_instances},
                   {"unique_words", unique_words}};
  return j.dump(2);
}

std::pair<Vocab, BpeTrainReport> train_bpe(const DocumentSource& src,
                                           const BpeTrainConfig& config) {
  config.validate();
  BpeTrainReport report;

  // Sorted keys fix the word order, making training independent of document
  // order.
  std::map<std::string, uint64_t> word_freq;
  RawDocument doc;
  while (src(doc)) {
    ++report.documents;
    for (std::string& w : pretokenize(doc.text)) {
      ++word_freq[w];
      ++report.word_instances;
    }
  }
  report.unique_words = word_freq.size();
  if (word_freq.empty()) {
    throw Error("training corpus contains no words");
  }

  Vocab vocab = Vocab::base();

  std::vector<WordEntry> words;
  words.reserve(word_freq.size());
  for (auto& [text, freq] : word_freq) {
    WordEntry w;
    w.freq = freq;
    w.ids.reserve(text.size());
    for (unsigned char c : text) {
      w.ids.push_back(Vocab::kByteBase + c);
    }
    words.push_back(std::move(w));
  }
  word_freq.clear();

  std::unordered_map<uint64_t, uint64_t> counts;
  std::unordered_map<uint64_t, std::unordered_set<uint32_t>> where;

  // Top of the heap: highest count, then lexicographically smallest left
  // bytes, then right bytes, then smallest ids (ids only matter when two
  // distinct tokens carry identical bytes).
  auto ranks_below = [&vocab](const HeapEntry& a, const HeapEntry& b) {
    if (a.count != b.count) return a.count < b.count;
    const std::string& al = vocab.token_bytes(pair_left(a.pair));
    const std::string& bl = vocab.token_bytes(pair_left(b.pair));
    if (al != bl) return bl < al;
    const std::string& ar = vocab.token_bytes(pair_right(a.pair));
    const std::string& br = vocab.token_bytes(pair_right(b.pair));
    if (ar != br) return br < ar;
    return b.pair < a.pair;
  };
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, decltype(ranks_below)> heap(ranks_below);

  for (uint32_t wi = 0; wi < words.size(); ++wi) {
    const WordEntry& w = words[wi];
    for (size_t i = 0; i + 1 < w.ids.size(); ++i) {
      uint64_t p = pack_pair(w.ids[i], w.ids[i + 1]);
      counts[p] += w.freq;
      where[p].insert(wi);
    }
  }
  for (const auto& [p, c] : counts) {
    if (c >= config.min_pair_frequency) {
      heap.push({c, p});
    }
  }

  while (vocab.size() < config.target_vocab_size && !heap.empty()) {
    HeapEntry top = heap.top();
    heap.pop();
    auto it = counts.find(top.pair);
    if (it == counts.end() || it->second < config.min_pair_frequency) {
      continue;  // pair merged away or now too rare
    }
    if (it->second != top.count) {
      heap.push({it->second, top.pair});  // stale count; requeue at the current one
      continue;
    }

    const uint32_t left = pair_left(top.pair);
    const uint32_t right = pair_right(top.pair);
    const uint32_t merged = vocab.add_merge(left, right);
    ++report.merges;

    std::vector<uint32_t> touched(where[top.pair].begin(), where[top.pair].end());
    std::sort(touched.begin(), touched.end());
    for (uint32_t wi : touched) {
      WordEntry& w = words[wi];
      std::vector<uint32_t> rewritten;
      rewritten.reserve(w.ids.size());
      bool found = false;
      for (size_t i = 0; i < w.ids.size();) {
        if (i + 1 < w.ids.size() && w.ids[i] == left && w.ids[i + 1] == right) {
          rewritten.push_back(merged);
          i += 2;
          found = true;
        } else {
          rewritten.push_back(w.ids[i]);
          ++i;
        }
      }
      if (!found) {
        continue;  // stale membership from an earlier rewrite
      }
      for (size_t i = 0; i + 1 < w.ids.size(); ++i) {
        uint64_t p = pack_pair(w.ids[i], w.ids[i + 1]);
        auto cit = counts.find(p);
        cit->second -= w.freq;
        if (cit->second == 0) {
          counts.erase(cit);
        }
      }
      w.ids = std::move(rewritten);
      for (size_t i = 0; i + 1 < w.ids.size(); ++i) {
        uint64_t p = pack_pair(w.ids[i], w.ids[i + 1]);
        uint64_t c = (counts[p] += w.freq);
        where[p].insert(wi);
        if (c >= config.min_pair_frequency) {
          heap.push({c, p});
        }
      }
    }
    counts.erase(top.pair);
    where.erase(top.pair);
  }

  report.reached_target = vocab.size() >= config.target_vocab_size;
  return {std::move(vocab), std::move(report)};
}

}  // namespace tooka
