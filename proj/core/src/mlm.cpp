// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/mlm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"
#include "tooka/parallel.hpp"
#include "tooka/rng.hpp"

namespace tooka {

namespace {

// Stream tags separating the per-sequence decision families.
constexpr uint64_t kShuffleStream = 1;
constexpr uint64_t kActionStream = 2;
constexpr uint64_t kRandomStream = 3;

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}
void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
}

MlmInstance build_one(const PackedShard& shard, size_t seq_index, const MaskingPolicy& policy,
                      uint32_t vocab_size) {
  const uint32_t* seq = shard.sequence(seq_index);
  const uint32_t seq_len = shard.seq_len;

  MlmInstance inst;
  inst.input_ids.assign(seq, seq + seq_len);
  inst.labels.assign(seq_len, kIgnoreLabel);

  std::vector<std::pair<uint16_t, uint16_t>> units;
  if (policy.whole_word) {
    for (auto [a, b] : sequence_extents(shard.boundaries[seq_index])) {
      bool clean = true;
      for (uint16_t p = a; p < b; ++p) {
        if (seq[p] < Vocab::kNumSpecials) {
          clean = false;
          break;
        }
      }
      if (clean) {
        units.emplace_back(a, b);
      }
    }
  } else {
    for (uint16_t p = 0; p < seq_len; ++p) {
      if (seq[p] >= Vocab::kNumSpecials) {
        units.emplace_back(p, static_cast<uint16_t>(p + 1));
      }
    }
  }
  if (units.empty()) {
    return inst;
  }

  uint64_t usable = 0;
  for (auto [a, b] : units) {
    usable += b - a;
  }
  const uint64_t budget = static_cast<uint64_t>(std::floor(policy.mask_rate * static_cast<double>(usable)));

  CounterRng rng(hash_combine(hash_combine(policy.seed, shard.ordinal), seq_index));

  std::vector<uint32_t> order(units.size());
  for (uint32_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  for (size_t i = order.size() - 1; i > 0; --i) {
    size_t j = static_cast<size_t>(rng.bounded(kShuffleStream, i, i + 1));
    std::swap(order[i], order[j]);
  }

  std::vector<uint32_t> selected;
  uint64_t taken = 0;
  for (uint32_t u : order) {
    if (taken >= budget && !selected.empty()) {
      break;
    }
    selected.push_back(u);
    taken += units[u].second - units[u].first;
  }
  std::sort(selected.begin(), selected.end());

  for (uint32_t u : selected) {
    auto [a, b] = units[u];
    for (uint16_t p = a; p < b; ++p) {
      inst.labels[p] = seq[p];
    }
    // The action draw is counted by unit index, not selection order, so it
    // does not depend on what else was selected.
    double action = rng.uniform(kActionStream, u);
    if (action < policy.mask_p) {
      for (uint16_t p = a; p < b; ++p) {
        inst.input_ids[p] = Vocab::kMask;
      }
    } else if (action < policy.mask_p + policy.random_p) {
      for (uint16_t p = a; p < b; ++p) {
        inst.input_ids[p] = Vocab::kNumSpecials +
                            static_cast<uint32_t>(rng.bounded(kRandomStream, p,
                                                              vocab_size - Vocab::kNumSpecials));
      }
    }
    inst.spans.emplace_back(a, b);
  }
  return inst;
}

}  // namespace

void MaskingPolicy::validate() const {
  if (!(mask_rate > 0.0 && mask_rate <= 1.0)) {
    throw Error("mask_rate must lie in (0, 1]");
  }
  if (mask_p < 0.0 || random_p < 0.0 || keep_p < 0.0 ||
      std::abs(mask_p + random_p + keep_p - 1.0) > 1e-9) {
    throw Error("action probabilities must be non-negative and sum to 1");
  }
}

void MaskingReport::merge(const MaskingReport& other) {
  sequences += other.sequences;
  zero_maskable_sequences += other.zero_maskable_sequences;
  tokens += other.tokens;
  labeled_tokens += other.labeled_tokens;
  masked_tokens += other.masked_tokens;
  random_tokens += other.random_tokens;
  kept_tokens += other.kept_tokens;
  for (const auto& [len, n] : other.span_length_histogram) {
    span_length_histogram[len] += n;
  }
}

std::string MaskingReport::to_json() const {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [len, n] : span_length_histogram) {
    hist[std::to_string(len)] = n;
  }
  double label_fraction = tokens == 0 ? 0.0 : static_cast<double>(labeled_tokens) / static_cast<double>(tokens);
  nlohmann::json j{{"sequences", sequences},
                   {"zero_maskable_sequences", zero_maskable_sequences},
                   {"tokens", tokens},
                   {"labeled_tokens", labeled_tokens},
                   {"label_fraction", label_fraction},
                   {"masked_tokens", masked_tokens},
                   {"random_tokens", random_tokens},
                   {"kept_tokens", kept_tokens},
                   {"span_length_histogram", std::move(hist)}};
  return j.dump(2);
}

std::vector<MlmInstance> build_instances(const PackedShard& shard, const MaskingPolicy& policy,
                                         const Vocab& vocab, int workers) {
  policy.validate();
  if (shard.ids.size() != shard.count() * shard.seq_len) {
    throw Error("shard payload length does not match its sequence count");
  }
  const uint32_t vocab_size = static_cast<uint32_t>(vocab.size());
  if (vocab_size <= Vocab::kNumSpecials) {
    throw Error("vocabulary has no maskable tokens");
  }
  std::vector<MlmInstance> instances(shard.count());
  parallel_for(shard.count(), workers, [&](size_t s) {
    instances[s] = build_one(shard, s, policy, vocab_size);
  });
  return instances;
}

MaskingReport masking_report(const std::vector<MlmInstance>& instances) {
  MaskingReport r;
  for (const MlmInstance& inst : instances) {
    ++r.sequences;
    r.tokens += inst.input_ids.size();
    if (inst.spans.empty()) {
      ++r.zero_maskable_sequences;
    }
    for (auto [a, b] : inst.spans) {
      ++r.span_length_histogram[b - a];
    }
    for (size_t p = 0; p < inst.labels.size(); ++p) {
      if (inst.labels[p] == kIgnoreLabel) {
        continue;
      }
      ++r.labeled_tokens;
      if (inst.input_ids[p] == Vocab::kMask) {
        ++r.masked_tokens;
      } else if (inst.input_ids[p] == inst.labels[p]) {
        ++r.kept_tokens;
      } else {
        ++r.random_tokens;
      }
    }
  }
  return r;
}

void write_instances(const std::vector<MlmInstance>& instances, uint32_t seq_len,
                     uint64_t vocab_hash, const std::string& path) {
  std::string buf;
  buf.reserve(28 + instances.size() * seq_len * 8);
  buf.append("TKMI", 4);
  put_u32(buf, 1);
  put_u32(buf, seq_len);
  put_u64(buf, vocab_hash);
  put_u64(buf, instances.size());
  for (const MlmInstance& inst : instances) {
    if (inst.input_ids.size() != seq_len || inst.labels.size() != seq_len) {
      throw Error("instance length does not match seq_len");
    }
    for (uint32_t id : inst.input_ids) {
      put_u32(buf, id);
    }
  }
  for (const MlmInstance& inst : instances) {
    for (uint32_t label : inst.labels) {
      put_u32(buf, label);
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size())) || !out.flush()) {
    throw Error("failed to write instances " + path);
  }
}

std::vector<MlmInstance> read_instances(const std::string& path, uint32_t* seq_len_out,
                                        uint64_t* vocab_hash_out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open instance file " + path);
  }
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error("failed to read instance file " + path);
  }
  size_t pos = 0;
  auto need = [&](size_t n) {
    if (data.size() - pos < n) {
      throw Error(path + ": truncated at byte " + std::to_string(pos));
    }
  };
  auto u32 = [&]() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
    return v;
  };
  auto u64 = [&]() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(data[pos++])) << (8 * i);
    return v;
  };
  need(4);
  if (data.compare(0, 4, "TKMI") != 0) {
    throw Error(path + ": bad magic, not an instance file");
  }
  pos = 4;
  uint32_t version = u32();
  if (version != 1) {
    throw Error(path + ": unsupported instance format version " + std::to_string(version));
  }
  uint32_t seq_len = u32();
  if (seq_len == 0) {
    throw Error(path + ": seq_len must be positive");
  }
  uint64_t vocab_hash = u64();
  uint64_t count = u64();
  if (count > data.size() / (static_cast<uint64_t>(seq_len) * 8)) {
    throw Error(path + ": truncated at byte " + std::to_string(pos));
  }
  // Spans are not serialized; instances read back carry only ids and labels.
  std::vector<MlmInstance> instances(count);
  for (auto& inst : instances) {
    inst.input_ids.resize(seq_len);
    for (uint32_t& id : inst.input_ids) {
      id = u32();
    }
  }
  for (auto& inst : instances) {
    inst.labels.resize(seq_len);
    for (uint32_t& label : inst.labels) {
      label = u32();
    }
  }
  if (pos != data.size()) {
    throw Error(path + ": " + std::to_string(data.size() - pos) + " unexpected trailing bytes");
  }
  if (seq_len_out != nullptr) {
    *seq_len_out = seq_len;
  }
  if (vocab_hash_out != nullptr) {
    *vocab_hash_out = vocab_hash;
  }
  return instances;
}

}  // namespace tooka
