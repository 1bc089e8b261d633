// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tooka/vocab.hpp"

namespace tooka {

struct PackerConfig {
  uint32_t seq_len = 512;
  uint32_t doc_separator = Vocab::kDoc;
  uint64_t shard_capacity = 65536;

  // seq_len in [2, 65534]: boundary offsets and their count are stored as
  // u16, and a full window lists at most seq_len starts plus one terminator.
  void validate() const;
};

struct EncodedDocument {
  std::string id;
  std::vector<uint32_t> ids;
  std::vector<uint32_t> word_starts;
};

struct PackedShard {
  uint32_t seq_len = 0;
  uint64_t vocab_hash = 0;
  // Position of the shard in its pack run; recovered from the file name on
  // read. Keys the masking RNG.
  uint64_t ordinal = 0;
  // count() * seq_len ids, concatenated.
  std::vector<uint32_t> ids;
  // Per sequence: offsets where a word or separator begins, strictly
  // increasing; a trailing seq_len entry closes the last segment when it
  // ends inside the window. A segment cut by the window edge contributes its
  // start here but no closing offset, so it yields no maskable extent in
  // either window.
  std::vector<std::vector<uint16_t>> boundaries;

  size_t count() const { return boundaries.size(); }
  const uint32_t* sequence(size_t index) const { return ids.data() + index * seq_len; }
};

// Half-open [start, end) token ranges derivable from one sequence's boundary
// list; each is exactly one fully-contained word or separator.
std::vector<std::pair<uint16_t, uint16_t>> sequence_extents(
    const std::vector<uint16_t>& boundaries);

struct PackReport {
  uint64_t documents = 0;
  uint64_t empty_documents = 0;
  uint64_t stream_tokens = 0;  // document tokens plus separators
  uint64_t sequences = 0;
  uint64_t shards = 0;
  // Dropped tail, shorter than seq_len. Kept in memory so stream equality
  // can be checked; serialized reports carry only its length.
  std::vector<uint32_t> remainder;

  std::string to_json() const;
};

using ShardSink = std::function<void(PackedShard&&)>;

// Folds encoded documents into fixed-length sequences: documents joined by
// one separator (empty documents skipped), cut every seq_len tokens, final
// partial window dropped into the report. Strictly ordered; parallelism
// belongs upstream in encoding.
class Packer {
 public:
  Packer(const PackerConfig& config, const Vocab& vocab, ShardSink sink);

  // Throws Error naming the document on an out-of-range id or malformed
  // word_starts.
  void add(const EncodedDocument& doc);

  // Flushes the last partial shard and returns the report. The packer is
  // spent afterwards.
  PackReport finish();

 private:
  void place_segment(const uint32_t* tokens, size_t len);
  void cut_window(bool segment_complete);
  void flush_shard();

  PackerConfig config_;
  uint64_t vocab_hash_ = 0;
  size_t vocab_size_ = 0;
  ShardSink sink_;
  PackReport report_;
  std::vector<uint32_t> window_;
  std::vector<uint16_t> starts_;
  PackedShard pending_;
  uint64_t next_ordinal_ = 0;
  bool finished_ = false;
};

// shard-00000.tkpk, shard-00001.tkpk, ... under dir (created if missing).
ShardSink make_shard_dir_sink(const std::string& dir);
std::string shard_file_name(uint64_t ordinal);

void write_shard(const PackedShard& shard, const std::string& path);

// Verifies magic, version, structural invariants, and (when expected_hash is
// given) the vocabulary hash; truncation and mismatches are reported
// distinctly. The ordinal is parsed from the file name when it matches the
// shard naming pattern, else 0.
PackedShard read_shard(const std::string& path, const uint64_t* expected_hash = nullptr);

}  // namespace tooka
