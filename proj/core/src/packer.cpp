// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/packer.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"

namespace tooka {

namespace {

constexpr char kMagic[4] = {'T', 'K', 'P', 'K'};
constexpr uint32_t kVersion = 1;

void put_u16(std::string& out, uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}
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

class ByteReader {
 public:
  ByteReader(const std::string& data, std::string path)
      : data_(data), path_(std::move(path)) {}

  uint16_t u16() { return static_cast<uint16_t>(byte() | (byte() << 8)); }
  uint32_t u32() {
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(byte()) << (8 * i);
    return v;
  }
  uint64_t u64() {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(byte()) << (8 * i);
    return v;
  }
  void raw(char* dst, size_t n) {
    need(n);
    data_.copy(dst, n, pos_);
    pos_ += n;
  }
  bool exhausted() const { return pos_ == data_.size(); }
  void fail_trailing() const {
    if (!exhausted()) {
      throw Error(path_ + ": " + std::to_string(data_.size() - pos_) +
                  " unexpected trailing bytes");
    }
  }

 private:
  uint32_t byte() {
    need(1);
    return static_cast<unsigned char>(data_[pos_++]);
  }
  void need(size_t n) const {
    if (data_.size() - pos_ < n) {
      throw Error(path_ + ": truncated at byte " + std::to_string(pos_));
    }
  }
  const std::string& data_;
  std::string path_;
  size_t pos_ = 0;
};

}  // namespace

void PackerConfig::validate() const {
  if (seq_len < 2 || seq_len > 65534) {
    throw Error("seq_len must lie in [2, 65534]");
  }
  if (shard_capacity < 1) {
    throw Error("shard_capacity must be at least 1");
  }
}

std::vector<std::pair<uint16_t, uint16_t>> sequence_extents(
    const std::vector<uint16_t>& boundaries) {
  std::vector<std::pair<uint16_t, uint16_t>> extents;
  if (boundaries.size() < 2) {
    return extents;
  }
  extents.reserve(boundaries.size() - 1);
  for (size_t i = 0; i + 1 < boundaries.size(); ++i) {
    extents.emplace_back(boundaries[i], boundaries[i + 1]);
  }
  return extents;
}

std::string PackReport::to_json() const {
  nlohmann::json j{{"documents", documents},
                   {"empty_documents", empty_documents},
                   {"stream_tokens", stream_tokens},
                   {"sequences", sequences},
                   {"shards", shards},
                   {"remainder_tokens", remainder.size()}};
  return j.dump(2);
}

Packer::Packer(const PackerConfig& config, const Vocab& vocab, ShardSink sink)
    : config_(config),
      vocab_hash_(vocab.content_hash()),
      vocab_size_(vocab.size()),
      sink_(std::move(sink)) {
  config_.validate();
  if (config_.doc_separator >= vocab_size_) {
    throw Error("doc_separator id is outside the vocabulary");
  }
  window_.reserve(config_.seq_len);
  pending_.seq_len = config_.seq_len;
  pending_.vocab_hash = vocab_hash_;
  pending_.ordinal = 0;
}

void Packer::add(const EncodedDocument& doc) {
  if (finished_) {
    throw Error("packer already finished");
  }
  ++report_.documents;
  if (doc.ids.empty()) {
    ++report_.empty_documents;
    return;
  }
  for (uint32_t id : doc.ids) {
    if (id >= vocab_size_) {
      throw Error("document " + doc.id + ": token id " + std::to_string(id) +
                  " is outside the vocabulary");
    }
  }
  if (doc.word_starts.empty() || doc.word_starts[0] != 0) {
    throw Error("document " + doc.id + ": word_starts must begin at 0");
  }
  for (size_t i = 0; i < doc.word_starts.size(); ++i) {
    if (doc.word_starts[i] >= doc.ids.size() ||
        (i > 0 && doc.word_starts[i] <= doc.word_starts[i - 1])) {
      throw Error("document " + doc.id + ": word_starts must increase strictly and stay in range");
    }
  }

  const bool first_content = report_.stream_tokens == 0;
  if (!first_content) {
    place_segment(&config_.doc_separator, 1);
    ++report_.stream_tokens;
  }
  for (size_t w = 0; w < doc.word_starts.size(); ++w) {
    size_t begin = doc.word_starts[w];
    size_t end = (w + 1 < doc.word_starts.size()) ? doc.word_starts[w + 1] : doc.ids.size();
    place_segment(doc.ids.data() + begin, end - begin);
  }
  report_.stream_tokens += doc.ids.size();
}

void Packer::place_segment(const uint32_t* tokens, size_t len) {
  size_t consumed = 0;
  bool start_recorded = false;
  while (consumed < len) {
    if (!start_recorded) {
      starts_.push_back(static_cast<uint16_t>(window_.size()));
      start_recorded = true;
    }
    size_t room = config_.seq_len - window_.size();
    size_t take = std::min(room, len - consumed);
    window_.insert(window_.end(), tokens + consumed, tokens + consumed + take);
    consumed += take;
    if (window_.size() == config_.seq_len) {
      cut_window(/*segment_complete=*/consumed == len);
    }
  }
}

void Packer::cut_window(bool segment_complete) {
  std::vector<uint16_t> boundaries = std::move(starts_);
  starts_.clear();
  if (segment_complete) {
    boundaries.push_back(static_cast<uint16_t>(config_.seq_len));
  }
  pending_.ids.insert(pending_.ids.end(), window_.begin(), window_.end());
  pending_.boundaries.push_back(std::move(boundaries));
  window_.clear();
  ++report_.sequences;
  if (pending_.count() == config_.shard_capacity) {
    flush_shard();
  }
}

void Packer::flush_shard() {
  if (pending_.count() == 0) {
    return;
  }
  pending_.ordinal = next_ordinal_++;
  ++report_.shards;
  PackedShard out = std::move(pending_);
  pending_ = PackedShard{};
  pending_.seq_len = config_.seq_len;
  pending_.vocab_hash = vocab_hash_;
  sink_(std::move(out));
}

PackReport Packer::finish() {
  if (finished_) {
    throw Error("packer already finished");
  }
  finished_ = true;
  flush_shard();
  report_.remainder = std::move(window_);
  window_.clear();
  starts_.clear();
  return std::move(report_);
}

std::string shard_file_name(uint64_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "shard-%05llu.tkpk", static_cast<unsigned long long>(ordinal));
  return buf;
}

ShardSink make_shard_dir_sink(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return [dir](PackedShard&& shard) {
    std::filesystem::path path = std::filesystem::path(dir) / shard_file_name(shard.ordinal);
    write_shard(shard, path.string());
  };
}

void write_shard(const PackedShard& shard, const std::string& path) {
  std::string buf;
  buf.reserve(16 + shard.ids.size() * 4 + shard.count() * 8);
  buf.append(kMagic, 4);
  put_u32(buf, kVersion);
  put_u32(buf, shard.seq_len);
  put_u64(buf, shard.vocab_hash);
  put_u64(buf, shard.count());
  for (uint32_t id : shard.ids) {
    put_u32(buf, id);
  }
  for (const auto& b : shard.boundaries) {
    put_u16(buf, static_cast<uint16_t>(b.size()));
    for (uint16_t offset : b) {
      put_u16(buf, offset);
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size())) || !out.flush()) {
    throw Error("failed to write shard " + path);
  }
}

PackedShard read_shard(const std::string& path, const uint64_t* expected_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open shard " + path);
  }
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error("failed to read shard " + path);
  }
  ByteReader r(data, path);

  char magic[4];
  r.raw(magic, 4);
  if (std::string_view(magic, 4) != std::string_view(kMagic, 4)) {
    throw Error(path + ": bad magic, not a shard file");
  }
  uint32_t version = r.u32();
  if (version != kVersion) {
    throw Error(path + ": unsupported shard version " + std::to_string(version));
  }
  PackedShard shard;
  shard.seq_len = r.u32();
  if (shard.seq_len < 2 || shard.seq_len > 65534) {
    throw Error(path + ": seq_len " + std::to_string(shard.seq_len) + " out of range");
  }
  shard.vocab_hash = r.u64();
  if (expected_hash != nullptr && shard.vocab_hash != *expected_hash) {
    throw Error(path + ": vocabulary hash mismatch");
  }
  uint64_t count = r.u64();
  if (count > data.size() / (static_cast<uint64_t>(shard.seq_len) * 4)) {
    throw Error(path + ": truncated at byte 28");  // count inconsistent with file size
  }
  shard.ids.resize(count * shard.seq_len);
  for (uint32_t& id : shard.ids) {
    id = r.u32();
  }
  shard.boundaries.resize(count);
  for (auto& b : shard.boundaries) {
    uint16_t n = r.u16();
    b.resize(n);
    uint16_t prev = 0;
    for (size_t i = 0; i < n; ++i) {
      b[i] = r.u16();
      if (b[i] > shard.seq_len || (i > 0 && b[i] <= prev)) {
        throw Error(path + ": boundary offsets must increase strictly within seq_len");
      }
      if (i + 1 < n && b[i] == shard.seq_len) {
        throw Error(path + ": only the final boundary may equal seq_len");
      }
      prev = b[i];
    }
  }
  r.fail_trailing();

  std::string stem = std::filesystem::path(path).filename().string();
  unsigned long long ordinal = 0;
  if (std::sscanf(stem.c_str(), "shard-%llu.tkpk", &ordinal) == 1) {
    shard.ordinal = ordinal;
  }
  return shard;
}

}  // namespace tooka
