// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/packer.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "tooka/bpe_codec.hpp"
#include "tooka/common.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

namespace tooka {
namespace {

// Documents of plain byte tokens; word_starts every token so each token is
// its own word unless stated otherwise.
EncodedDocument byte_doc(const std::string& id, size_t tokens, uint32_t first = Vocab::kByteBase) {
  EncodedDocument doc;
  doc.id = id;
  for (size_t i = 0; i < tokens; ++i) {
    doc.ids.push_back(first + static_cast<uint32_t>(i % 200));
    doc.word_starts.push_back(static_cast<uint32_t>(i));
  }
  return doc;
}

struct Collected {
  std::vector<PackedShard> shards;
  PackReport report;
};

Collected pack_all(const std::vector<EncodedDocument>& docs, uint32_t seq_len,
                   uint64_t shard_capacity = 65536) {
  PackerConfig config;
  config.seq_len = seq_len;
  config.shard_capacity = shard_capacity;
  Collected out;
  Packer packer(config, Vocab::base(), [&](PackedShard&& s) { out.shards.push_back(std::move(s)); });
  for (const auto& doc : docs) {
    packer.add(doc);
  }
  out.report = packer.finish();
  return out;
}

std::vector<uint32_t> concat_stream(const Collected& c) {
  std::vector<uint32_t> stream;
  for (const auto& shard : c.shards) {
    stream.insert(stream.end(), shard.ids.begin(), shard.ids.end());
  }
  stream.insert(stream.end(), c.report.remainder.begin(), c.report.remainder.end());
  return stream;
}

TEST(Packer, StreamEqualsJoinedDocuments) {
  std::vector<EncodedDocument> docs = {byte_doc("a", 5), byte_doc("b", 7), byte_doc("c", 3)};
  Collected c = pack_all(docs, 4);
  std::vector<std::vector<uint32_t>> raw;
  for (const auto& d : docs) {
    raw.push_back(d.ids);
  }
  EXPECT_EQ(concat_stream(c), oracle::join_with_separator(raw, Vocab::kDoc));
  // 5 + 1 + 7 + 1 + 3 = 17 tokens -> 4 sequences of 4, remainder 1.
  EXPECT_EQ(c.report.sequences, 4u);
  EXPECT_EQ(c.report.remainder.size(), 1u);
  EXPECT_EQ(c.report.stream_tokens, 17u);
}

TEST(Packer, EmptyDocumentsSkippedWithoutSeparator) {
  std::vector<EncodedDocument> docs = {byte_doc("a", 3), byte_doc("empty", 0), byte_doc("b", 3)};
  Collected c = pack_all(docs, 7);
  // 3 + 1 + 3: exactly one separator despite the empty document between.
  ASSERT_EQ(c.shards.size(), 1u);
  EXPECT_EQ(c.report.sequences, 1u);
  EXPECT_EQ(c.report.empty_documents, 1u);
  EXPECT_EQ(c.shards[0].ids[3], Vocab::kDoc);
  EXPECT_TRUE(c.report.remainder.empty());
}

TEST(Packer, AllSequencesExactlySeqLenNoPads) {
  auto docs = std::vector<EncodedDocument>{byte_doc("a", 100), byte_doc("b", 57), byte_doc("c", 23)};
  Collected c = pack_all(docs, 16);
  for (const auto& shard : c.shards) {
    EXPECT_EQ(shard.ids.size(), shard.count() * 16);
    for (uint32_t id : shard.ids) {
      EXPECT_NE(id, Vocab::kPad);
    }
  }
  EXPECT_LT(c.report.remainder.size(), 16u);
}

TEST(Packer, ShardCapacityRollsOver) {
  std::vector<EncodedDocument> docs = {byte_doc("a", 64)};
  Collected c = pack_all(docs, 8, /*shard_capacity=*/3);
  // 64 tokens -> 8 sequences -> shards of 3, 3, 2.
  ASSERT_EQ(c.shards.size(), 3u);
  EXPECT_EQ(c.shards[0].count(), 3u);
  EXPECT_EQ(c.shards[1].count(), 3u);
  EXPECT_EQ(c.shards[2].count(), 2u);
  EXPECT_EQ(c.shards[0].ordinal, 0u);
  EXPECT_EQ(c.shards[2].ordinal, 2u);
  EXPECT_EQ(c.report.shards, 3u);
}

TEST(Packer, BoundariesMarkContainedSegments) {
  // One 6-token word followed by a 2-token word, seq_len 4: the first window
  // holds tokens [0,4) of the long word (no complete segment), the second
  // window finishes it and takes the short word whole.
  EncodedDocument doc;
  doc.id = "w";
  for (int i = 0; i < 8; ++i) {
    doc.ids.push_back(Vocab::kByteBase + static_cast<uint32_t>(i));
  }
  doc.word_starts = {0, 6};
  Collected c = pack_all({doc}, 4);
  ASSERT_EQ(c.shards.size(), 1u);
  const auto& b = c.shards[0].boundaries;
  ASSERT_EQ(b.size(), 2u);
  // Window 0: the word starts at 0 but does not complete; no terminator.
  EXPECT_EQ(b[0], (std::vector<uint16_t>{0}));
  EXPECT_TRUE(sequence_extents(b[0]).empty());
  // Window 1: the straddler occupies [0,2) unlisted; the short word spans
  // [2,4) and completes at the window edge, closed by the terminator.
  EXPECT_EQ(b[1], (std::vector<uint16_t>{2, 4}));
  auto extents = sequence_extents(b[1]);
  ASSERT_EQ(extents.size(), 1u);
  EXPECT_EQ(extents[0], (std::pair<uint16_t, uint16_t>{2, 4}));
}

TEST(Packer, SeparatorIsItsOwnSegment) {
  std::vector<EncodedDocument> docs = {byte_doc("a", 2), byte_doc("b", 2)};
  // Stream: t t [DOC] t t, seq_len 5 -> one window, all segments complete.
  Collected c = pack_all(docs, 5);
  ASSERT_EQ(c.shards.size(), 1u);
  const auto& b = c.shards[0].boundaries[0];
  EXPECT_EQ(b, (std::vector<uint16_t>{0, 1, 2, 3, 4, 5}));
  auto extents = sequence_extents(b);
  ASSERT_EQ(extents.size(), 5u);
  EXPECT_EQ(c.shards[0].sequence(0)[2], Vocab::kDoc);
}

TEST(Packer, RejectsOutOfRangeIds) {
  PackerConfig config;
  config.seq_len = 8;
  Packer packer(config, Vocab::base(), [](PackedShard&&) {});
  EncodedDocument doc;
  doc.id = "bad-doc";
  doc.ids = {99999};
  doc.word_starts = {0};
  try {
    packer.add(doc);
    FAIL() << "expected Error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bad-doc"), std::string::npos);
  }
}

TEST(Packer, RejectsMalformedWordStarts) {
  PackerConfig config;
  config.seq_len = 8;
  Packer packer(config, Vocab::base(), [](PackedShard&&) {});
  EncodedDocument doc;
  doc.id = "bad-starts";
  doc.ids = {Vocab::kByteBase, Vocab::kByteBase};
  doc.word_starts = {1, 0};  // not ascending from 0
  EXPECT_THROW(packer.add(doc), Error);
}

TEST(Packer, ConfigValidation) {
  PackerConfig config;
  config.seq_len = 1;
  EXPECT_THROW(config.validate(), Error);
  config.seq_len = 65535;
  EXPECT_THROW(config.validate(), Error);
  config.seq_len = 65534;
  EXPECT_NO_THROW(config.validate());
  config.shard_capacity = 0;
  EXPECT_THROW(config.validate(), Error);
}

TEST(Packer, LargeRandomStreamEquality) {
  // Random document sizes summing past 10^6 tokens; the packed stream plus
  // remainder must reproduce the joined input exactly.
  std::mt19937_64 rng(7);
  std::vector<EncodedDocument> docs;
  std::vector<std::vector<uint32_t>> raw;
  size_t total = 0;
  while (total < 1'000'000) {
    const size_t len = rng() % 3000;
    EncodedDocument doc = byte_doc("d" + std::to_string(docs.size()), len);
    total += len;
    raw.push_back(doc.ids);
    docs.push_back(std::move(doc));
  }
  Collected c = pack_all(docs, 512);
  std::vector<uint32_t> expected = oracle::join_with_separator(raw, Vocab::kDoc);
  std::vector<uint32_t> actual = concat_stream(c);
  ASSERT_EQ(actual.size(), expected.size());
  EXPECT_TRUE(actual == expected);
  for (const auto& shard : c.shards) {
    EXPECT_EQ(shard.ids.size() % 512, 0u);
  }
}

TEST(PackerFinish, SecondFinishThrows) {
  PackerConfig config;
  config.seq_len = 8;
  Packer packer(config, Vocab::base(), [](PackedShard&&) {});
  packer.add(byte_doc("a", 4));
  packer.finish();
  EXPECT_THROW(packer.finish(), Error);
}

TEST(ShardIo, RoundTrip) {
  testutil::TempDir dir;
  std::vector<EncodedDocument> docs = {byte_doc("a", 40), byte_doc("b", 25)};
  Collected c = pack_all(docs, 8);
  ASSERT_FALSE(c.shards.empty());
  const PackedShard& shard = c.shards[0];
  const std::string path = dir.file(shard_file_name(shard.ordinal));
  write_shard(shard, path);
  const uint64_t expected_hash = Vocab::base().content_hash();
  PackedShard back = read_shard(path, &expected_hash);
  EXPECT_EQ(back.seq_len, shard.seq_len);
  EXPECT_EQ(back.vocab_hash, shard.vocab_hash);
  EXPECT_EQ(back.ids, shard.ids);
  EXPECT_EQ(back.boundaries, shard.boundaries);
  EXPECT_EQ(back.ordinal, shard.ordinal);
}

TEST(ShardIo, OrdinalParsedFromFileName) {
  EXPECT_EQ(shard_file_name(0), "shard-00000.tkpk");
  EXPECT_EQ(shard_file_name(12), "shard-00012.tkpk");
  testutil::TempDir dir;
  Collected c = pack_all({byte_doc("a", 40)}, 8, 2);
  ASSERT_GE(c.shards.size(), 2u);
  const std::string path = dir.file(shard_file_name(7));
  write_shard(c.shards[1], path);
  PackedShard back = read_shard(path);
  EXPECT_EQ(back.ordinal, 7u);
}

TEST(ShardIo, DetectsCorruption) {
  testutil::TempDir dir;
  Collected c = pack_all({byte_doc("a", 40)}, 8);
  const std::string path = dir.file("shard-00000.tkpk");
  write_shard(c.shards[0], path);

  // Bad magic.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXX", 4);
  }
  EXPECT_THROW(read_shard(path), Error);

  // Restore, then truncate.
  write_shard(c.shards[0], path);
  std::error_code ec;
  std::filesystem::resize_file(path, 30, ec);
  ASSERT_FALSE(ec);
  EXPECT_THROW(read_shard(path), Error);

  // Hash mismatch.
  write_shard(c.shards[0], path);
  const uint64_t wrong_hash = 0xdeadbeefULL;
  EXPECT_THROW(read_shard(path, &wrong_hash), Error);

  // Trailing garbage.
  write_shard(c.shards[0], path);
  {
    std::ofstream f(path, std::ios::app | std::ios::binary);
    f << "extra";
  }
  EXPECT_THROW(read_shard(path), Error);
}

TEST(ShardIo, DirSinkWritesSequentialFiles) {
  testutil::TempDir dir;
  const std::string out = dir.file("shards");
  PackerConfig config;
  config.seq_len = 8;
  config.shard_capacity = 2;
  Packer packer(config, Vocab::base(), make_shard_dir_sink(out));
  packer.add(byte_doc("a", 64));
  PackReport report = packer.finish();
  EXPECT_EQ(report.shards, 4u);
  for (uint64_t i = 0; i < 4; ++i) {
    PackedShard s = read_shard(out + "/" + shard_file_name(i));
    EXPECT_EQ(s.ordinal, i);
  }
}

}  // namespace
}  // namespace tooka
