// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/vocab.hpp"

#include <gtest/gtest.h>

#include <string>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"

namespace tooka {
namespace {

using nlohmann::json;

TEST(Vocab, BaseLayout) {
  Vocab v = Vocab::base();
  EXPECT_EQ(v.size(), 262u);
  EXPECT_TRUE(v.is_special(Vocab::kPad));
  EXPECT_TRUE(v.is_special(Vocab::kDoc));
  EXPECT_FALSE(v.is_special(Vocab::kByteBase));
  EXPECT_STREQ(Vocab::special_name(Vocab::kMask), "[MASK]");
  EXPECT_EQ(v.token_bytes(Vocab::kByteBase + 'a'), "a");
  EXPECT_EQ(v.token_bytes(Vocab::kByteBase + 0xFF), "\xff");
  EXPECT_TRUE(v.merges().empty());
}

TEST(Vocab, TokenBytesRejectsSpecialsAndOutOfRange) {
  Vocab v = Vocab::base();
  EXPECT_THROW(v.token_bytes(Vocab::kCls), Error);
  EXPECT_THROW(v.token_bytes(262), Error);
}

TEST(Vocab, AddMergeAssignsSequentialIds) {
  Vocab v = Vocab::base();
  uint32_t ab = v.add_merge(Vocab::kByteBase + 'a', Vocab::kByteBase + 'b');
  EXPECT_EQ(ab, Vocab::kFirstMergeId);
  EXPECT_EQ(v.token_bytes(ab), "ab");
  uint32_t abab = v.add_merge(ab, ab);
  EXPECT_EQ(abab, Vocab::kFirstMergeId + 1);
  EXPECT_EQ(v.token_bytes(abab), "abab");
  EXPECT_EQ(v.size(), 264u);
}

TEST(Vocab, AddMergeRejectsSpecialOperands) {
  Vocab v = Vocab::base();
  EXPECT_THROW(v.add_merge(Vocab::kCls, Vocab::kByteBase), Error);
  EXPECT_THROW(v.add_merge(Vocab::kByteBase, 9999), Error);
}

TEST(Vocab, ContentHashTracksContent) {
  Vocab a = Vocab::base();
  Vocab b = Vocab::base();
  EXPECT_EQ(a.content_hash(), b.content_hash());
  a.add_merge(Vocab::kByteBase + 'a', Vocab::kByteBase + 'b');
  EXPECT_NE(a.content_hash(), b.content_hash());
  b.add_merge(Vocab::kByteBase + 'a', Vocab::kByteBase + 'b');
  EXPECT_EQ(a.content_hash(), b.content_hash());
}

TEST(Vocab, JsonRoundTrip) {
  Vocab v = Vocab::base();
  uint32_t ab = v.add_merge(Vocab::kByteBase + 'a', Vocab::kByteBase + 'b');
  v.add_merge(ab, Vocab::kByteBase + 'c');
  Vocab back = Vocab::from_json(v.to_json());
  EXPECT_EQ(back.size(), v.size());
  EXPECT_EQ(back.merges(), v.merges());
  EXPECT_EQ(back.content_hash(), v.content_hash());
  EXPECT_EQ(back.token_bytes(Vocab::kFirstMergeId + 1), "abc");
}

TEST(Vocab, JsonCarriesBase64Tokens) {
  Vocab v = Vocab::base();
  json j = json::parse(v.to_json());
  EXPECT_EQ(j.at("version").get<int>(), 1);
  ASSERT_EQ(j.at("special_tokens").size(), 6u);
  EXPECT_EQ(j.at("special_tokens")[0].get<std::string>(), "[PAD]");
  ASSERT_EQ(j.at("tokens").size(), 256u);
  // Byte 'a' = 0x61 encodes as "YQ==".
  EXPECT_EQ(j.at("tokens")[0x61].get<std::string>(), "YQ==");
}

TEST(Vocab, FromJsonRejectsTamperedHash) {
  Vocab v = Vocab::base();
  json j = json::parse(v.to_json());
  j["content_hash"] = "0000000000000000";
  EXPECT_THROW(Vocab::from_json(j.dump()), Error);
}

TEST(Vocab, FromJsonRejectsWrongVersion) {
  json j = json::parse(Vocab::base().to_json());
  j["version"] = 2;
  EXPECT_THROW(Vocab::from_json(j.dump()), Error);
}

TEST(Vocab, FromJsonRejectsInconsistentMergeBytes) {
  Vocab v = Vocab::base();
  v.add_merge(Vocab::kByteBase + 'a', Vocab::kByteBase + 'b');
  json j = json::parse(v.to_json());
  // Merge result must concatenate operand bytes; corrupt the token list.
  j["tokens"][256] = "eHg=";  // "xx"
  EXPECT_THROW(Vocab::from_json(j.dump()), Error);
}

TEST(Vocab, FromJsonRejectsOutOfRangeOperand) {
  Vocab v = Vocab::base();
  v.add_merge(Vocab::kByteBase + 'a', Vocab::kByteBase + 'b');
  json j = json::parse(v.to_json());
  j["merges"][0][0] = 99999;
  EXPECT_THROW(Vocab::from_json(j.dump()), Error);
}

TEST(Vocab, FromJsonRejectsGarbage) {
  EXPECT_THROW(Vocab::from_json("not json"), Error);
  EXPECT_THROW(Vocab::from_json("{}"), Error);
}

}  // namespace
}  // namespace tooka
