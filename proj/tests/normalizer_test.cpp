// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/normalizer.hpp"

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "tooka/common.hpp"
#include "tooka/unicode.hpp"
#include "testutil.hpp"

namespace tooka {
namespace {

struct NfkcCase {
  const char* input;
  const char* expected;
};

// Singleton conformance rows frozen from an independent implementation of the
// Unicode tables. Covers Arabic presentation forms, ligatures, fullwidth
// forms, compatibility digraphs, width and numeral folds, plus identity rows.
const NfkcCase kNfkcCases[] = {
    {"\xef\xbb\xbb", "\xd9\x84\xd8\xa7"},  // U+FEFB ARABIC LIGATURE LAM WITH ALEF ISOLATED FORM
    {"\xef\xbb\xbc", "\xd9\x84\xd8\xa7"},  // U+FEFC ARABIC LIGATURE LAM WITH ALEF FINAL FORM
    {"\xef\xba\x8d", "\xd8\xa7"},  // U+FE8D ARABIC LETTER ALEF ISOLATED FORM
    {"\xef\xba\x8e", "\xd8\xa7"},  // U+FE8E ARABIC LETTER ALEF FINAL FORM
    {"\xef\xbb\x9f", "\xd9\x84"},  // U+FEDF ARABIC LETTER LAM INITIAL FORM
    {"\xef\xbb\xa0", "\xd9\x84"},  // U+FEE0 ARABIC LETTER LAM MEDIAL FORM
    {"\xef\xae\x8a", "\xda\x98"},  // U+FB8A ARABIC LETTER JEH ISOLATED FORM
    {"\xef\xae\x8b", "\xda\x98"},  // U+FB8B ARABIC LETTER JEH FINAL FORM
    {"\xef\xad\x96", "\xd9\xbe"},  // U+FB56 ARABIC LETTER PEH ISOLATED FORM
    {"\xef\xad\x97", "\xd9\xbe"},  // U+FB57 ARABIC LETTER PEH FINAL FORM
    {"\xef\xad\xba", "\xda\x86"},  // U+FB7A ARABIC LETTER TCHEH ISOLATED FORM
    {"\xef\xad\xbb", "\xda\x86"},  // U+FB7B ARABIC LETTER TCHEH FINAL FORM
    {"\xef\xae\x8e", "\xda\xa9"},  // U+FB8E ARABIC LETTER KEHEH ISOLATED FORM
    {"\xef\xae\x8f", "\xda\xa9"},  // U+FB8F ARABIC LETTER KEHEH FINAL FORM
    {"\xef\xaf\xbc", "\xdb\x8c"},  // U+FBFC ARABIC LETTER FARSI YEH ISOLATED FORM
    {"\xef\xaf\xbd", "\xdb\x8c"},  // U+FBFD ARABIC LETTER FARSI YEH FINAL FORM
    {"\xef\xbb\xab", "\xd9\x87"},  // U+FEEB ARABIC LETTER HEH INITIAL FORM
    {"\xef\xbb\xac", "\xd9\x87"},  // U+FEEC ARABIC LETTER HEH MEDIAL FORM
    {"\xef\xba\x91", "\xd8\xa8"},  // U+FE91 ARABIC LETTER BEH INITIAL FORM
    {"\xef\xba\x97", "\xd8\xaa"},  // U+FE97 ARABIC LETTER TEH INITIAL FORM
    {"\xef\xba\xad", "\xd8\xb1"},  // U+FEAD ARABIC LETTER REH ISOLATED FORM
    {"\xef\xba\xae", "\xd8\xb1"},  // U+FEAE ARABIC LETTER REH FINAL FORM
    {"\xef\xba\xb3", "\xd8\xb3"},  // U+FEB3 ARABIC LETTER SEEN INITIAL FORM
    {"\xef\xba\xb7", "\xd8\xb4"},  // U+FEB7 ARABIC LETTER SHEEN INITIAL FORM
    {"\xef\xb1\x9e", "\x20\xd9\x8c\xd9\x91"},  // U+FC5E ARABIC LIGATURE SHADDA WITH DAMMATAN ISOLATED FORM
    {"\xef\xb1\xa0", "\x20\xd9\x8e\xd9\x91"},  // U+FC60 ARABIC LIGATURE SHADDA WITH FATHA ISOLATED FORM
    {"\xef\xb7\xb2", "\xd8\xa7\xd9\x84\xd9\x84\xd9\x87"},  // U+FDF2 ARABIC LIGATURE ALLAH ISOLATED FORM
    {"\xef\xbc\xa1", "\x41"},  // U+FF21 FULLWIDTH LATIN CAPITAL LETTER A
    {"\xef\xbd\x81", "\x61"},  // U+FF41 FULLWIDTH LATIN SMALL LETTER A
    {"\xef\xbc\x90", "\x30"},  // U+FF10 FULLWIDTH DIGIT ZERO
    {"\xef\xbc\x81", "\x21"},  // U+FF01 FULLWIDTH EXCLAMATION MARK
    {"\xef\xbc\x8c", "\x2c"},  // U+FF0C FULLWIDTH COMMA
    {"\xef\xac\x81", "\x66\x69"},  // U+FB01 LATIN SMALL LIGATURE FI
    {"\xef\xac\x82", "\x66\x6c"},  // U+FB02 LATIN SMALL LIGATURE FL
    {"\xc4\xb2", "\x49\x4a"},  // U+0132 LATIN CAPITAL LIGATURE IJ
    {"\xc4\xb3", "\x69\x6a"},  // U+0133 LATIN SMALL LIGATURE IJ
    {"\xc7\x84", "\x44\xc5\xbd"},  // U+01C4 LATIN CAPITAL LETTER DZ WITH CARON
    {"\xc7\x86", "\x64\xc5\xbe"},  // U+01C6 LATIN SMALL LETTER DZ WITH CARON
    {"\xc2\xb2", "\x32"},  // U+00B2 SUPERSCRIPT TWO
    {"\xc2\xb9", "\x31"},  // U+00B9 SUPERSCRIPT ONE
    {"\xe2\x82\x81", "\x31"},  // U+2081 SUBSCRIPT ONE
    {"\xe2\x91\xa0", "\x31"},  // U+2460 CIRCLED DIGIT ONE
    {"\xe3\x8e\x92", "\x4d\x48\x7a"},  // U+3392 SQUARE MHZ
    {"\xc2\xa0", "\x20"},  // U+00A0 NO-BREAK SPACE
    {"\xe2\x80\x87", "\x20"},  // U+2007 FIGURE SPACE
    {"\xe3\x80\x80", "\x20"},  // U+3000 IDEOGRAPHIC SPACE
    {"\xe2\x85\xa7", "\x56\x49\x49\x49"},  // U+2167 ROMAN NUMERAL EIGHT
    {"\xe3\x8e\xa1", "\x6d\x32"},  // U+33A1 SQUARE M SQUARED
    {"\xdb\x8c", "\xdb\x8c"},  // U+06CC ARABIC LETTER FARSI YEH
    {"\xda\xa9", "\xda\xa9"},  // U+06A9 ARABIC LETTER KEHEH
};

std::string normalized(const std::string& text,
                       const NormalizationConfig& config = NormalizationConfig::defaults()) {
  return normalize_text(text, config).first;
}

TEST(Nfkc, FrozenConformanceRows) {
  for (const auto& c : kNfkcCases) {
    EXPECT_EQ(nfkc(c.input), c.expected) << "input bytes: " << c.input;
  }
}

TEST(Nfkc, RowsSurviveFullPipeline) {
  // The default char map touches none of the expected outputs except the
  // Arabic letters it maps; verify the full pipeline agrees with plain NFKC
  // followed by the map on
  // each singleton.
  NormalizationConfig config = NormalizationConfig::defaults();
  config.collapse_whitespace = false;
  for (const auto& c : kNfkcCases) {
    std::string once = normalized(c.input, config);
    EXPECT_EQ(normalized(once, config), once) << "not idempotent for " << c.input;
  }
}

TEST(Normalize, ArabicYehAndKafBecomeFarsi) {
  // U+064A -> U+06CC, U+0643 -> U+06A9
  EXPECT_EQ(normalized("\xd9\x8a"), "\xdb\x8c");
  EXPECT_EQ(normalized("\xd9\x83"), "\xda\xa9");
}

TEST(Normalize, TehMarbutaBecomesHeh) {
  // U+0629 -> U+0647
  EXPECT_EQ(normalized("\xd8\xa9"), "\xd9\x87");
}

TEST(Normalize, ArabicIndicDigitsBecomeExtended) {
  // U+0660..U+0669 -> U+06F0..U+06F9
  EXPECT_EQ(normalized("\xd9\xa0\xd9\xa1\xd9\xa9"), "\xdb\xb0\xdb\xb1\xdb\xb9");
}

TEST(Normalize, TatweelDropped) {
  // U+0640 between letters disappears.
  EXPECT_EQ(normalized("\xd8\xa8\xd9\x80\xd8\xa8"), "\xd8\xa8\xd8\xa8");
}

TEST(Normalize, HarakatDropped) {
  // U+064E (fatha) and U+0651 (shadda) disappear.
  EXPECT_EQ(normalized("\xd8\xa8\xd9\x8e\xd8\xa8\xd9\x91"), "\xd8\xa8\xd8\xa8");
}

TEST(Normalize, ZwnjPreserved) {
  // U+200C joins Persian compounds; it must survive.
  const std::string compound = "\xd9\x85\xdb\x8c\xe2\x80\x8c\xd8\xb1\xd9\x88\xd9\x85";
  EXPECT_EQ(normalized(compound), compound);
}

TEST(Normalize, WhitespaceRunsCollapse) {
  EXPECT_EQ(normalized("a  \t b"), "a b");
  EXPECT_EQ(normalized("  a b  "), "a b");
  EXPECT_EQ(normalized("\t\n "), "");
}

TEST(Normalize, NewlineRunsKeepOneNewline) {
  EXPECT_EQ(normalized("a \n b"), "a\nb");
  EXPECT_EQ(normalized("a\n\n\nb"), "a\nb");
  EXPECT_EQ(normalized("a\r\nb"), "a\nb");
}

TEST(Normalize, EmptyAndPlainStrings) {
  EXPECT_EQ(normalized(""), "");
  EXPECT_EQ(normalized("hello"), "hello");
  const std::string persian = "\xda\xa9\xd8\xaa\xd8\xa7\xd8\xa8";
  EXPECT_EQ(normalized(persian), persian);
}

TEST(Normalize, IdempotentOnSyntheticCorpus) {
  auto docs = testutil::persian_corpus(17, 200);
  for (const auto& doc : docs) {
    std::string once = normalized(doc.text);
    EXPECT_EQ(normalized(once), once) << "document " << doc.id;
  }
}

TEST(Normalize, PresentationFormThenMapComposes) {
  // U+FEFB (lam-alef ligature) folds to lam + alef under NFKC; the char map
  // leaves both untouched; whitespace stage sees none.
  EXPECT_EQ(normalized("\xef\xbb\xbb"), "\xd9\x84\xd8\xa7");
  // Fullwidth digit zero folds to ASCII zero, not to a Persian digit.
  EXPECT_EQ(normalized("\xef\xbc\x90"), "0");
}

TEST(Normalize, InvalidUtf8Throws) {
  EXPECT_THROW(normalized("\xff\xfe"), Error);
  EXPECT_THROW(normalized("ab\xc3"), Error);
}

TEST(Normalize, ReportCounts) {
  auto [text, report] = normalize_text("  \xd9\x8a \xef\xbc\x90  ", NormalizationConfig::defaults());
  EXPECT_EQ(text, "\xdb\x8c 0");
  EXPECT_EQ(report.documents, 1u);
  EXPECT_EQ(report.nfkc_changed_chars, 1u);  // the fullwidth zero
  ASSERT_EQ(report.replacements.size(), 1u);
  EXPECT_EQ(report.replacements.begin()->first, 0x064Au);
  EXPECT_EQ(report.replacements.begin()->second, 1u);
  EXPECT_EQ(report.input_codepoints, 7u);
  EXPECT_EQ(report.output_codepoints, 3u);
}

TEST(Normalize, StagesCanBeDisabled) {
  NormalizationConfig config;
  config.apply_nfkc = false;
  config.collapse_whitespace = false;
  // No char map, no stages: identity.
  EXPECT_EQ(normalized("a  \xef\xbc\x90  \xd9\x8a", config), "a  \xef\xbc\x90  \xd9\x8a");
}

TEST(Normalize, MapRemovalEntry) {
  NormalizationConfig config;
  config.char_map = {{U'x', U""}};
  EXPECT_EQ(normalized("axbxc", config), "abc");
}

TEST(Normalize, MapExpansionEntry) {
  NormalizationConfig config;
  config.char_map = {{U'x', U"yz"}};
  EXPECT_EQ(normalized("axb", config), "ayzb");
}

TEST(NormalizeConfig, ValidateRejectsDuplicateSources) {
  NormalizationConfig config;
  config.char_map = {{U'x', U"y"}, {U'x', U"z"}};
  EXPECT_THROW(config.validate(), Error);
}

TEST(NormalizeConfig, ValidateRejectsNonClosedMap) {
  // 'x' maps to 'y' while 'y' itself is a source: one pass is not a fixpoint.
  NormalizationConfig config;
  config.char_map = {{U'x', U"y"}, {U'y', U"z"}};
  EXPECT_THROW(config.validate(), Error);
}

TEST(NormalizeConfig, DefaultsValidate) {
  EXPECT_NO_THROW(NormalizationConfig::defaults().validate());
}

TEST(NormalizeConfig, JsonRoundTrip) {
  NormalizationConfig config = NormalizationConfig::defaults();
  NormalizationConfig back = NormalizationConfig::from_json(config.to_json());
  EXPECT_EQ(back.apply_nfkc, config.apply_nfkc);
  EXPECT_EQ(back.collapse_whitespace, config.collapse_whitespace);
  EXPECT_EQ(back.char_map, config.char_map);
}

TEST(NormalizeConfig, CodepointLiterals) {
  EXPECT_EQ(parse_codepoint_literal("U+06CC"), 0x06CCu);
  EXPECT_EQ(codepoint_literal(0x06CC), "U+06CC");
  EXPECT_THROW(parse_codepoint_literal("06CC"), Error);
  EXPECT_THROW(parse_codepoint_literal("U+XYZ"), Error);
}

TEST(NormalizeCorpus, ParallelMatchesSerial) {
  auto docs = testutil::persian_corpus(99, 300);
  NormalizationConfig config = NormalizationConfig::defaults();

  auto run = [&](int workers) {
    std::vector<RawDocument> out;
    auto sink = [&out](const RawDocument& doc) { out.push_back(doc); };
    NormalizationReport report =
        normalize_corpus(testutil::vector_source(docs), sink, config, workers);
    return std::make_pair(out, report.to_json());
  };

  auto [serial_docs, serial_report] = run(1);
  auto [parallel_docs, parallel_report] = run(4);
  ASSERT_EQ(serial_docs.size(), parallel_docs.size());
  for (size_t i = 0; i < serial_docs.size(); ++i) {
    EXPECT_EQ(serial_docs[i].id, parallel_docs[i].id);
    EXPECT_EQ(serial_docs[i].text, parallel_docs[i].text);
  }
  EXPECT_EQ(serial_report, parallel_report);
}

TEST(NormalizeCorpus, ReportMergesAcrossDocuments) {
  std::vector<RawDocument> docs = {{"a", "\xd9\x8a"}, {"b", "\xd9\x8a \xd9\x83"}};
  std::vector<RawDocument> out;
  auto sink = [&out](const RawDocument& doc) { out.push_back(doc); };
  NormalizationReport report = normalize_corpus(testutil::vector_source(docs), sink,
                                                NormalizationConfig::defaults(), 1);
  EXPECT_EQ(report.documents, 2u);
  EXPECT_EQ(report.replacements.at(0x064A), 2u);
  EXPECT_EQ(report.replacements.at(0x0643), 1u);
}

}  // namespace
}  // namespace tooka
