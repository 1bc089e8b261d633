// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tooka/corpus.hpp"
#include "tooka/vocab.hpp"

namespace testutil {

// Deterministic synthetic Persian text: words drawn from a syllable pool,
// sprinkled with digits, Latin fragments, and punctuation. Stable across
// platforms (mt19937_64 with a fixed seed).
std::string persian_text(std::mt19937_64& rng, size_t words);

std::vector<tooka::RawDocument> persian_corpus(uint64_t seed, size_t documents,
                                               size_t max_words_per_doc = 40);

// Feeds a fixed document list as a DocumentSource.
tooka::DocumentSource vector_source(std::vector<tooka::RawDocument> docs);

// Trains a small vocabulary over the given corpus; convenience for codec,
// packer, and masking tests.
tooka::Vocab train_vocab(const std::vector<tooka::RawDocument>& docs, uint32_t target_size);

// Unique path under the system temp directory; removed recursively by the
// destructor.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

}  // namespace testutil
