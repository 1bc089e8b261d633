// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "tooka/aggregate.hpp"
#include "tooka/bpe_codec.hpp"
#include "tooka/bpe_trainer.hpp"
#include "tooka/corpus.hpp"
#include "tooka/mlm.hpp"
#include "tooka/normalizer.hpp"
#include "tooka/packer.hpp"

namespace tooka {

struct PipelinePaths {
  std::string corpus;
  std::string out_dir = "out";
};

// One JSON document with a section per pipeline stage; omitted fields take
// the defaults visible in to_json(). Command-line flags override fields one
// by one.
struct PipelineConfig {
  int workers = 1;
  CorpusFormat corpus_format = CorpusFormat::kText;
  PipelinePaths paths;
  NormalizationConfig normalizer = NormalizationConfig::defaults();
  BpeTrainConfig tokenizer;
  EncodeOptions encode{/*dropout_p=*/0.1, /*seed=*/0, /*add_specials=*/false};
  PackerConfig packer;
  MaskingPolicy masking;
  SweepConfig sweep;

  static PipelineConfig defaults() { return PipelineConfig{}; }
  static PipelineConfig from_json(const std::string& json_text);
  static PipelineConfig load(const std::string& path);

  // Round trips through from_json: every field materialized explicitly.
  std::string to_json() const;

  void validate() const;
};

}  // namespace tooka
