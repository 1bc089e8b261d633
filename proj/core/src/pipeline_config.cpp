// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/pipeline_config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"

namespace tooka {

namespace {

using json = nlohmann::json;

template <typename T>
void read_field(const json& j, const char* name, T& out) {
  if (j.contains(name)) {
    out = j.at(name).get<T>();
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("pipeline config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw Error("pipeline config must be a JSON object");
  }
  PipelineConfig cfg;
  try {
    read_field(j, "workers", cfg.workers);
    if (j.contains("corpus_format")) {
      cfg.corpus_format = corpus_format_from_name(j.at("corpus_format").get<std::string>());
    }
    if (j.contains("paths")) {
      const json& p = j.at("paths");
      read_field(p, "corpus", cfg.paths.corpus);
      read_field(p, "out_dir", cfg.paths.out_dir);
    }
    if (j.contains("normalizer")) {
      cfg.normalizer = NormalizationConfig::from_json(j.at("normalizer").dump());
    }
    if (j.contains("tokenizer")) {
      const json& t = j.at("tokenizer");
      read_field(t, "target_vocab_size", cfg.tokenizer.target_vocab_size);
      read_field(t, "min_pair_frequency", cfg.tokenizer.min_pair_frequency);
    }
    if (j.contains("encode")) {
      const json& e = j.at("encode");
      read_field(e, "dropout_p", cfg.encode.dropout_p);
      read_field(e, "seed", cfg.encode.seed);
      read_field(e, "add_specials", cfg.encode.add_specials);
    }
    if (j.contains("packer")) {
      const json& p = j.at("packer");
      read_field(p, "seq_len", cfg.packer.seq_len);
      read_field(p, "doc_separator", cfg.packer.doc_separator);
      read_field(p, "shard_capacity", cfg.packer.shard_capacity);
    }
    if (j.contains("masking")) {
      const json& m = j.at("masking");
      read_field(m, "mask_rate", cfg.masking.mask_rate);
      read_field(m, "mask_p", cfg.masking.mask_p);
      read_field(m, "random_p", cfg.masking.random_p);
      read_field(m, "keep_p", cfg.masking.keep_p);
      read_field(m, "whole_word", cfg.masking.whole_word);
      read_field(m, "seed", cfg.masking.seed);
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      read_field(s, "learning_rates", cfg.sweep.learning_rates);
      read_field(s, "max_epoch", cfg.sweep.max_epoch);
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed pipeline config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error("cannot open config " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw Error("failed to read config " + path);
  }
  try {
    return from_json(text);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

std::string PipelineConfig::to_json() const {
  json j{
      {"workers", workers},
      {"corpus_format", corpus_format == CorpusFormat::kText ? "text" : "jsonl"},
      {"paths", {{"corpus", paths.corpus}, {"out_dir", paths.out_dir}}},
      {"normalizer", json::parse(normalizer.to_json())},
      {"tokenizer",
       {{"target_vocab_size", tokenizer.target_vocab_size},
        {"min_pair_frequency", tokenizer.min_pair_frequency}}},
      {"encode",
       {{"dropout_p", encode.dropout_p},
        {"seed", encode.seed},
        {"add_specials", encode.add_specials}}},
      {"packer",
       {{"seq_len", packer.seq_len},
        {"doc_separator", packer.doc_separator},
        {"shard_capacity", packer.shard_capacity}}},
      {"masking",
       {{"mask_rate", masking.mask_rate},
        {"mask_p", masking.mask_p},
        {"random_p", masking.random_p},
        {"keep_p", masking.keep_p},
        {"whole_word", masking.whole_word},
        {"seed", masking.seed}}},
      {"sweep", {{"learning_rates", sweep.learning_rates}, {"max_epoch", sweep.max_epoch}}},
  };
  return j.dump(2);
}

void PipelineConfig::validate() const {
  if (workers < 1) {
    throw Error("workers must be at least 1");
  }
  normalizer.validate();
  tokenizer.validate();
  encode.validate();
  packer.validate();
  masking.validate();
  sweep.validate();
}

}  // namespace tooka
