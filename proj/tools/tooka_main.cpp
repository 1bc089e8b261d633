// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end for the pipeline. Glue only: every subcommand
// parses flags over the pipeline config, then delegates to the library.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tooka/aggregate.hpp"
#include "tooka/bpe_codec.hpp"
#include "tooka/bpe_trainer.hpp"
#include "tooka/common.hpp"
#include "tooka/corpus.hpp"
#include "tooka/metrics.hpp"
#include "tooka/mlm.hpp"
#include "tooka/normalizer.hpp"
#include "tooka/packer.hpp"
#include "tooka/parallel.hpp"
#include "tooka/pipeline_config.hpp"
#include "tooka/util.hpp"
#include "tooka/vocab.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

// Distinguishes exit-2 problems (bad invocation, bad config file) from
// exit-1 domain failures.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoopDeleter {
  void operator()(std::ios*) const {}
};

std::shared_ptr<std::istream> open_input(const std::string& path) {
  if (path == "-") {
    return {&std::cin, NoopDeleter{}};
  }
  auto in = std::make_shared<std::ifstream>(path, std::ios::binary);
  if (!*in) {
    throw tooka::Error("cannot open input " + path);
  }
  return in;
}

std::shared_ptr<std::ostream> open_output(const std::string& path) {
  if (path == "-") {
    return {&std::cout, NoopDeleter{}};
  }
  auto out = std::make_shared<std::ofstream>(path, std::ios::binary | std::ios::trunc);
  if (!*out) {
    throw tooka::Error("cannot open output " + path);
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text) || !out.flush()) {
    throw tooka::Error("failed to write " + path);
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw tooka::Error("cannot open " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw tooka::Error("failed to read " + path);
  }
  return text;
}

tooka::Vocab load_vocab(const std::string& path) { return tooka::Vocab::from_json(read_text_file(path)); }

// Shared option state. Every subcommand accepts --config; flags set on the
// command line win over the file.
struct CommonOpts {
  std::optional<std::string> config_path;
  std::optional<int> workers;
  std::optional<std::string> format;

  tooka::PipelineConfig resolve() const {
    tooka::PipelineConfig cfg;
    if (config_path) {
      try {
        cfg = tooka::PipelineConfig::load(*config_path);
      } catch (const tooka::Error& e) {
        throw UsageError(e.what());
      }
    }
    if (workers) {
      cfg.workers = *workers;
    }
    if (format) {
      cfg.corpus_format = tooka::corpus_format_from_name(*format);
    }
    if (const char* env = std::getenv("TOOKA_SEED")) {
      uint64_t seed = 0;
      const char* end = env + std::string_view(env).size();
      auto [ptr, ec] = std::from_chars(env, end, seed);
      if (ec != std::errc{} || ptr != end || *env == '\0') {
        throw UsageError("TOOKA_SEED must be an unsigned integer, got \"" + std::string(env) +
                         "\"");
      }
      cfg.encode.seed = seed;
      cfg.masking.seed = seed;
    }
    return cfg;
  }

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Pipeline config JSON; flags override its fields");
    cmd->add_option("--workers", workers, "Worker threads (default from config, 1)");
  }
  void attach_format(CLI::App* cmd) {
    cmd->add_option("--format", format, "Corpus format: text (line per document) or jsonl")
        ->check(CLI::IsMember({"text", "jsonl"}));
  }
};

// Streams the corpus through the encoder in ordered batches: encoding runs
// parallel, consumption stays in input order, per-document seeds come from
// the document's position so the worker count cannot change any output.
void encode_stream(
    const tooka::DocumentSource& src, const tooka::BpeEncoder& encoder,
    const tooka::EncodeOptions& base, int workers,
    const std::function<void(uint64_t, const tooka::RawDocument&, tooka::Encoded&&)>& consume) {
  constexpr size_t kBatch = 1024;
  std::vector<tooka::EncodeCache> caches(std::max(workers, 1));
  std::vector<tooka::RawDocument> batch;
  batch.reserve(kBatch);
  std::vector<tooka::Encoded> encoded;
  uint64_t ordinal = 0;
  bool more = true;
  while (more) {
    batch.clear();
    tooka::RawDocument doc;
    while (batch.size() < kBatch && (more = src(doc))) {
      batch.push_back(std::move(doc));
    }
    if (batch.empty()) {
      break;
    }
    encoded.assign(batch.size(), tooka::Encoded{});
    tooka::parallel_for_chunked(batch.size(), workers, [&](size_t b, size_t e, size_t w) {
      for (size_t i = b; i < e; ++i) {
        tooka::EncodeOptions opts = base;
        opts.seed = tooka::document_seed(base.seed, ordinal + i);
        encoded[i] = encoder.encode(batch[i].text, opts, &caches[w]);
      }
    });
    for (size_t i = 0; i < batch.size(); ++i) {
      consume(ordinal + i, batch[i], std::move(encoded[i]));
    }
    ordinal += batch.size();
  }
}

// encode -> pack in one pass over an already-normalized corpus.
tooka::PackReport pack_corpus(const tooka::PipelineConfig& cfg, const tooka::Vocab& vocab,
                              std::istream& in, const std::string& out_dir) {
  tooka::BpeEncoder encoder(vocab);
  tooka::Packer packer(cfg.packer, vocab, tooka::make_shard_dir_sink(out_dir));
  auto src = tooka::make_document_source(in, cfg.corpus_format);
  encode_stream(src, encoder, cfg.encode, cfg.workers,
                [&](uint64_t, const tooka::RawDocument& doc, tooka::Encoded&& enc) {
                  packer.add(tooka::EncodedDocument{doc.id, std::move(enc.ids),
                                                    std::move(enc.word_starts)});
                });
  return packer.finish();
}

int cmd_normalize(const CommonOpts& common, const std::string& in_path,
                  const std::string& out_path, const std::string& report_path) {
  tooka::PipelineConfig cfg = common.resolve();
  auto in = open_input(in_path);
  auto out = open_output(out_path);
  auto src = tooka::make_document_source(*in, cfg.corpus_format);
  auto sink = tooka::make_document_sink(*out, cfg.corpus_format);
  tooka::NormalizationReport report =
      tooka::normalize_corpus(src, sink, cfg.normalizer, cfg.workers);
  out->flush();
  if (!report_path.empty()) {
    write_text_file(report_path, report.to_json() + "\n");
  }
  std::cerr << "normalized " << report.documents << " documents\n";
  return 0;
}

int cmd_train_bpe(const CommonOpts& common, const std::string& in_path,
                  const std::string& vocab_path, const std::string& report_path,
                  const std::optional<uint32_t>& vocab_size,
                  const std::optional<uint64_t>& min_pair_frequency) {
  tooka::PipelineConfig cfg = common.resolve();
  if (vocab_size) {
    cfg.tokenizer.target_vocab_size = *vocab_size;
  }
  if (min_pair_frequency) {
    cfg.tokenizer.min_pair_frequency = *min_pair_frequency;
  }
  auto in = open_input(in_path);
  auto src = tooka::make_document_source(*in, cfg.corpus_format);
  auto [vocab, report] = tooka::train_bpe(src, cfg.tokenizer);
  write_text_file(vocab_path, vocab.to_json() + "\n");
  if (!report_path.empty()) {
    write_text_file(report_path, report.to_json() + "\n");
  }
  if (!report.reached_target) {
    std::cerr << "warning: vocabulary stopped at " << vocab.size()
              << " entries; no remaining pair meets min_pair_frequency\n";
  }
  std::cerr << "learned " << report.merges << " merges from " << report.documents
            << " documents\n";
  return 0;
}

int cmd_encode(const CommonOpts& common, const std::string& vocab_path, const std::string& in_path,
               const std::string& out_path, const std::optional<double>& dropout,
               const std::optional<uint64_t>& seed, bool add_specials) {
  tooka::PipelineConfig cfg = common.resolve();
  if (dropout) {
    cfg.encode.dropout_p = *dropout;
  }
  if (seed) {
    cfg.encode.seed = *seed;
  }
  cfg.encode.add_specials = add_specials;
  tooka::Vocab vocab = load_vocab(vocab_path);
  tooka::BpeEncoder encoder(vocab);
  auto in = open_input(in_path);
  auto out = open_output(out_path);
  auto src = tooka::make_document_source(*in, cfg.corpus_format);
  encode_stream(src, encoder, cfg.encode, cfg.workers,
                [&](uint64_t, const tooka::RawDocument& doc, tooka::Encoded&& enc) {
                  ordered_json j{{"id", doc.id}, {"ids", enc.ids}, {"word_starts", enc.word_starts}};
                  *out << j.dump() << '\n';
                  if (!*out) {
                    throw tooka::Error("write failed at document " + doc.id);
                  }
                });
  out->flush();
  return 0;
}

int cmd_decode(const std::string& vocab_path, const std::string& in_path,
               const std::string& out_path) {
  tooka::Vocab vocab = load_vocab(vocab_path);
  tooka::BpeEncoder encoder(vocab);
  auto in = open_input(in_path);
  auto out = open_output(out_path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    std::string id = std::to_string(line_no);
    std::vector<uint32_t> ids;
    try {
      json j = json::parse(line);
      if (j.contains("id")) {
        id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      }
      ids = j.at("ids").get<std::vector<uint32_t>>();
    } catch (const json::exception& e) {
      throw tooka::Error("line " + std::to_string(line_no) + ": " + e.what());
    }
    ordered_json j{{"id", id}, {"text", encoder.decode(ids)}};
    *out << j.dump() << '\n';
  }
  if (in->bad()) {
    throw tooka::Error("failed to read " + in_path);
  }
  out->flush();
  return 0;
}

int cmd_pack(const CommonOpts& common, const std::string& vocab_path, const std::string& in_path,
             const std::string& out_dir, const std::string& report_path,
             const std::optional<uint32_t>& seq_len, const std::optional<uint64_t>& shard_size,
             const std::optional<double>& dropout, const std::optional<uint64_t>& seed) {
  tooka::PipelineConfig cfg = common.resolve();
  if (seq_len) {
    cfg.packer.seq_len = *seq_len;
  }
  if (shard_size) {
    cfg.packer.shard_capacity = *shard_size;
  }
  if (dropout) {
    cfg.encode.dropout_p = *dropout;
  }
  if (seed) {
    cfg.encode.seed = *seed;
  }
  tooka::Vocab vocab = load_vocab(vocab_path);
  auto in = open_input(in_path);
  tooka::PackReport report = pack_corpus(cfg, vocab, *in, out_dir);
  if (!report_path.empty()) {
    write_text_file(report_path, report.to_json() + "\n");
  }
  std::cerr << "packed " << report.sequences << " sequences into " << report.shards
            << " shards; " << report.remainder.size() << " tokens dropped\n";
  return 0;
}

int cmd_mask(const CommonOpts& common, const std::string& shard_path,
             const std::string& vocab_path, const std::string& report_path,
             const std::string& emit_path, const std::optional<double>& rate,
             const std::optional<uint64_t>& seed, const std::optional<bool>& whole_word) {
  tooka::PipelineConfig cfg = common.resolve();
  if (rate) {
    cfg.masking.mask_rate = *rate;
  }
  if (seed) {
    cfg.masking.seed = *seed;
  }
  if (whole_word) {
    cfg.masking.whole_word = *whole_word;
  }
  tooka::Vocab vocab = load_vocab(vocab_path);
  const uint64_t expected_hash = vocab.content_hash();
  tooka::PackedShard shard = tooka::read_shard(shard_path, &expected_hash);
  std::vector<tooka::MlmInstance> instances =
      tooka::build_instances(shard, cfg.masking, vocab, cfg.workers);
  tooka::MaskingReport report = tooka::masking_report(instances);
  write_text_file(report_path, report.to_json() + "\n");
  if (!emit_path.empty()) {
    tooka::write_instances(instances, shard.seq_len, shard.vocab_hash, emit_path);
  }
  std::cerr << "masked " << report.sequences << " sequences ("
            << report.labeled_tokens << " labeled tokens)\n";
  return 0;
}

// ---- score ----------------------------------------------------------------

std::map<std::string, json> read_prediction_map(const std::string& path) {
  auto in = open_input(path);
  std::map<std::string, json> preds;
  std::string line;
  size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      json j = json::parse(line);
      std::string id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      if (!preds.emplace(id, j.at("prediction")).second) {
        throw tooka::Error("duplicate prediction for example " + id);
      }
    } catch (const json::exception& e) {
      throw tooka::Error(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in->bad()) {
    throw tooka::Error("failed to read " + path);
  }
  return preds;
}

// Calls fn(id, gold_json) for each gold line, pairing it with the prediction
// of the same id; every gold needs a prediction and vice versa.
void join_gold_predictions(const std::string& gold_path, const std::string& pred_path,
                           const std::function<void(const std::string&, const json&, const json&)>& fn) {
  std::map<std::string, json> preds = read_prediction_map(pred_path);
  std::set<std::string> seen;
  auto in = open_input(gold_path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      json j = json::parse(line);
      std::string id = j.at("id").is_string() ? j.at("id").get<std::string>() : j.at("id").dump();
      if (!seen.insert(id).second) {
        throw tooka::Error("duplicate gold example " + id);
      }
      auto it = preds.find(id);
      if (it == preds.end()) {
        throw tooka::Error("no prediction for example " + id);
      }
      fn(id, j, it->second);
    } catch (const json::exception& e) {
      throw tooka::Error(gold_path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (in->bad()) {
    throw tooka::Error("failed to read " + gold_path);
  }
  for (const auto& [id, p] : preds) {
    if (!seen.count(id)) {
      throw tooka::Error("prediction for unknown example " + id);
    }
  }
}

int cmd_score(const std::string& task, const std::string& gold_path, const std::string& pred_path,
              const std::string& out_path, const std::string& labels_csv) {
  tooka::MetricBundle bundle;
  if (task == "qa") {
    std::vector<tooka::QAExample> examples;
    join_gold_predictions(gold_path, pred_path, [&](const std::string& id, const json& g, const json& p) {
      tooka::QAExample ex;
      ex.id = id;
      ex.answers = g.at("answers").get<std::vector<std::string>>();
      ex.prediction = p.get<std::string>();
      examples.push_back(std::move(ex));
    });
    bundle = tooka::qa_metrics(examples);
  } else if (task == "cls") {
    std::vector<tooka::LabelExample> examples;
    join_gold_predictions(gold_path, pred_path, [&](const std::string& id, const json& g, const json& p) {
      examples.push_back(tooka::LabelExample{id, g.at("label").get<std::string>(),
                                             p.get<std::string>()});
    });
    std::vector<std::string> label_set;
    if (!labels_csv.empty()) {
      std::istringstream ss(labels_csv);
      std::string item;
      while (std::getline(ss, item, ',')) {
        label_set.push_back(item);
      }
    }
    bundle = tooka::classification_metrics(examples, std::move(label_set));
  } else {
    std::vector<tooka::TaggedSequence> sequences;
    join_gold_predictions(gold_path, pred_path, [&](const std::string& id, const json& g, const json& p) {
      tooka::TaggedSequence seq;
      seq.id = id;
      if (g.contains("tokens")) {
        seq.tokens = g.at("tokens").get<std::vector<std::string>>();
      }
      seq.gold_tags = g.at("tags").get<std::vector<std::string>>();
      seq.predicted_tags = p.get<std::vector<std::string>>();
      sequences.push_back(std::move(seq));
    });
    bundle = tooka::ner_metrics(sequences);
  }
  std::string text = tooka::metric_bundle_to_json(bundle) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
    std::cout << text;
  }
  return 0;
}

int cmd_aggregate(const CommonOpts& common, const std::string& runs_path,
                  const std::string& out_path, const std::string& format) {
  tooka::PipelineConfig cfg = common.resolve();
  auto in = open_input(runs_path);
  std::vector<tooka::RunRecord> runs = tooka::parse_run_records(*in, cfg.sweep);
  std::vector<tooka::ModelRow> rows = tooka::aggregate_runs(runs);
  std::string table = tooka::render_table(
      rows, format == "tsv" ? tooka::TableFormat::kTsv : tooka::TableFormat::kMarkdown);
  if (out_path.empty() || out_path == "-") {
    std::cout << table;
  } else {
    write_text_file(out_path, table);
  }
  return 0;
}

int cmd_verify_tables(const std::string& fixtures_dir) {
  std::vector<std::string> files;
  if (!fs::is_directory(fixtures_dir)) {
    throw tooka::Error("fixtures directory " + fixtures_dir + " does not exist");
  }
  for (const auto& entry : fs::directory_iterator(fixtures_dir)) {
    if (entry.path().extension() == ".json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw tooka::Error("no fixture files under " + fixtures_dir);
  }
  // 0.05 is the printed-value tolerance; the epsilon absorbs binary
  // representation error on exact-boundary cases.
  constexpr double kTolerance = 0.05 + 1e-9;
  int failures = 0;
  for (const std::string& file : files) {
    tooka::TableFixture fx = tooka::load_table_fixture(file);
    double diff = std::abs(fx.row.average - fx.published_average);
    bool ok = diff <= kTolerance;
    failures += ok ? 0 : 1;
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << "Table " << fx.table << " " << fx.model
              << ": computed average " << tooka::format_1dp(fx.row.average) << " vs published "
              << tooka::format_1dp(fx.published_average) << "\n";
  }
  std::cout << (files.size() - failures) << "/" << files.size() << " fixtures reproduced\n";
  return failures == 0 ? 0 : 1;
}

int cmd_all(const CommonOpts& common, const std::string& corpus_flag,
            const std::string& out_dir_flag) {
  tooka::PipelineConfig cfg = common.resolve();
  if (!corpus_flag.empty()) {
    cfg.paths.corpus = corpus_flag;
  }
  if (!out_dir_flag.empty()) {
    cfg.paths.out_dir = out_dir_flag;
  }
  if (cfg.paths.corpus.empty()) {
    throw UsageError("no corpus: set paths.corpus in the config or pass --corpus");
  }
  const std::string out_dir = cfg.paths.out_dir;
  fs::create_directories(out_dir);
  const std::string ext = cfg.corpus_format == tooka::CorpusFormat::kText ? ".txt" : ".jsonl";
  const std::string normalized_path = out_dir + "/normalized" + ext;
  const std::string vocab_path = out_dir + "/vocab.json";
  const std::string shards_dir = out_dir + "/shards";

  {
    auto in = open_input(cfg.paths.corpus);
    auto out = open_output(normalized_path);
    auto src = tooka::make_document_source(*in, cfg.corpus_format);
    auto sink = tooka::make_document_sink(*out, cfg.corpus_format);
    tooka::NormalizationReport report =
        tooka::normalize_corpus(src, sink, cfg.normalizer, cfg.workers);
    out->flush();
    write_text_file(out_dir + "/normalize_report.json", report.to_json() + "\n");
    std::cerr << "normalize: " << report.documents << " documents\n";
  }
  {
    auto in = open_input(normalized_path);
    auto src = tooka::make_document_source(*in, cfg.corpus_format);
    auto [vocab, report] = tooka::train_bpe(src, cfg.tokenizer);
    write_text_file(vocab_path, vocab.to_json() + "\n");
    write_text_file(out_dir + "/train_report.json", report.to_json() + "\n");
    if (!report.reached_target) {
      std::cerr << "warning: vocabulary stopped at " << vocab.size() << " entries\n";
    }
    std::cerr << "train-bpe: " << report.merges << " merges\n";
  }
  tooka::Vocab vocab = load_vocab(vocab_path);
  uint64_t shard_count = 0;
  {
    auto in = open_input(normalized_path);
    tooka::PackReport report = pack_corpus(cfg, vocab, *in, shards_dir);
    shard_count = report.shards;
    write_text_file(out_dir + "/pack_report.json", report.to_json() + "\n");
    std::cerr << "pack: " << report.sequences << " sequences in " << report.shards
              << " shards\n";
  }
  {
    const uint64_t expected_hash = vocab.content_hash();
    tooka::MaskingReport total;
    for (uint64_t i = 0; i < shard_count; ++i) {
      const std::string shard_path = shards_dir + "/" + tooka::shard_file_name(i);
      tooka::PackedShard shard = tooka::read_shard(shard_path, &expected_hash);
      std::vector<tooka::MlmInstance> instances =
          tooka::build_instances(shard, cfg.masking, vocab, cfg.workers);
      total.merge(tooka::masking_report(instances));
    }
    write_text_file(out_dir + "/masking_report.json", total.to_json() + "\n");
    std::cerr << "mask: " << total.labeled_tokens << " labeled tokens over " << total.sequences
              << " sequences\n";
  }
  std::cout << "pipeline artifacts written under " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persian MLM pre-training data pipeline and evaluation scorer"};
  app.require_subcommand(1);

  int rc = 0;

  // normalize
  {
    auto common = std::make_shared<CommonOpts>();
    auto in = std::make_shared<std::string>("-");
    auto out = std::make_shared<std::string>("-");
    auto report = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand("normalize", "Normalize a corpus");
    common->attach(cmd);
    common->attach_format(cmd);
    cmd->add_option("--in", *in, "Input corpus path or -");
    cmd->add_option("--out", *out, "Output path or -");
    cmd->add_option("--report", *report, "Where to write the JSON report");
    cmd->callback([=, &rc] { rc = cmd_normalize(*common, *in, *out, *report); });
  }
  // train-bpe
  {
    auto common = std::make_shared<CommonOpts>();
    auto in = std::make_shared<std::string>("-");
    auto out = std::make_shared<std::string>();
    auto report = std::make_shared<std::string>();
    auto vocab_size = std::make_shared<std::optional<uint32_t>>();
    auto min_pair = std::make_shared<std::optional<uint64_t>>();
    CLI::App* cmd = app.add_subcommand("train-bpe", "Learn a BPE vocabulary");
    common->attach(cmd);
    common->attach_format(cmd);
    cmd->add_option("--in", *in, "Normalized corpus path or -");
    cmd->add_option("--out", *out, "Vocabulary JSON output")->required();
    cmd->add_option("--report", *report, "Where to write the JSON report");
    cmd->add_option("--vocab-size", *vocab_size, "Target vocabulary size (default 48000)");
    cmd->add_option("--min-pair-frequency", *min_pair, "Minimum pair count to merge (default 2)");
    cmd->callback(
        [=, &rc] { rc = cmd_train_bpe(*common, *in, *out, *report, *vocab_size, *min_pair); });
  }
  // encode
  {
    auto common = std::make_shared<CommonOpts>();
    auto vocab = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>("-");
    auto out = std::make_shared<std::string>("-");
    auto dropout = std::make_shared<std::optional<double>>();
    auto seed = std::make_shared<std::optional<uint64_t>>();
    auto add_specials = std::make_shared<bool>(false);
    CLI::App* cmd = app.add_subcommand("encode", "Encode a normalized corpus to token ids");
    common->attach(cmd);
    common->attach_format(cmd);
    cmd->add_option("--vocab", *vocab, "Vocabulary JSON")->required();
    cmd->add_option("--in", *in, "Normalized corpus path or -");
    cmd->add_option("--out", *out, "JSONL output path or -");
    cmd->add_option("--dropout", *dropout, "Merge dropout probability (default from config)");
    cmd->add_option("--seed", *seed, "Dropout seed");
    cmd->add_flag("--add-specials", *add_specials, "Wrap each document as [CLS] ... [SEP]");
    cmd->callback(
        [=, &rc] { rc = cmd_encode(*common, *vocab, *in, *out, *dropout, *seed, *add_specials); });
  }
  // decode
  {
    auto vocab = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>("-");
    auto out = std::make_shared<std::string>("-");
    CLI::App* cmd = app.add_subcommand("decode", "Decode token ids back to text");
    cmd->add_option("--vocab", *vocab, "Vocabulary JSON")->required();
    cmd->add_option("--in", *in, "JSONL input with an \"ids\" field, or -");
    cmd->add_option("--out", *out, "JSONL output path or -");
    cmd->callback([=, &rc] { rc = cmd_decode(*vocab, *in, *out); });
  }
  // pack
  {
    auto common = std::make_shared<CommonOpts>();
    auto vocab = std::make_shared<std::string>();
    auto in = std::make_shared<std::string>("-");
    auto out_dir = std::make_shared<std::string>();
    auto report = std::make_shared<std::string>();
    auto seq_len = std::make_shared<std::optional<uint32_t>>();
    auto shard_size = std::make_shared<std::optional<uint64_t>>();
    auto dropout = std::make_shared<std::optional<double>>();
    auto seed = std::make_shared<std::optional<uint64_t>>();
    CLI::App* cmd =
        app.add_subcommand("pack", "Encode a normalized corpus and pack it into shards");
    common->attach(cmd);
    common->attach_format(cmd);
    cmd->add_option("--vocab", *vocab, "Vocabulary JSON")->required();
    cmd->add_option("--in", *in, "Normalized corpus path or -");
    cmd->add_option("--out-dir", *out_dir, "Shard output directory")->required();
    cmd->add_option("--report", *report, "Where to write the JSON report");
    cmd->add_option("--seq-len", *seq_len, "Tokens per sequence (default 512)");
    cmd->add_option("--shard-size", *shard_size, "Sequences per shard (default 65536)");
    cmd->add_option("--dropout", *dropout, "Merge dropout probability");
    cmd->add_option("--seed", *seed, "Dropout seed");
    cmd->callback([=, &rc] {
      rc = cmd_pack(*common, *vocab, *in, *out_dir, *report, *seq_len, *shard_size, *dropout,
                    *seed);
    });
  }
  // mask
  {
    auto common = std::make_shared<CommonOpts>();
    auto shard = std::make_shared<std::string>();
    auto vocab = std::make_shared<std::string>();
    auto report = std::make_shared<std::string>();
    auto emit = std::make_shared<std::string>();
    auto rate = std::make_shared<std::optional<double>>();
    auto seed = std::make_shared<std::optional<uint64_t>>();
    auto whole_word = std::make_shared<std::optional<bool>>();
    CLI::App* cmd = app.add_subcommand("mask", "Build masked training instances from a shard");
    common->attach(cmd);
    cmd->add_option("--shard", *shard, "Shard file")->required();
    cmd->add_option("--vocab", *vocab, "Vocabulary JSON")->required();
    cmd->add_option("--report", *report, "Where to write the JSON report")->required();
    cmd->add_option("--emit", *emit, "Optional instance file to write");
    cmd->add_option("--rate", *rate, "Fraction of tokens to corrupt (default 0.15)");
    cmd->add_option("--seed", *seed, "Masking seed");
    cmd->add_option("--whole-word", *whole_word,
                    "true: mask whole words; false: mask single tokens");
    cmd->callback([=, &rc] {
      rc = cmd_mask(*common, *shard, *vocab, *report, *emit, *rate, *seed, *whole_word);
    });
  }
  // score
  {
    auto task = std::make_shared<std::string>();
    auto gold = std::make_shared<std::string>();
    auto pred = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto labels = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand("score", "Score predictions against gold data");
    cmd->add_option("--task", *task, "qa, cls, or ner")
        ->required()
        ->check(CLI::IsMember({"qa", "cls", "ner"}));
    cmd->add_option("--gold", *gold, "Gold JSONL")->required();
    cmd->add_option("--pred", *pred, "Prediction JSONL")->required();
    cmd->add_option("--out", *out, "Metrics JSON output (also printed)");
    cmd->add_option("--labels", *labels, "Classification label set, comma-separated");
    cmd->callback([=, &rc] { rc = cmd_score(*task, *gold, *pred, *out, *labels); });
  }
  // aggregate
  {
    auto common = std::make_shared<CommonOpts>();
    auto runs = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto format = std::make_shared<std::string>("markdown");
    CLI::App* cmd =
        app.add_subcommand("aggregate", "Select best runs and render the results table");
    common->attach(cmd);
    cmd->add_option("--runs", *runs, "Run records JSONL")->required();
    cmd->add_option("--out", *out, "Table output path (default stdout)");
    cmd->add_option("--table-format", *format, "markdown or tsv")
        ->check(CLI::IsMember({"markdown", "tsv"}));
    cmd->callback([=, &rc] { rc = cmd_aggregate(*common, *runs, *out, *format); });
  }
  // verify-tables
  {
    auto fixtures = std::make_shared<std::string>("fixtures/tables");
    CLI::App* cmd = app.add_subcommand(
        "verify-tables", "Check fixture tables: recomputed averages vs published ones");
    cmd->add_option("--fixtures", *fixtures, "Fixture directory (default fixtures/tables)");
    cmd->callback([=, &rc] { rc = cmd_verify_tables(*fixtures); });
  }
  // all
  {
    auto common = std::make_shared<CommonOpts>();
    auto corpus = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    CLI::App* cmd = app.add_subcommand("all", "Run the full pipeline: normalize, train, pack, mask");
    common->attach(cmd);
    common->attach_format(cmd);
    cmd->add_option("--corpus", *corpus, "Raw corpus (overrides paths.corpus)");
    cmd->add_option("--out-dir", *out_dir, "Artifact directory (overrides paths.out_dir)");
    cmd->callback([=, &rc] { rc = cmd_all(*common, *corpus, *out_dir); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tooka::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
