// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tooka {

// Named metric values in [0, 100], in reporting order.
using MetricBundle = std::vector<std::pair<std::string, double>>;

std::string metric_bundle_to_json(const MetricBundle& bundle);

struct QAExample {
  std::string id;
  // Empty list marks an unanswerable question.
  std::vector<std::string> answers;
  // Empty string predicts no-answer.
  std::string prediction;

  bool has_answer() const { return !answers.empty(); }
};

struct LabelExample {
  std::string id;
  std::string gold;
  std::string predicted;
};

struct TaggedSequence {
  std::string id;
  std::vector<std::string> tokens;
  std::vector<std::string> gold_tags;
  std::vector<std::string> predicted_tags;
};

// Canonical answer form: default text normalization, ASCII lowercasing,
// punctuation removal, single-space whitespace. Idempotent.
std::string answer_normalize(const std::string& text);

// {EM, F1} plus {Has-EM, Has-F1} when any example is answerable. EM is exact
// normalized match against any gold; F1 the max whitespace-token-bag F1 over
// golds; unanswerable examples score 100 on both exactly when the raw
// prediction is empty. All values are means over examples, times 100.
MetricBundle qa_metrics(const std::vector<QAExample>& examples);

// {F1, Acc}: macro-F1 over label_set (a class absent from golds and
// predictions scores 0 and still counts) and plain accuracy. Empty label_set
// means the sorted union of observed labels.
MetricBundle classification_metrics(const std::vector<LabelExample>& examples,
                                    std::vector<std::string> label_set = {});

// {F1, Acc}: micro span F1 where a predicted entity counts only on exact
// type and boundary match, and token accuracy over entity-type projections
// (B-X and I-X both project to X). Invalid BIO transitions are repaired to
// B-X; repaired_count, when given, receives how many tags that touched.
// With no spans on either side F1 is 100.
MetricBundle ner_metrics(const std::vector<TaggedSequence>& sequences,
                         uint64_t* repaired_count = nullptr);

}  // namespace tooka
