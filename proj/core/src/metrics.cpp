// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/metrics.hpp"

#include <algorithm>
#include <iterator>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"
#include "tooka/normalizer.hpp"
#include "tooka/unicode.hpp"

namespace tooka {

namespace {

std::vector<std::string> whitespace_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::istringstream in(text);
  std::string t;
  while (in >> t) {
    tokens.push_back(std::move(t));
  }
  return tokens;
}

// Token-bag F1 in [0, 1]; two empty bags agree perfectly.
double bag_f1(const std::vector<std::string>& pred, const std::vector<std::string>& gold) {
  if (pred.empty() && gold.empty()) {
    return 1.0;
  }
  if (pred.empty() || gold.empty()) {
    return 0.0;
  }
  std::map<std::string, size_t> gold_counts;
  for (const std::string& t : gold) {
    ++gold_counts[t];
  }
  size_t overlap = 0;
  for (const std::string& t : pred) {
    auto it = gold_counts.find(t);
    if (it != gold_counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) {
    return 0.0;
  }
  double precision = static_cast<double>(overlap) / static_cast<double>(pred.size());
  double recall = static_cast<double>(overlap) / static_cast<double>(gold.size());
  return 2.0 * precision * recall / (precision + recall);
}

struct Span {
  std::string type;
  size_t start = 0;
  size_t end = 0;

  bool operator<(const Span& o) const {
    return std::tie(start, end, type) < std::tie(o.start, o.end, o.type);
  }
  bool operator==(const Span& o) const {
    return start == o.start && end == o.end && type == o.type;
  }
};

// BIO decode with repair: I-X opening a span (at start, after O, or after a
// different type) is treated as B-X and counted.
std::vector<Span> decode_bio(const std::vector<std::string>& tags, const std::string& seq_id,
                             uint64_t& repaired) {
  std::vector<Span> spans;
  std::string open_type;
  size_t open_start = 0;
  auto close = [&](size_t end) {
    if (!open_type.empty()) {
      spans.push_back(Span{open_type, open_start, end});
      open_type.clear();
    }
  };
  for (size_t i = 0; i < tags.size(); ++i) {
    const std::string& tag = tags[i];
    if (tag == "O") {
      close(i);
      continue;
    }
    if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-') {
      throw Error("sequence " + seq_id + ": malformed BIO tag \"" + tag + "\" at token " +
                  std::to_string(i));
    }
    std::string type = tag.substr(2);
    if (tag[0] == 'B') {
      close(i);
      open_type = std::move(type);
      open_start = i;
    } else if (open_type == type) {
      continue;  // legal continuation
    } else {
      ++repaired;
      close(i);
      open_type = std::move(type);
      open_start = i;
    }
  }
  close(tags.size());
  return spans;
}

std::string type_projection(const std::string& tag) {
  return tag == "O" ? tag : tag.substr(2);
}

}  // namespace

std::string metric_bundle_to_json(const MetricBundle& bundle) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [name, value] : bundle) {
    j[name] = value;
  }
  return j.dump(2);
}

std::string answer_normalize(const std::string& text) {
  static const NormalizationConfig config = NormalizationConfig::defaults();
  std::string normalized = normalize_text(text, config).first;

  std::string out;
  out.reserve(normalized.size());
  size_t i = 0;
  bool pending_space = false;
  while (i < normalized.size()) {
    char32_t cp = utf8_next(normalized, i);
    if (cp >= 'A' && cp <= 'Z') {
      cp += 'a' - 'A';
    }
    if (is_unicode_punct(cp)) {
      continue;
    }
    if (is_unicode_whitespace(cp)) {
      pending_space = true;
      continue;
    }
    if (pending_space && !out.empty()) {
      out.push_back(' ');
    }
    pending_space = false;
    utf8_append(out, cp);
  }
  return out;
}

MetricBundle qa_metrics(const std::vector<QAExample>& examples) {
  if (examples.empty()) {
    throw Error("qa_metrics requires at least one example");
  }
  double em_sum = 0, f1_sum = 0, has_em_sum = 0, has_f1_sum = 0;
  size_t has_count = 0;
  for (const QAExample& ex : examples) {
    double em = 0, f1 = 0;
    if (!ex.has_answer()) {
      em = f1 = ex.prediction.empty() ? 1.0 : 0.0;
    } else {
      std::string pred_norm = answer_normalize(ex.prediction);
      std::vector<std::string> pred_bag = whitespace_tokens(pred_norm);
      for (const std::string& gold : ex.answers) {
        std::string gold_norm = answer_normalize(gold);
        if (pred_norm == gold_norm) {
          em = 1.0;
        }
        f1 = std::max(f1, bag_f1(pred_bag, whitespace_tokens(gold_norm)));
      }
      ++has_count;
      has_em_sum += em;
      has_f1_sum += f1;
    }
    em_sum += em;
    f1_sum += f1;
  }
  const double n = static_cast<double>(examples.size());
  MetricBundle bundle{{"EM", 100.0 * em_sum / n}, {"F1", 100.0 * f1_sum / n}};
  if (has_count > 0) {
    bundle.emplace_back("Has-EM", 100.0 * has_em_sum / static_cast<double>(has_count));
    bundle.emplace_back("Has-F1", 100.0 * has_f1_sum / static_cast<double>(has_count));
  }
  return bundle;
}

MetricBundle classification_metrics(const std::vector<LabelExample>& examples,
                                    std::vector<std::string> label_set) {
  if (examples.empty()) {
    throw Error("classification_metrics requires at least one example");
  }
  if (label_set.empty()) {
    std::set<std::string> observed;
    for (const LabelExample& ex : examples) {
      observed.insert(ex.gold);
      observed.insert(ex.predicted);
    }
    label_set.assign(observed.begin(), observed.end());
  }
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < label_set.size(); ++i) {
    index[label_set[i]] = i;
  }
  std::vector<uint64_t> tp(label_set.size()), fp(label_set.size()), fn(label_set.size());
  uint64_t correct = 0;
  for (const LabelExample& ex : examples) {
    auto g = index.find(ex.gold);
    auto p = index.find(ex.predicted);
    if (g == index.end() || p == index.end()) {
      throw Error("example " + ex.id + ": label outside the label set");
    }
    if (g->second == p->second) {
      ++correct;
      ++tp[g->second];
    } else {
      ++fn[g->second];
      ++fp[p->second];
    }
  }
  double f1_sum = 0;
  for (size_t c = 0; c < label_set.size(); ++c) {
    if (tp[c] == 0) {
      continue;  // per-class F1 is 0 whether the class is absent or just missed
    }
    double precision = static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fp[c]);
    double recall = static_cast<double>(tp[c]) / static_cast<double>(tp[c] + fn[c]);
    f1_sum += 2.0 * precision * recall / (precision + recall);
  }
  return MetricBundle{
      {"F1", 100.0 * f1_sum / static_cast<double>(label_set.size())},
      {"Acc", 100.0 * static_cast<double>(correct) / static_cast<double>(examples.size())}};
}

MetricBundle ner_metrics(const std::vector<TaggedSequence>& sequences, uint64_t* repaired_count) {
  if (sequences.empty()) {
    throw Error("ner_metrics requires at least one sequence");
  }
  uint64_t repaired = 0;
  uint64_t gold_total = 0, pred_total = 0, matched = 0;
  uint64_t tokens = 0, token_hits = 0;
  for (const TaggedSequence& seq : sequences) {
    if (seq.gold_tags.size() != seq.predicted_tags.size() ||
        (!seq.tokens.empty() && seq.tokens.size() != seq.gold_tags.size())) {
      throw Error("sequence " + seq.id + ": tag rows must share one length");
    }
    std::vector<Span> gold = decode_bio(seq.gold_tags, seq.id, repaired);
    std::vector<Span> pred = decode_bio(seq.predicted_tags, seq.id, repaired);
    gold_total += gold.size();
    pred_total += pred.size();
    std::sort(gold.begin(), gold.end());
    std::sort(pred.begin(), pred.end());
    std::vector<Span> both;
    std::set_intersection(gold.begin(), gold.end(), pred.begin(), pred.end(),
                          std::back_inserter(both));
    matched += both.size();
    for (size_t i = 0; i < seq.gold_tags.size(); ++i) {
      ++tokens;
      if (type_projection(seq.gold_tags[i]) == type_projection(seq.predicted_tags[i])) {
        ++token_hits;
      }
    }
  }
  double f1;
  if (gold_total == 0 && pred_total == 0) {
    f1 = 1.0;  // vacuous agreement
  } else if (matched == 0) {
    f1 = 0.0;
  } else {
    double precision = static_cast<double>(matched) / static_cast<double>(pred_total);
    double recall = static_cast<double>(matched) / static_cast<double>(gold_total);
    f1 = 2.0 * precision * recall / (precision + recall);
  }
  if (repaired_count != nullptr) {
    *repaired_count = repaired;
  }
  double acc = tokens == 0 ? 1.0 : static_cast<double>(token_hits) / static_cast<double>(tokens);
  return MetricBundle{{"F1", 100.0 * f1}, {"Acc", 100.0 * acc}};
}

}  // namespace tooka
