// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#include "tooka/corpus.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "tooka/common.hpp"
#include "tooka/unicode.hpp"

namespace tooka {

CorpusFormat corpus_format_from_name(const std::string& name) {
  if (name == "text") return CorpusFormat::kText;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw Error("unknown corpus format '" + name + "' (expected text|jsonl)");
}

DocumentSource make_document_source(std::istream& in, CorpusFormat format) {
  auto line_no = std::make_shared<uint64_t>(0);
  if (format == CorpusFormat::kText) {
    return [&in, line_no](RawDocument& doc) {
      std::string line;
      if (!std::getline(in, line)) {
        if (in.bad()) throw Error("read failure after line " + std::to_string(*line_no));
        return false;
      }
      ++*line_no;
      if (!utf8_valid(line)) {
        throw Error("document " + std::to_string(*line_no) + ": invalid UTF-8");
      }
      doc.id = std::to_string(*line_no);
      doc.text = std::move(line);
      return true;
    };
  }
  return [&in, line_no](RawDocument& doc) {
    std::string line;
    if (!std::getline(in, line)) {
      if (in.bad()) throw Error("read failure after line " + std::to_string(*line_no));
      return false;
    }
    ++*line_no;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("text")) {
      throw Error("line " + std::to_string(*line_no) + ": expected {\"id\", \"text\"} object");
    }
    doc.id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump())
                              : std::to_string(*line_no);
    if (!j["text"].is_string()) {
      throw Error("document " + doc.id + ": \"text\" must be a string");
    }
    doc.text = j["text"].get<std::string>();
    // nlohmann validates UTF-8 during parse; keep the explicit check for
    // documents constructed elsewhere.
    if (!utf8_valid(doc.text)) {
      throw Error("document " + doc.id + ": invalid UTF-8");
    }
    return true;
  };
}

DocumentSink make_document_sink(std::ostream& out, CorpusFormat format) {
  if (format == CorpusFormat::kText) {
    return [&out](const RawDocument& doc) {
      out << doc.text << '\n';
      if (!out) throw Error("write failure at document " + doc.id);
    };
  }
  return [&out](const RawDocument& doc) {
    nlohmann::json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    out << j.dump() << '\n';
    if (!out) throw Error("write failure at document " + doc.id);
  };
}

}  // namespace tooka
