// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <iosfwd>
#include <string>

namespace tooka {

struct RawDocument {
  std::string id;
  std::string text;
};

// Pull-based document stream: fills `doc` and returns true, or returns false
// at end of stream.
using DocumentSource = std::function<bool(RawDocument&)>;
using DocumentSink = std::function<void(const RawDocument&)>;

enum class CorpusFormat {
  kText,   // one document per line, UTF-8
  kJsonl,  // {"id": ..., "text": ...} per line
};

CorpusFormat corpus_format_from_name(const std::string& name);

// Sources validate UTF-8 and reject invalid byte sequences at ingestion,
// naming the offending document. Text-format ids are 1-based line numbers.
DocumentSource make_document_source(std::istream& in, CorpusFormat format);
DocumentSink make_document_sink(std::ostream& out, CorpusFormat format);

}  // namespace tooka
