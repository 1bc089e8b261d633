// Copyright 2026 The Tooka Authors
//
// Licensed under the Apache License, Version 2.0.
// See the LICENSE file for details.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace tooka {

// Splits text into words for subword tokenization. Lossless: concatenating
// the returned words reproduces the input byte for byte.
//
// A word is a maximal run of non-whitespace, non-punctuation codepoints,
// carrying any whitespace run that precedes it as a prefix. Each punctuation
// codepoint forms its own word (also with any pending whitespace prefix).
// A trailing whitespace run with nothing after it becomes a final
// whitespace-only word.
std::vector<std::string> pretokenize(std::string_view text);

}  // namespace tooka
