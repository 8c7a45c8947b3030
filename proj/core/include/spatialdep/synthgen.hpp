// Copyright 2026 The spatialdep Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SPATIALDEP_SYNTHGEN_HPP_
#define SPATIALDEP_SYNTHGEN_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spatialdep/decoder.hpp"
#include "spatialdep/document.hpp"

namespace spatialdep {

enum class Layout { kPlain, kTilted, kWarped, kTwoColumn };

std::string_view LayoutName(Layout layout);
Layout LayoutFromName(std::string_view name);

struct SynthProfile {
  int depth = 2;     // 1: name cards, 2: receipts, 3: receipts with sub-items
  int n_fields = 0;  // 0 keeps the full field inventory of the depth
  Layout layout = Layout::kPlain;
};

// Parses "depth=2,layout=plain,n_fields=0"; also accepts bare layout names.
SynthProfile ParseProfile(std::string_view text);

struct SynthDocument {
  Document doc;
  ChainParse labels;
  Parse parse;
};

struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> dev;
  std::vector<std::string> test;
};

struct Corpus {
  FieldSchema schema;
  std::vector<SynthDocument> docs;
  CorpusSplit split;
};

// Field inventory shipped with each depth, optionally trimmed to n_fields
// (representatives always kept).
FieldSchema SchemaForProfile(const SynthProfile& profile);

// Deterministic in (seed, n_docs, profile). Token order inside each document
// is shuffled; labels are canonical. Split is 80/10/10 by position.
Corpus Generate(std::uint64_t seed, int n_docs, const SynthProfile& profile);

// Naive reading-order baseline: tokens sorted by centre (y, x); consecutive
// tokens carrying the same field label form one chain; a chain of the layer-2
// representative opens a group that absorbs the following member chains.
// `token_fields[t]` is the field index of token t or -1; `field_layer[f]` is
// the layer whose groups field f joins (1 = never grouped).
Parse NaiveSerializerParse(const Document& doc, const std::vector<int>& token_fields,
                           const std::vector<int>& field_layer, const FieldSchema& schema);

// Field index per token from a token-level parse (-1 for unlabeled tokens).
std::vector<int> TokenFieldLabels(const ChainParse& labels, std::size_t n_tokens);

// For each field, the layer of the groups it appears in as a plain member
// (1 when it only occurs ungrouped). Representatives map to their own layer.
std::vector<int> InferFieldLayers(const std::vector<ChainParse>& labels, const FieldSchema& schema);

// Fraction of multi-token gt chains that are not contiguous and in order in
// the naive (y, x) reading order.
double NaiveChainBreakRate(const Document& doc, const ChainParse& labels);

}  // namespace spatialdep

#endif  // SPATIALDEP_SYNTHGEN_HPP_
