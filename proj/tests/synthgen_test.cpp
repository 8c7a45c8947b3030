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

#include "spatialdep/synthgen.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "spatialdep/io.hpp"
#include "spatialdep/metrics.hpp"

namespace spatialdep {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("spatialdep_synthgen_" + name);
  fs::remove_all(dir);
  return dir;
}

TEST(Generate, DepthOneHasNoGroupEdges) {
  const Corpus c = Generate(1, 30, SynthProfile{1, 0, Layout::kPlain});
  EXPECT_EQ(c.schema.depth, 1);
  for (const auto& d : c.docs) {
    EXPECT_TRUE(d.labels.groups.empty());
    const auto [s, g] = EncodeParse(d.labels, c.schema, static_cast<int>(d.doc.tokens.size()));
    EXPECT_EQ(g.EdgeCount(), 0u);
    EXPECT_GT(s.EdgeCount(), 0u);
  }
}

TEST(Generate, ReceiptSchema) {
  const FieldSchema s = SchemaForProfile(SynthProfile{});
  EXPECT_EQ(s.fields, (std::vector<std::string>{"store_name", "menu_name", "count", "unit_price", "price",
                                                "total_price"}));
  EXPECT_EQ(s.depth, 2);
  EXPECT_EQ(s.representative.at(2), "menu_name");
  const FieldSchema trimmed = SchemaForProfile(SynthProfile{2, 3, Layout::kPlain});
  EXPECT_EQ(trimmed.size(), 3u);
  EXPECT_TRUE(trimmed.FieldIndex("menu_name").has_value());
}

TEST(Generate, MatricesSatisfyStructuralConstraints) {
  for (int depth : {1, 2, 3}) {
    for (Layout layout : {Layout::kPlain, Layout::kTilted, Layout::kWarped, Layout::kTwoColumn}) {
      const Corpus c = Generate(20 + depth, 20, SynthProfile{depth, 0, layout});
      const int nf = static_cast<int>(c.schema.size());
      for (const auto& d : c.docs) {
        const auto [s, g] = EncodeParse(d.labels, c.schema, static_cast<int>(d.doc.tokens.size()));
        for (int i = nf; i < s.m.rows(); ++i) EXPECT_LE(s.m.row(i).sum(), 1) << d.doc.id;
        for (int j = 0; j < s.m.cols(); ++j) {
          EXPECT_LE(s.m.col(j).sum(), 1) << d.doc.id;  // no tail collisions
          EXPECT_LE(g.m.col(j).sum(), 1) << d.doc.id;
          EXPECT_EQ(s.m(nf + j, j), 0) << d.doc.id;
        }
        for (int i = 0; i < nf; ++i) EXPECT_EQ(g.m.row(i).sum(), 0) << d.doc.id;
      }
    }
  }
}

TEST(Generate, SplitIsEightyTenTen) {
  const Corpus c = Generate(3, 50, SynthProfile{});
  EXPECT_EQ(c.split.train.size(), 40u);
  EXPECT_EQ(c.split.dev.size(), 5u);
  EXPECT_EQ(c.split.test.size(), 5u);
  EXPECT_EQ(c.split.train.front(), c.docs.front().doc.id);
  EXPECT_EQ(c.split.test.back(), c.docs.back().doc.id);
}

TEST(Generate, FixedSeedGivesByteIdenticalFiles) {
  const fs::path a = TempDir("a"), b = TempDir("b");
  const SynthProfile p{3, 0, Layout::kWarped};
  WriteCorpus(Generate(17, 40, p), a);
  WriteCorpus(Generate(17, 40, p), b);
  for (const char* f : {"docs.jsonl", "parses.jsonl", "schema.json", "split.json"}) {
    const std::string x = Slurp(a / f);
    EXPECT_FALSE(x.empty()) << f;
    EXPECT_EQ(x, Slurp(b / f)) << f;
  }
  WriteCorpus(Generate(18, 40, p), b);
  EXPECT_NE(Slurp(a / "docs.jsonl"), Slurp(b / "docs.jsonl"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Generate, TwoColumnBreaksNaiveReadingOrder) {
  const Corpus c = Generate(5, 60, SynthProfile{2, 0, Layout::kTwoColumn});
  double total = 0.0;
  for (const auto& d : c.docs) total += NaiveChainBreakRate(d.doc, d.labels);
  EXPECT_GT(total / static_cast<double>(c.docs.size()), 0.5);
}

TEST(NaiveSerializer, RecoversPlainReceiptsFromOracleLabels) {
  const Corpus c = Generate(6, 60, SynthProfile{});
  std::vector<ChainParse> labels;
  for (const auto& d : c.docs) labels.push_back(d.labels);
  const std::vector<int> layers = InferFieldLayers(labels, c.schema);
  ASSERT_EQ(layers.size(), c.schema.size());
  EXPECT_EQ(layers[*c.schema.FieldIndex("menu_name")], 2);
  EXPECT_EQ(layers[*c.schema.FieldIndex("price")], 2);
  EXPECT_EQ(layers[*c.schema.FieldIndex("store_name")], 1);
  std::vector<Parse> pred, gt;
  for (const auto& d : c.docs) {
    const auto tags = TokenFieldLabels(d.labels, d.doc.tokens.size());
    pred.push_back(NaiveSerializerParse(d.doc, tags, layers, c.schema));
    gt.push_back(d.parse);
  }
  EXPECT_GT(ParseF1(pred, gt, MatchConfig{}).overall.f1(), 0.9);
}

TEST(Profiles, ParseAndNames) {
  const SynthProfile p = ParseProfile("depth=3,layout=two-column,n_fields=0");
  EXPECT_EQ(p.depth, 3);
  EXPECT_EQ(p.layout, Layout::kTwoColumn);
  EXPECT_EQ(ParseProfile("tilted").layout, Layout::kTilted);
  for (Layout l : {Layout::kPlain, Layout::kTilted, Layout::kWarped, Layout::kTwoColumn}) {
    EXPECT_EQ(LayoutFromName(LayoutName(l)), l);
  }
  EXPECT_THROW(ParseProfile("depth=9"), std::invalid_argument);
  EXPECT_THROW(Generate(1, 0, SynthProfile{}), std::invalid_argument);
}

}  // namespace
}  // namespace spatialdep
