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

#include "spatialdep/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

namespace spatialdep {
namespace {

namespace fs = std::filesystem;

fs::path TempPath(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("spatialdep_io_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Json, DocumentAndLabelsRoundTrip) {
  const Corpus c = Generate(1, 6, SynthProfile{3, 0, Layout::kTilted});
  for (const auto& d : c.docs) {
    EXPECT_EQ(DocumentFromJson(ToJson(d.doc)), d.doc);
    EXPECT_EQ(ChainParseFromJson(ToJson(d.labels)), d.labels);
    EXPECT_EQ(ParseFromJson(ToJson(d.parse)), d.parse);
  }
  EXPECT_EQ(SchemaFromJson(ToJson(c.schema)), c.schema);
  EXPECT_EQ(ToJson(c.schema).at("format_version"), kFormatVersion);
}

TEST(Json, ConfigsRoundTrip) {
  MatchConfig m;
  m.tolerant_fields = {"menu_name"};
  m.matching = GroupMatching::kHungarian;
  m.ignore_whitespace = true;
  const MatchConfig m2 = MatchConfigFromJson(ToJson(m));
  EXPECT_EQ(m2.tolerant_fields, m.tolerant_fields);
  EXPECT_EQ(m2.matching, m.matching);
  EXPECT_TRUE(m2.ignore_whitespace);

  TrainConfig t;
  t.lr_encoder = 3e-3;
  t.epochs = 11;
  t.encoder.use_relative = false;
  t.augment.p_attach = 0.1;
  const TrainConfig t2 = TrainConfigFromJson(ToJson(t));
  EXPECT_EQ(t2.lr_encoder, 3e-3);
  EXPECT_EQ(t2.epochs, 11);
  EXPECT_FALSE(t2.encoder.use_relative);
  EXPECT_EQ(t2.augment.p_attach, 0.1);
  // Missing keys keep their defaults.
  EXPECT_EQ(TrainConfigFromJson(Json::object()).batch_size, TrainConfig{}.batch_size);
}

TEST(Json, MalformedInputsRaiseFormatError) {
  EXPECT_THROW(DocumentFromJson(Json{{"id", "x"}}), FormatError);
  EXPECT_THROW(DocumentFromJson(Json{{"id", 3}, {"width", 1}, {"height", 1}, {"tokens", Json::array()}}),
               FormatError);
  EXPECT_THROW(MatchConfigFromJson(Json{{"matching", "random"}}), FormatError);
}

TEST(JsonLines, ReportsLineNumbers) {
  std::istringstream in("{\"a\": 1}\n\n{\"a\": 2\n");
  int seen = 0;
  try {
    ForEachJsonLine(in, [&](const Json&, int) { ++seen; });
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_EQ(seen, 1);

  std::istringstream bad_doc("{\"id\": \"d\"}\n");
  try {
    ForEachJsonLine(bad_doc, [](const Json& j, int) { DocumentFromJson(j); });
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(Corpus, WriteThenReadRoundTrips) {
  const fs::path dir = TempPath("corpus");
  const Corpus c = Generate(2, 20, SynthProfile{});
  WriteCorpus(c, dir);
  const LoadedCorpus l = ReadCorpus(dir);
  EXPECT_EQ(l.schema, c.schema);
  ASSERT_EQ(l.examples.size(), c.docs.size());
  for (std::size_t k = 0; k < c.docs.size(); ++k) {
    EXPECT_EQ(l.examples[k].doc, c.docs[k].doc);
    EXPECT_EQ(l.examples[k].labels, c.docs[k].labels);
  }
  EXPECT_EQ(l.split.test, c.split.test);
  EXPECT_EQ(l.Select(l.split.dev).size(), c.split.dev.size());
  fs::remove_all(dir);
}

TEST(Corpus, LabelsOutsideSchemaAreSchemaMismatch) {
  const fs::path dir = TempPath("corpus_bad");
  Corpus c = Generate(3, 10, SynthProfile{});
  WriteCorpus(c, dir);
  FieldSchema narrow = c.schema;
  narrow.fields.resize(3);
  WriteJsonFile(dir / "schema.json", ToJson(narrow));
  EXPECT_THROW(ReadCorpus(dir), SchemaMismatch);
  fs::remove_all(dir);
}

TEST(MatrixRecord, RoundTripsPrediction) {
  const Corpus c = Generate(4, 1, SynthProfile{});
  const auto& d = c.docs.front();
  Prediction p;
  const auto [s, g] = EncodeParse(d.labels, c.schema, static_cast<int>(d.doc.tokens.size()));
  p.binary = {s, g};
  p.probs = {EdgeProbabilities{Relation::kSerial, s.n_field, s.m.cast<double>() * 0.75},
             EdgeProbabilities{Relation::kGroup, g.n_field, g.m.cast<double>() * 0.5}};
  p.tca[0].iterations = 2;
  p.tca[0].converged = true;
  const MatrixRecord rec{d.doc.id, d.doc.Texts(), p};
  const MatrixRecord back = MatrixRecordFromJson(ToJson(rec, true));
  EXPECT_EQ(back.id, rec.id);
  EXPECT_EQ(back.tokens, rec.tokens);
  EXPECT_EQ(back.prediction.binary[0], s);
  EXPECT_EQ(back.prediction.binary[1], g);
  EXPECT_EQ(back.prediction.probs[0].p, p.probs[0].p);
  EXPECT_EQ(back.prediction.tca[0].iterations, 2);

  Json no_prob = ToJson(rec, false);
  no_prob["rel_s"].erase("prob");
  EXPECT_EQ(MatrixRecordFromJson(no_prob).prediction.probs[0].p, s.m.cast<double>());
  Json wrong = ToJson(rec, false);
  wrong["n_text"] = 1;
  EXPECT_THROW(MatrixRecordFromJson(wrong), FormatError);
}

TEST(Checkpoint, SaveLoadReproducesEvaluationExactly) {
  const Corpus c = Generate(5, 20, SynthProfile{});
  std::vector<LabeledExample> ex;
  for (const auto& d : c.docs) ex.push_back({d.doc, d.labels});
  TrainConfig cfg;
  cfg.encoder.d_model = 16;
  cfg.encoder.n_heads = 2;
  cfg.encoder.d_head = 8;
  cfg.encoder.d_ff = 32;
  cfg.encoder.d_rel_component = 4;
  cfg.d_score = 16;
  cfg.epochs = 2;
  const std::vector<LabeledExample> train(ex.begin(), ex.begin() + 16);
  const std::vector<LabeledExample> dev(ex.begin() + 16, ex.end());
  const TrainResult r = Train(train, dev, c.schema, cfg);

  const fs::path path = TempPath("model.json");
  SaveModel(r.model, path);
  const Model loaded = LoadModel(path);
  const MatchConfig match = DefaultMatchConfig();
  const EvalReport a = Evaluate(r.model, dev, c.schema, 0.5, true, match);
  const EvalReport b = Evaluate(loaded, dev, c.schema, 0.5, true, match);
  EXPECT_EQ(a.rel_serial, b.rel_serial);
  EXPECT_EQ(a.rel_group, b.rel_group);
  EXPECT_EQ(a.parse.overall, b.parse.overall);
  for (const auto& d : dev) {
    EXPECT_EQ(Predict(r.model, d.doc).probs[0].p, Predict(loaded, d.doc).probs[0].p);
  }

  Json j = ReadJsonFile(path);
  j["schema"]["fields"][0] = "renamed";
  EXPECT_THROW(ModelFromJson(j), SchemaMismatch);
  j = ReadJsonFile(path);
  j["format_version"] = kFormatVersion + 1;
  EXPECT_THROW(ModelFromJson(j), FormatError);
  fs::remove(path);
}

}  // namespace
}  // namespace spatialdep
