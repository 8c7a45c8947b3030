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

// Command-line front end: corpus synthesis, training, prediction, decoding,
// evaluation and inspection over JSON / JSONL files.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spatialdep/io.hpp"

namespace sd = spatialdep;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitFormat = 2;
constexpr int kExitSchema = 3;
constexpr std::size_t kChunk = 256;

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// Reads `path` in chunks, maps every line through `fn` on up to `jobs`
// threads and writes the results in input order.
void MapJsonLines(const std::string& path, std::ostream& out, int jobs,
                  const std::function<sd::Json(const sd::Json&)>& fn) {
  std::vector<std::pair<sd::Json, int>> chunk;
  auto flush = [&]() {
    std::vector<std::string> results(chunk.size());
    std::vector<std::optional<sd::FormatError>> format_errors(chunk.size());
    std::vector<std::exception_ptr> errors(chunk.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
      for (std::size_t k = begin; k < chunk.size(); k += stride) {
        try {
          results[k] = fn(chunk[k].first).dump();
        } catch (const sd::FormatError& e) {
          format_errors[k] = sd::FormatError(e.detail(), chunk[k].second, path);
        } catch (const sd::Json::exception& e) {
          format_errors[k] = sd::FormatError(e.what(), chunk[k].second, path);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), chunk.size());
    std::vector<std::thread> threads;
    for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(work, t, n_threads);
    work(0, std::max<std::size_t>(n_threads, 1));
    for (auto& t : threads) t.join();
    for (std::size_t k = 0; k < chunk.size(); ++k) {
      if (format_errors[k]) throw *format_errors[k];
      if (errors[k]) std::rethrow_exception(errors[k]);
      out << results[k] << '\n';
    }
    chunk.clear();
  };
  sd::ForEachJsonLine(path, [&](const sd::Json& j, int line) {
    chunk.emplace_back(j, line);
    if (chunk.size() == kChunk) flush();
  });
  flush();
}

int RunSynth(std::uint64_t seed, int n, const std::string& profile, const std::string& out) {
  if (n < 1) throw std::invalid_argument("--n must be >= 1");
  const sd::Corpus corpus = sd::Generate(seed, n, sd::ParseProfile(profile));
  sd::WriteCorpus(corpus, out);
  std::cerr << "wrote " << corpus.docs.size() << " documents to " << out << '\n';
  return 0;
}

int RunTrain(const std::string& corpus_dir, const std::string& config, const std::string& out,
             std::string log_path) {
  const sd::TrainConfig cfg =
      config.empty() ? sd::TrainConfig{} : sd::TrainConfigFromJson(sd::ReadJsonFile(config));
  const sd::LoadedCorpus corpus = sd::ReadCorpus(corpus_dir);
  const auto train = corpus.Select(corpus.split.train);
  const auto dev = corpus.Select(corpus.split.dev);
  if (log_path.empty()) log_path = out + ".log.csv";
  std::ofstream log = OpenOut(log_path);
  log << "epoch,train_loss,dev_rel_s_f1,dev_rel_g_f1,dev_parse_f1\n";
  const sd::TrainResult result = sd::Train(train, dev, corpus.schema, cfg, [&](const sd::EpochLog& e) {
    char line[160];
    std::snprintf(line, sizeof(line), "%d,%.9g,%.6f,%.6f,%.6f", e.epoch, e.train_loss,
                  e.dev_rel_s_f1, e.dev_rel_g_f1, e.dev_parse_f1);
    log << line << '\n' << std::flush;
    std::cerr << "epoch " << line << '\n';
  });
  sd::SaveModel(result.model, out);
  std::cerr << "best epoch " << result.best_epoch << ", checkpoint " << out << '\n';
  return 0;
}

int RunPredict(const std::string& ckpt, const std::string& docs, const std::string& out_path,
               bool no_tca, double p_th, int jobs) {
  if (!(p_th > 0.0 && p_th < 1.0)) throw std::invalid_argument("--p-th must lie in (0, 1)");
  const sd::Model model = sd::LoadModel(ckpt);
  std::ofstream out = OpenOut(out_path);
  MapJsonLines(docs, out, jobs, [&](const sd::Json& j) {
    const sd::Document doc = sd::DocumentFromJson(j);
    sd::MatrixRecord rec{doc.id, doc.Texts(), sd::Predict(model, doc, p_th, !no_tca)};
    return sd::ToJson(rec, !no_tca);
  });
  return 0;
}

sd::Json DiagnosticsToJson(const std::vector<sd::Diagnostic>& diags) {
  sd::Json arr = sd::Json::array();
  for (const auto& d : diags) {
    arr.push_back({{"kind", std::string(sd::DiagnosticKindName(d.kind))}, {"message", d.message}});
  }
  return arr;
}

sd::DecodeResult DecodeRecord(const sd::MatrixRecord& rec, const sd::FieldSchema& schema) {
  if (rec.prediction.binary[0].n_field != static_cast<int>(schema.size())) {
    throw sd::SchemaMismatch("document '" + rec.id + "' has " +
                             std::to_string(rec.prediction.binary[0].n_field) +
                             " field rows; schema has " + std::to_string(schema.size()));
  }
  return sd::Decode(rec.prediction.binary[0], rec.prediction.binary[1], schema, rec.tokens,
                    &rec.prediction.probs[1].p);
}

int RunDecode(const std::string& matrices, const std::string& schema_path,
              const std::string& out_path, int jobs) {
  const sd::FieldSchema schema = sd::SchemaFromJson(sd::ReadJsonFile(schema_path));
  std::ofstream out = OpenOut(out_path);
  MapJsonLines(matrices, out, jobs, [&](const sd::Json& j) {
    const sd::MatrixRecord rec = sd::MatrixRecordFromJson(j);
    const sd::DecodeResult res = DecodeRecord(rec, schema);
    return sd::Json{{"id", rec.id},
                    {"parse", sd::ToJson(res.parse)},
                    {"labels", sd::ToJson(res.chains)},
                    {"diagnostics", DiagnosticsToJson(res.diagnostics)}};
  });
  return 0;
}

int RunEncode(const std::string& corpus_dir, const std::string& out_path) {
  const sd::LoadedCorpus corpus = sd::ReadCorpus(corpus_dir);
  std::ofstream out = OpenOut(out_path);
  const int n_field = static_cast<int>(corpus.schema.size());
  for (const auto& ex : corpus.examples) {
    const int n = static_cast<int>(ex.doc.tokens.size());
    auto [s, g] = sd::EncodeParse(ex.labels, corpus.schema, n);
    sd::MatrixRecord rec;
    rec.id = ex.doc.id;
    rec.tokens = ex.doc.Texts();
    rec.prediction.binary = {s, g};
    for (sd::Relation r : sd::kRelations) {
      const std::size_t k = static_cast<std::size_t>(r);
      rec.prediction.probs[k] =
          sd::EdgeProbabilities{r, n_field, rec.prediction.binary[k].m.cast<double>()};
    }
    out << sd::ToJson(rec, false).dump() << '\n';
  }
  return 0;
}

std::map<std::string, sd::Json> ReadById(const std::string& path) {
  std::map<std::string, sd::Json> out;
  sd::ForEachJsonLine(path, [&](const sd::Json& j, int) {
    if (!j.contains("id") || !j["id"].is_string()) throw sd::FormatError("missing key 'id'");
    out[j["id"].get<std::string>()] = j;
  });
  return out;
}

int RunEval(const std::string& pred_path, const std::string& gt_path, const std::string& config,
            bool edges, const std::string& schema_path, const std::string& out_path) {
  const sd::MatchConfig cfg =
      config.empty() ? sd::DefaultMatchConfig() : sd::MatchConfigFromJson(sd::ReadJsonFile(config));
  const auto gt = ReadById(gt_path);
  sd::Json report{{"format_version", sd::kFormatVersion}, {"config", sd::ToJson(cfg)}};
  std::optional<sd::FieldSchema> schema;
  if (!schema_path.empty()) schema = sd::SchemaFromJson(sd::ReadJsonFile(schema_path));
  if (edges && !schema) throw std::invalid_argument("--edges needs --schema");

  sd::ParseScore parse_score;
  std::array<sd::PRF, 2> rel{};
  std::size_t n_docs = 0;
  sd::ForEachJsonLine(pred_path, [&](const sd::Json& j, int) {
    const std::string id = j.at("id").get<std::string>();
    const auto it = gt.find(id);
    if (it == gt.end()) throw sd::FormatError("no ground truth for '" + id + "'");
    const sd::Json& g = it->second;
    ++n_docs;
    if (edges) {
      const sd::MatrixRecord rec = sd::MatrixRecordFromJson(j);
      if (rec.prediction.binary[0].n_field != static_cast<int>(schema->size())) {
        throw sd::SchemaMismatch("matrices of '" + id + "' do not match the schema");
      }
      sd::ChainParse labels = sd::ChainParseFromJson(g.at("labels"));
      std::pair<sd::RelationMatrix, sd::RelationMatrix> truth;
      try {
        truth = sd::EncodeParse(labels, *schema, static_cast<int>(rec.tokens.size()));
      } catch (const std::invalid_argument& e) {
        throw sd::SchemaMismatch("labels of '" + id + "': " + e.what());
      }
      rel[0] += sd::EdgePRF(rec.prediction.binary[0], truth.first);
      rel[1] += sd::EdgePRF(rec.prediction.binary[1], truth.second);
      const sd::DecodeResult res = DecodeRecord(rec, *schema);
      parse_score += sd::ScoreParse(res.parse, sd::ParseFromJson(g.at("parse")), cfg);
    } else {
      parse_score +=
          sd::ScoreParse(sd::ParseFromJson(j.at("parse")), sd::ParseFromJson(g.at("parse")), cfg);
    }
  });
  if (n_docs != gt.size()) {
    std::cerr << "warning: " << gt.size() - std::min(gt.size(), n_docs)
              << " ground-truth documents have no prediction\n";
  }
  const sd::Json ps = sd::ToJson(parse_score);
  report["documents"] = n_docs;
  report["overall"] = ps["overall"];
  report["per_field"] = ps["per_field"];
  sd::Json per_relation = sd::Json::object();
  if (edges) {
    per_relation["rel_s"] = sd::ToJson(rel[0]);
    per_relation["rel_g"] = sd::ToJson(rel[1]);
  }
  report["per_relation"] = per_relation;
  if (out_path.empty()) {
    std::cout << report.dump(2) << '\n';
  } else {
    sd::WriteJsonFile(out_path, report);
  }
  return 0;
}

void PrintGroup(const sd::Group& g, int indent) {
  std::cout << std::string(static_cast<std::size_t>(indent), ' ') << "group\n";
  for (const auto& [k, v] : g.members) {
    std::cout << std::string(static_cast<std::size_t>(indent + 2), ' ') << k << ": " << v << '\n';
  }
  for (const auto& s : g.subgroups) PrintGroup(s, indent + 2);
}

int RunInspect(const std::string& id, const std::string& matrices, const std::string& schema_path) {
  const sd::FieldSchema schema = sd::SchemaFromJson(sd::ReadJsonFile(schema_path));
  bool found = false;
  sd::ForEachJsonLine(matrices, [&](const sd::Json& j, int) {
    if (found || j.value("id", "") != id) return;
    found = true;
    const sd::MatrixRecord rec = sd::MatrixRecordFromJson(j);
    const sd::DecodeResult res = DecodeRecord(rec, schema);
    std::cout << "document " << id << " (" << rec.tokens.size() << " tokens)\n";
    for (sd::Relation r : sd::kRelations) {
      const auto& t = rec.prediction.tca[static_cast<std::size_t>(r)];
      std::cout << sd::RelationName(r) << ": "
                << rec.prediction.binary[static_cast<std::size_t>(r)].EdgeCount() << " edges";
      if (t.iterations > 0) std::cout << ", tca iterations " << t.iterations << (t.converged ? "" : " (not converged)");
      std::cout << '\n';
    }
    std::cout << "chains\n";
    auto print_chain = [&](const sd::FieldChain& c) {
      std::cout << "  " << schema.fields[c.field] << " [";
      for (std::size_t k = 0; k < c.tokens.size(); ++k) {
        std::cout << (k ? " " : "") << c.tokens[k] << ':' << rec.tokens[static_cast<std::size_t>(c.tokens[k])];
      }
      std::cout << "]\n";
    };
    std::function<void(const sd::ChainGroup&)> walk = [&](const sd::ChainGroup& g) {
      for (const auto& m : g.members) print_chain(m);
      for (const auto& s : g.subgroups) walk(s);
    };
    for (const auto& g : res.chains.groups) walk(g);
    for (const auto& c : res.chains.ungrouped) print_chain(c);
    std::cout << "groups\n";
    for (const auto& g : res.parse.groups) PrintGroup(g, 2);
    std::cout << "ungrouped\n";
    for (const auto& [k, v] : res.parse.ungrouped) std::cout << "  " << k << ": " << v << '\n';
    std::cout << "diagnostics (" << res.diagnostics.size() << ")\n";
    for (const auto& d : res.diagnostics) {
      std::cout << "  " << sd::DiagnosticKindName(d.kind) << ": " << d.message << '\n';
    }
  });
  if (!found) throw std::invalid_argument("document '" + id + "' not found in " + matrices);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial dependency parsing of document tokens"};
  app.require_subcommand(0, 1);
  bool print_version = false;
  app.add_flag("--format-version", print_version, "Print the file format version and exit");

  std::uint64_t seed = 7;
  int n_docs = 100;
  std::string profile = "depth=2,layout=plain";
  std::string out, corpus, config, log, ckpt, docs, matrices, schema, pred, gt, doc_id;
  bool no_tca = false;
  bool edges = false;
  double p_th = 0.5;
  int jobs = 1;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus directory");
  synth->add_option("--seed", seed);
  synth->add_option("--n", n_docs)->required();
  synth->add_option("--profile", profile, "e.g. depth=2,layout=two-column");
  synth->add_option("--out", out)->required();

  auto* train = app.add_subcommand("train", "Train a model on a corpus directory");
  train->add_option("--corpus", corpus)->required();
  train->add_option("--config", config, "train.json");
  train->add_option("--out", out)->required();
  train->add_option("--log", log, "CSV training log (default <out>.log.csv)");

  auto* predict = app.add_subcommand("predict", "Score documents and write relation matrices");
  predict->add_option("--ckpt", ckpt)->required();
  predict->add_option("--docs", docs)->required();
  predict->add_option("--out", out)->required();
  predict->add_flag("--no-tca", no_tca);
  predict->add_option("--p-th", p_th);
  predict->add_option("--jobs", jobs);

  auto* decode = app.add_subcommand("decode", "Decode relation matrices into parses");
  decode->add_option("--matrices", matrices)->required();
  decode->add_option("--schema", schema)->required();
  decode->add_option("--out", out)->required();
  decode->add_option("--jobs", jobs);

  auto* encode = app.add_subcommand("encode", "Write ground-truth relation matrices of a corpus");
  encode->add_option("--corpus", corpus)->required();
  encode->add_option("--out", out)->required();

  auto* eval = app.add_subcommand("eval", "Score predicted parses (or matrices) against ground truth");
  eval->add_option("--pred", pred)->required();
  eval->add_option("--gt", gt)->required();
  eval->add_option("--config", config, "match.json");
  eval->add_flag("--edges", edges, "--pred holds matrices; also report edge scores");
  eval->add_option("--schema", schema);
  eval->add_option("--out", out);

  auto* inspect = app.add_subcommand("inspect", "Print chains, groups and diagnostics of one document");
  inspect->add_option("--doc", doc_id)->required();
  inspect->add_option("--matrices", matrices)->required();
  inspect->add_option("--schema", schema)->required();

  CLI11_PARSE(app, argc, argv);
  if (print_version) {
    std::cout << sd::kFormatVersion << '\n';
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return kExitFailure;
  }
  std::cerr << "spatialdep format_version " << sd::kFormatVersion << '\n';

  try {
    if (*synth) return RunSynth(seed, n_docs, profile, out);
    if (*train) return RunTrain(corpus, config, out, log);
    if (*predict) return RunPredict(ckpt, docs, out, no_tca, p_th, jobs);
    if (*decode) return RunDecode(matrices, schema, out, jobs);
    if (*encode) return RunEncode(corpus, out);
    if (*eval) return RunEval(pred, gt, config, edges, schema, out);
    if (*inspect) return RunInspect(doc_id, matrices, schema);
  } catch (const sd::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitFormat;
  } catch (const sd::SchemaMismatch& e) {
    std::cerr << "schema mismatch: " << e.what() << '\n';
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
