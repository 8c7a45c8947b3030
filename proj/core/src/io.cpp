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

#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace spatialdep {

namespace {

template <typename T>
T Get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing key '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <typename T>
void GetOptional(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = Get<T>(j, key);
}

Json KeyValuesToJson(const std::vector<KeyValue>& kvs) {
  Json arr = Json::array();
  for (const auto& [k, v] : kvs) arr.push_back(Json::array({k, v}));
  return arr;
}

std::vector<KeyValue> KeyValuesFromJson(const Json& j) {
  if (!j.is_array()) throw FormatError("key-value list must be an array");
  std::vector<KeyValue> out;
  for (const Json& kv : j) {
    if (!kv.is_array() || kv.size() != 2 || !kv[0].is_string() || !kv[1].is_string()) {
      throw FormatError("key-value entry must be [field, value]");
    }
    out.emplace_back(kv[0].get<std::string>(), kv[1].get<std::string>());
  }
  return out;
}

Json GroupToJson(const Group& g) {
  Json subs = Json::array();
  for (const auto& s : g.subgroups) subs.push_back(GroupToJson(s));
  return Json{{"members", KeyValuesToJson(g.members)}, {"subgroups", subs}};
}

Group GroupFromJson(const Json& j) {
  Group g;
  g.members = KeyValuesFromJson(j.value("members", Json::array()));
  for (const Json& s : j.value("subgroups", Json::array())) g.subgroups.push_back(GroupFromJson(s));
  return g;
}

Json ChainToJson(const FieldChain& c) {
  return Json{{"field", c.field}, {"tokens", c.tokens}};
}

FieldChain ChainFromJson(const Json& j) {
  FieldChain c;
  c.field = Get<std::size_t>(j, "field");
  c.tokens = Get<std::vector<int>>(j, "tokens");
  return c;
}

Json ChainGroupToJson(const ChainGroup& g) {
  Json members = Json::array();
  for (const auto& m : g.members) members.push_back(ChainToJson(m));
  Json subs = Json::array();
  for (const auto& s : g.subgroups) subs.push_back(ChainGroupToJson(s));
  return Json{{"members", members}, {"subgroups", subs}};
}

ChainGroup ChainGroupFromJson(const Json& j) {
  ChainGroup g;
  const Json members = Get<Json>(j, "members");
  for (const Json& m : members) g.members.push_back(ChainFromJson(m));
  for (const Json& s : j.value("subgroups", Json::array())) {
    g.subgroups.push_back(ChainGroupFromJson(s));
  }
  if (g.members.empty()) throw FormatError("group without members");
  return g;
}

template <typename Matrix>
Json DenseToJson(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if constexpr (std::is_same_v<typename Matrix::Scalar, std::uint8_t>) {
        row.push_back(static_cast<int>(m(i, k)));
      } else {
        row.push_back(m(i, k));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat DenseFromJson(const Json& j, int n_field, int n_text) {
  if (!j.is_array() || static_cast<int>(j.size()) != n_field + n_text) {
    throw FormatError("matrix must have n_field + n_text rows");
  }
  Mat m(n_field + n_text, n_text);
  for (int i = 0; i < m.rows(); ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n_text) {
      throw FormatError("matrix row must have n_text entries");
    }
    for (int k = 0; k < n_text; ++k) {
      if (!row[static_cast<std::size_t>(k)].is_number()) throw FormatError("non-numeric matrix entry");
      m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
    }
  }
  return m;
}

Json MatToJson(const Mat& m) {
  return Json{{"rows", m.rows()},
              {"cols", m.cols()},
              {"data", std::vector<double>(m.data(), m.data() + m.size())}};
}

std::string_view MatchingName(GroupMatching m) {
  return m == GroupMatching::kHungarian ? "hungarian" : "greedy";
}

}  // namespace

Json ToJson(const Document& doc) {
  Json tokens = Json::array();
  for (const Token& t : doc.tokens) {
    Json quad = Json::array();
    for (const Point& p : t.box.corners) quad.push_back(Json::array({p.x, p.y}));
    tokens.push_back(Json{{"text", t.text}, {"quad", quad}});
  }
  return Json{{"id", doc.id}, {"width", doc.width}, {"height", doc.height}, {"tokens", tokens}};
}

Document DocumentFromJson(const Json& j) {
  Document doc;
  doc.id = Get<std::string>(j, "id");
  doc.width = Get<double>(j, "width");
  doc.height = Get<double>(j, "height");
  const Json tokens = Get<Json>(j, "tokens");
  for (const Json& t : tokens) {
    Token tok;
    tok.text = Get<std::string>(t, "text");
    const Json quad = Get<Json>(t, "quad");
    if (!quad.is_array() || quad.size() != 4) throw FormatError("quad must have 4 corners");
    for (std::size_t c = 0; c < 4; ++c) {
      if (!quad[c].is_array() || quad[c].size() != 2 || !quad[c][0].is_number() ||
          !quad[c][1].is_number()) {
        throw FormatError("quad corner must be [x, y]");
      }
      tok.box.corners[c] = Point{quad[c][0].get<double>(), quad[c][1].get<double>()};
    }
    doc.tokens.push_back(std::move(tok));
  }
  return doc;
}

Json ToJson(const FieldSchema& schema) {
  Json rep = Json::object();
  for (const auto& [layer, field] : schema.representative) rep[std::to_string(layer)] = field;
  return Json{{"format_version", kFormatVersion},
              {"fields", schema.fields},
              {"depth", schema.depth},
              {"representative", rep}};
}

FieldSchema SchemaFromJson(const Json& j) {
  FieldSchema s;
  s.fields = Get<std::vector<std::string>>(j, "fields");
  s.depth = Get<int>(j, "depth");
  const Json rep = Get<Json>(j, "representative");
  for (const auto& [layer, field] : rep.items()) {
    try {
      s.representative[std::stoi(layer)] = field.get<std::string>();
    } catch (const std::exception&) {
      throw FormatError("bad representative entry '" + layer + "'");
    }
  }
  try {
    s.Validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return s;
}

Json ToJson(const Parse& parse) {
  Json groups = Json::array();
  for (const auto& g : parse.groups) groups.push_back(GroupToJson(g));
  return Json{{"groups", groups}, {"ungrouped", KeyValuesToJson(parse.ungrouped)}};
}

Parse ParseFromJson(const Json& j) {
  Parse p;
  const Json groups = Get<Json>(j, "groups");
  for (const Json& g : groups) p.groups.push_back(GroupFromJson(g));
  p.ungrouped = KeyValuesFromJson(Get<Json>(j, "ungrouped"));
  return p;
}

Json ToJson(const ChainParse& parse) {
  Json groups = Json::array();
  for (const auto& g : parse.groups) groups.push_back(ChainGroupToJson(g));
  Json ungrouped = Json::array();
  for (const auto& c : parse.ungrouped) ungrouped.push_back(ChainToJson(c));
  return Json{{"groups", groups}, {"ungrouped", ungrouped}};
}

ChainParse ChainParseFromJson(const Json& j) {
  ChainParse p;
  const Json groups = Get<Json>(j, "groups");
  const Json ungrouped = Get<Json>(j, "ungrouped");
  for (const Json& g : groups) p.groups.push_back(ChainGroupFromJson(g));
  for (const Json& c : ungrouped) p.ungrouped.push_back(ChainFromJson(c));
  return p;
}

Json ToJson(const EdgeProbabilities& p) { return DenseToJson(p.p); }
Json ToJson(const RelationMatrix& m) { return DenseToJson(m.m); }

EdgeProbabilities ProbabilitiesFromJson(const Json& j, Relation r) {
  const int n_field = Get<int>(j, "n_field");
  const int n_text = Get<int>(j, "n_text");
  return EdgeProbabilities{r, n_field, DenseFromJson(Get<Json>(j, "prob"), n_field, n_text)};
}

RelationMatrix RelationMatrixFromJson(const Json& j, Relation r) {
  const int n_field = Get<int>(j, "n_field");
  const int n_text = Get<int>(j, "n_text");
  const Mat dense = DenseFromJson(Get<Json>(j, "binary"), n_field, n_text);
  RelationMatrix out = RelationMatrix::Zero(r, n_field, n_text);
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index k = 0; k < dense.cols(); ++k) {
      if (dense(i, k) != 0.0 && dense(i, k) != 1.0) throw FormatError("binary entry not 0/1");
      out.m(i, k) = dense(i, k) != 0.0 ? 1 : 0;
    }
  }
  return out;
}

Json ToJson(const MatchConfig& cfg) {
  return Json{{"tolerant_fields", cfg.tolerant_fields},
              {"max_ed", cfg.max_ed},
              {"max_ed_ratio", cfg.max_ed_ratio},
              {"ignore_whitespace", cfg.ignore_whitespace},
              {"matching", std::string(MatchingName(cfg.matching))}};
}

MatchConfig MatchConfigFromJson(const Json& j) {
  if (!j.is_object()) throw FormatError("match config must be an object");
  MatchConfig cfg;
  GetOptional(j, "tolerant_fields", cfg.tolerant_fields);
  GetOptional(j, "max_ed", cfg.max_ed);
  GetOptional(j, "max_ed_ratio", cfg.max_ed_ratio);
  GetOptional(j, "ignore_whitespace", cfg.ignore_whitespace);
  if (j.contains("matching")) {
    const auto m = Get<std::string>(j, "matching");
    if (m == "greedy") {
      cfg.matching = GroupMatching::kGreedy;
    } else if (m == "hungarian") {
      cfg.matching = GroupMatching::kHungarian;
    } else {
      throw FormatError("unknown matching '" + m + "'");
    }
  }
  try {
    cfg.Validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return cfg;
}

Json ToJson(const TrainConfig& cfg) {
  const auto& e = cfg.encoder;
  const auto& q = cfg.quantization;
  const auto& a = cfg.augment;
  return Json{
      {"lr_encoder", cfg.lr_encoder},
      {"lr_scorer", cfg.lr_scorer},
      {"beta1", cfg.beta1},
      {"beta2", cfg.beta2},
      {"adam_eps", cfg.adam_eps},
      {"batch_size", cfg.batch_size},
      {"epochs", cfg.epochs},
      {"p_th", cfg.p_th},
      {"seed", cfg.seed},
      {"grad_clip", cfg.grad_clip},
      {"d_score", cfg.d_score},
      {"vocab_min_count", cfg.vocab_min_count},
      {"tca", cfg.tca},
      {"encoder",
       {{"n_layers", e.n_layers},
        {"d_model", e.d_model},
        {"n_heads", e.n_heads},
        {"d_head", e.d_head},
        {"d_rel_component", e.d_rel_component},
        {"d_ff", e.d_ff},
        {"use_relative", e.use_relative}}},
      {"quantization",
       {{"xy_bin_fraction", q.xy_bin_fraction},
        {"dist_bin_fraction", q.dist_bin_fraction},
        {"max_bin", q.max_bin},
        {"n_angle_bins", q.n_angle_bins}}},
      {"augment",
       {{"enabled", a.enabled},
        {"max_rotation_deg", a.max_rotation_deg},
        {"warp_probability", a.warp_probability},
        {"max_warp_amplitude_fraction", a.max_warp_amplitude_fraction},
        {"min_wavelength_fraction", a.min_wavelength_fraction},
        {"max_wavelength_fraction", a.max_wavelength_fraction},
        {"p_delete", a.p_delete},
        {"p_insert", a.p_insert},
        {"p_attach", a.p_attach}}},
  };
}

TrainConfig TrainConfigFromJson(const Json& j) {
  if (!j.is_object()) throw FormatError("train config must be an object");
  TrainConfig cfg;
  GetOptional(j, "lr_encoder", cfg.lr_encoder);
  GetOptional(j, "lr_scorer", cfg.lr_scorer);
  GetOptional(j, "beta1", cfg.beta1);
  GetOptional(j, "beta2", cfg.beta2);
  GetOptional(j, "adam_eps", cfg.adam_eps);
  GetOptional(j, "batch_size", cfg.batch_size);
  GetOptional(j, "epochs", cfg.epochs);
  GetOptional(j, "p_th", cfg.p_th);
  GetOptional(j, "seed", cfg.seed);
  GetOptional(j, "grad_clip", cfg.grad_clip);
  GetOptional(j, "d_score", cfg.d_score);
  GetOptional(j, "vocab_min_count", cfg.vocab_min_count);
  GetOptional(j, "tca", cfg.tca);
  if (j.contains("encoder")) {
    const Json& e = j["encoder"];
    GetOptional(e, "n_layers", cfg.encoder.n_layers);
    GetOptional(e, "d_model", cfg.encoder.d_model);
    GetOptional(e, "n_heads", cfg.encoder.n_heads);
    GetOptional(e, "d_head", cfg.encoder.d_head);
    GetOptional(e, "d_rel_component", cfg.encoder.d_rel_component);
    GetOptional(e, "d_ff", cfg.encoder.d_ff);
    GetOptional(e, "use_relative", cfg.encoder.use_relative);
  }
  if (j.contains("quantization")) {
    const Json& q = j["quantization"];
    GetOptional(q, "xy_bin_fraction", cfg.quantization.xy_bin_fraction);
    GetOptional(q, "dist_bin_fraction", cfg.quantization.dist_bin_fraction);
    GetOptional(q, "max_bin", cfg.quantization.max_bin);
    GetOptional(q, "n_angle_bins", cfg.quantization.n_angle_bins);
  }
  if (j.contains("augment")) {
    const Json& a = j["augment"];
    GetOptional(a, "enabled", cfg.augment.enabled);
    GetOptional(a, "max_rotation_deg", cfg.augment.max_rotation_deg);
    GetOptional(a, "warp_probability", cfg.augment.warp_probability);
    GetOptional(a, "max_warp_amplitude_fraction", cfg.augment.max_warp_amplitude_fraction);
    GetOptional(a, "min_wavelength_fraction", cfg.augment.min_wavelength_fraction);
    GetOptional(a, "max_wavelength_fraction", cfg.augment.max_wavelength_fraction);
    GetOptional(a, "p_delete", cfg.augment.p_delete);
    GetOptional(a, "p_insert", cfg.augment.p_insert);
    GetOptional(a, "p_attach", cfg.augment.p_attach);
  }
  try {
    cfg.Validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return cfg;
}

Json ToJson(const PRF& prf) {
  return Json{{"tp", prf.tp},
              {"fp", prf.fp},
              {"fn", prf.fn},
              {"precision", prf.precision()},
              {"recall", prf.recall()},
              {"f1", prf.f1()}};
}

Json ToJson(const ParseScore& score) {
  Json per_field = Json::object();
  for (const auto& [field, prf] : score.per_field) per_field[field] = ToJson(prf);
  return Json{{"overall", ToJson(score.overall)}, {"per_field", per_field}};
}

Json ToJson(const MatrixRecord& rec, bool with_tca) {
  const Prediction& p = rec.prediction;
  const int n_field = p.probs[0].n_field;
  Json j{{"format_version", kFormatVersion},
         {"id", rec.id},
         {"n_field", n_field},
         {"n_text", p.probs[0].n_text()},
         {"tokens", rec.tokens}};
  for (Relation r : kRelations) {
    const std::size_t k = static_cast<std::size_t>(r);
    Json rel{{"prob", ToJson(p.probs[k])}, {"binary", ToJson(p.binary[k])}};
    if (with_tca) {
      rel["tca"] = {{"converged", p.tca[k].converged}, {"iterations", p.tca[k].iterations}};
    }
    j[std::string(RelationName(r))] = std::move(rel);
  }
  return j;
}

MatrixRecord MatrixRecordFromJson(const Json& j) {
  MatrixRecord rec;
  rec.id = Get<std::string>(j, "id");
  rec.tokens = Get<std::vector<std::string>>(j, "tokens");
  const int n_field = Get<int>(j, "n_field");
  const int n_text = Get<int>(j, "n_text");
  if (n_field < 0 || n_text != static_cast<int>(rec.tokens.size())) {
    throw FormatError("n_text does not match the token list");
  }
  for (Relation r : kRelations) {
    const std::size_t k = static_cast<std::size_t>(r);
    Json rel = Get<Json>(j, std::string(RelationName(r)).c_str());
    rel["n_field"] = n_field;
    rel["n_text"] = n_text;
    rec.prediction.binary[k] = RelationMatrixFromJson(rel, r);
    if (rel.contains("prob")) {
      rec.prediction.probs[k] = ProbabilitiesFromJson(rel, r);
    } else {
      rec.prediction.probs[k] = EdgeProbabilities{r, n_field, rec.prediction.binary[k].m.cast<double>()};
    }
    if (rel.contains("tca")) {
      rec.prediction.tca[k].converged = Get<bool>(rel["tca"], "converged");
      rec.prediction.tca[k].iterations = Get<int>(rel["tca"], "iterations");
    }
    rec.prediction.tca[k].matrix = rec.prediction.binary[k];
  }
  return rec;
}

Json ModelToJson(const Model& model) {
  Model copy = model;
  Json tensors = Json::object();
  for (const auto& t : copy.Tensors()) tensors[t.name] = MatToJson(*t.value);
  const auto& e = model.encoder_config;
  const auto& q = model.quantization;
  return Json{{"format_version", kFormatVersion},
              {"schema", ToJson(model.schema)},
              {"schema_hash", model.schema.Hash()},
              {"vocab", model.vocab.words()},
              {"encoder_config",
               {{"n_layers", e.n_layers},
                {"d_model", e.d_model},
                {"n_heads", e.n_heads},
                {"d_head", e.d_head},
                {"d_rel_component", e.d_rel_component},
                {"d_ff", e.d_ff},
                {"vocab_size", e.vocab_size},
                {"rng_seed", e.rng_seed},
                {"use_relative", e.use_relative}}},
              {"d_score", model.scorers[0].bilinear0.rows()},
              {"quantization",
               {{"xy_bin_fraction", q.xy_bin_fraction},
                {"dist_bin_fraction", q.dist_bin_fraction},
                {"max_bin", q.max_bin},
                {"n_angle_bins", q.n_angle_bins}}},
              {"tensors", tensors}};
}

Model ModelFromJson(const Json& j) {
  const int version = Get<int>(j, "format_version");
  if (version != kFormatVersion) {
    throw FormatError("unsupported checkpoint format_version " + std::to_string(version));
  }
  const FieldSchema schema = SchemaFromJson(Get<Json>(j, "schema"));
  if (Get<std::uint64_t>(j, "schema_hash") != schema.Hash()) {
    throw SchemaMismatch("checkpoint schema hash does not match its schema");
  }
  EncoderConfig e;
  const Json ej = Get<Json>(j, "encoder_config");
  e.n_layers = Get<int>(ej, "n_layers");
  e.d_model = Get<int>(ej, "d_model");
  e.n_heads = Get<int>(ej, "n_heads");
  e.d_head = Get<int>(ej, "d_head");
  e.d_rel_component = Get<int>(ej, "d_rel_component");
  e.d_ff = Get<int>(ej, "d_ff");
  e.rng_seed = Get<std::uint64_t>(ej, "rng_seed");
  e.use_relative = Get<bool>(ej, "use_relative");
  QuantizationSpec q;
  const Json qj = Get<Json>(j, "quantization");
  q.xy_bin_fraction = Get<double>(qj, "xy_bin_fraction");
  q.dist_bin_fraction = Get<double>(qj, "dist_bin_fraction");
  q.max_bin = Get<int>(qj, "max_bin");
  q.n_angle_bins = Get<int>(qj, "n_angle_bins");

  Vocabulary vocab;
  try {
    vocab = Vocabulary(Get<std::vector<std::string>>(j, "vocab"));
    e.Validate();
  } catch (const std::invalid_argument& ex) {
    throw FormatError(ex.what());
  }
  Model model = Model::Init(schema, std::move(vocab), e, q, Get<int>(j, "d_score"));
  const Json tj = Get<Json>(j, "tensors");
  for (const auto& t : model.Tensors()) {
    if (!tj.contains(t.name)) throw FormatError("checkpoint lacks tensor '" + t.name + "'");
    const Json& m = tj[t.name];
    const auto rows = Get<Eigen::Index>(m, "rows");
    const auto cols = Get<Eigen::Index>(m, "cols");
    const auto data = Get<std::vector<double>>(m, "data");
    if (rows != t.value->rows() || cols != t.value->cols() ||
        static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw FormatError("tensor '" + t.name + "' has the wrong shape");
    }
    *t.value = Eigen::Map<const Mat>(data.data(), rows, cols);
  }
  return model;
}

void SaveModel(const Model& model, const std::filesystem::path& path) {
  WriteJsonFile(path, ModelToJson(model));
}

Model LoadModel(const std::filesystem::path& path) { return ModelFromJson(ReadJsonFile(path)); }

Json ReadJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(e.what(), 0, path.string());
  }
}

void WriteJsonFile(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void ForEachJsonLine(std::istream& in, const std::function<void(const Json&, int)>& fn) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw FormatError(e.what(), number);
    }
    try {
      fn(j, number);
    } catch (const FormatError& e) {
      if (e.line() > 0) throw;
      throw FormatError(e.detail(), number);
    } catch (const Json::exception& e) {
      throw FormatError(e.what(), number);
    }
  }
}

void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const Json&, int)>& fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    ForEachJsonLine(in, fn);
  } catch (const FormatError& e) {
    throw FormatError(e.detail(), e.line(), path.string());
  }
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream docs(dir / "docs.jsonl");
  std::ofstream parses(dir / "parses.jsonl");
  if (!docs || !parses) throw std::runtime_error("cannot write corpus to " + dir.string());
  for (const SynthDocument& d : corpus.docs) {
    docs << ToJson(d.doc).dump() << '\n';
    parses << Json{{"id", d.doc.id}, {"parse", ToJson(d.parse)}, {"labels", ToJson(d.labels)}}.dump()
           << '\n';
  }
  WriteJsonFile(dir / "schema.json", ToJson(corpus.schema));
  WriteJsonFile(dir / "split.json", Json{{"format_version", kFormatVersion},
                                         {"train", corpus.split.train},
                                         {"dev", corpus.split.dev},
                                         {"test", corpus.split.test}});
}

std::vector<LabeledExample> LoadedCorpus::Select(const std::vector<std::string>& ids) const {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < examples.size(); ++k) index[examples[k].doc.id] = k;
  std::vector<LabeledExample> out;
  for (const auto& id : ids) {
    const auto it = index.find(id);
    if (it == index.end()) throw FormatError("split names unknown document '" + id + "'");
    out.push_back(examples[it->second]);
  }
  return out;
}

LoadedCorpus ReadCorpus(const std::filesystem::path& dir) {
  LoadedCorpus c;
  c.schema = SchemaFromJson(ReadJsonFile(dir / "schema.json"));
  std::map<std::string, ChainParse> labels;
  ForEachJsonLine(dir / "parses.jsonl", [&](const Json& j, int) {
    labels[Get<std::string>(j, "id")] = ChainParseFromJson(Get<Json>(j, "labels"));
  });
  ForEachJsonLine(dir / "docs.jsonl", [&](const Json& j, int) {
    Document doc = DocumentFromJson(j);
    const auto it = labels.find(doc.id);
    if (it == labels.end()) throw FormatError("no labels for document '" + doc.id + "'");
    try {
      EncodeParse(it->second, c.schema, static_cast<int>(doc.tokens.size()));
    } catch (const std::invalid_argument& e) {
      throw SchemaMismatch("labels of '" + doc.id + "' do not fit the schema: " + e.what());
    }
    c.examples.push_back(LabeledExample{std::move(doc), it->second});
  });
  const Json split = ReadJsonFile(dir / "split.json");
  c.split.train = Get<std::vector<std::string>>(split, "train");
  c.split.dev = Get<std::vector<std::string>>(split, "dev");
  c.split.test = Get<std::vector<std::string>>(split, "test");
  return c;
}

}  // namespace spatialdep
