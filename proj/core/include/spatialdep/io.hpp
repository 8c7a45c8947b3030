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

#ifndef SPATIALDEP_IO_HPP_
#define SPATIALDEP_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spatialdep/decoder.hpp"
#include "spatialdep/document.hpp"
#include "spatialdep/metrics.hpp"
#include "spatialdep/synthgen.hpp"
#include "spatialdep/train.hpp"

namespace spatialdep {

// Version stamped into every file this library writes.
inline constexpr int kFormatVersion = 1;

using Json = nlohmann::json;

// Malformed or structurally invalid input. `line` is 1-based for JSONL input
// and 0 for whole-file JSON.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& detail, int line = 0, const std::string& source = "")
      : std::runtime_error(Render(detail, line, source)), detail_(detail), line_(line) {}
  int line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  static std::string Render(const std::string& detail, int line, const std::string& source) {
    std::string where = source;
    if (line > 0) where += (where.empty() ? "line " : ":") + std::to_string(line);
    return where.empty() ? detail : where + ": " + detail;
  }

  std::string detail_;
  int line_;
};

// A checkpoint or matrix file whose schema differs from the expected one.
class SchemaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json ToJson(const Document& doc);
Document DocumentFromJson(const Json& j);

Json ToJson(const FieldSchema& schema);
FieldSchema SchemaFromJson(const Json& j);

Json ToJson(const Parse& parse);
Parse ParseFromJson(const Json& j);

Json ToJson(const ChainParse& parse);
ChainParse ChainParseFromJson(const Json& j);

// Dense row-major nested lists.
Json ToJson(const EdgeProbabilities& p);
Json ToJson(const RelationMatrix& m);
EdgeProbabilities ProbabilitiesFromJson(const Json& j, Relation r);
RelationMatrix RelationMatrixFromJson(const Json& j, Relation r);

Json ToJson(const MatchConfig& cfg);
MatchConfig MatchConfigFromJson(const Json& j);

Json ToJson(const TrainConfig& cfg);
TrainConfig TrainConfigFromJson(const Json& j);

Json ToJson(const PRF& prf);
Json ToJson(const ParseScore& score);

// One line of a predict output file.
struct MatrixRecord {
  std::string id;
  std::vector<std::string> tokens;
  Prediction prediction;
};

Json ToJson(const MatrixRecord& rec, bool with_tca);
// Reads the binary matrices (after TCA when present) and probabilities.
MatrixRecord MatrixRecordFromJson(const Json& j);

Json ModelToJson(const Model& model);
Model ModelFromJson(const Json& j);
void SaveModel(const Model& model, const std::filesystem::path& path);
Model LoadModel(const std::filesystem::path& path);

Json ReadJsonFile(const std::filesystem::path& path);
void WriteJsonFile(const std::filesystem::path& path, const Json& j);

// Calls `fn(json, line_number)` for every non-blank line. Parse errors and
// exceptions thrown by `fn` surface as FormatError with the line number.
void ForEachJsonLine(std::istream& in, const std::function<void(const Json&, int)>& fn);
void ForEachJsonLine(const std::filesystem::path& path,
                     const std::function<void(const Json&, int)>& fn);

// Corpus directory: docs.jsonl, parses.jsonl, schema.json, split.json.
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& dir);

struct LoadedCorpus {
  FieldSchema schema;
  std::vector<LabeledExample> examples;
  CorpusSplit split;

  std::vector<LabeledExample> Select(const std::vector<std::string>& ids) const;
};

LoadedCorpus ReadCorpus(const std::filesystem::path& dir);

}  // namespace spatialdep

#endif  // SPATIALDEP_IO_HPP_
