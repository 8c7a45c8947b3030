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

#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "spatialdep/metrics.hpp"
#include "spatialdep/synthgen.hpp"
#include "spatialdep/tca.hpp"
#include "spatialdep/train.hpp"

namespace sd = spatialdep;

namespace {

// One synthetic receipt with roughly `tokens` tokens.
sd::SynthDocument Receipt(int tokens) {
  const sd::Corpus c = sd::Generate(11, 200, sd::SynthProfile{});
  const sd::SynthDocument* best = &c.docs.front();
  for (const auto& d : c.docs) {
    if (std::abs(static_cast<int>(d.doc.tokens.size()) - tokens) <
        std::abs(static_cast<int>(best->doc.tokens.size()) - tokens)) {
      best = &d;
    }
  }
  return *best;
}

sd::Model DefaultModel(const sd::SynthDocument& d) {
  const sd::Corpus c = sd::Generate(11, 1, sd::SynthProfile{});
  return sd::Model::Init(c.schema, sd::Vocabulary::Build(std::span(&d.doc, 1), 1), sd::EncoderConfig{},
                         sd::QuantizationSpec{}, 64);
}

void BM_Encode(benchmark::State& state) {
  const sd::SynthDocument d = Receipt(static_cast<int>(state.range(0)));
  const sd::Model model = DefaultModel(d);
  const sd::EncoderInput in = sd::PrepareInput(d.doc, model.vocab, model.quantization);
  for (auto _ : state) benchmark::DoNotOptimize(sd::Encode(in, model.encoder, model.encoder_config));
  state.counters["tokens"] = static_cast<double>(d.doc.tokens.size());
}
BENCHMARK(BM_Encode)->Arg(12)->Arg(24)->Arg(36);

void BM_ScoreEdges(benchmark::State& state) {
  const sd::SynthDocument d = Receipt(static_cast<int>(state.range(0)));
  const sd::Model model = DefaultModel(d);
  const sd::Mat context = sd::Encode(sd::PrepareInput(d.doc, model.vocab, model.quantization), model.encoder,
                                     model.encoder_config);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sd::ScoreEdges(context, model.scorers[0], sd::Relation::kSerial));
  }
  state.counters["tokens"] = static_cast<double>(d.doc.tokens.size());
}
BENCHMARK(BM_ScoreEdges)->Arg(12)->Arg(24)->Arg(36);

void BM_TrainStep(benchmark::State& state) {
  const sd::SynthDocument d = Receipt(40);
  const sd::Model model = DefaultModel(d);
  sd::Model grads = model;
  for (auto _ : state) {
    sd::ZeroTensors(grads.Tensors());
    benchmark::DoNotOptimize(sd::LossAndGradient(model, d.doc, d.labels, grads));
  }
}
BENCHMARK(BM_TrainStep);

void BM_Decode(benchmark::State& state) {
  const sd::Corpus c = sd::Generate(12, 50, sd::SynthProfile{3, 0, sd::Layout::kPlain});
  std::vector<std::pair<sd::RelationMatrix, sd::RelationMatrix>> mats;
  for (const auto& d : c.docs) {
    mats.push_back(sd::EncodeParse(d.labels, c.schema, static_cast<int>(d.doc.tokens.size())));
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& d = c.docs[k % c.docs.size()];
    benchmark::DoNotOptimize(sd::Decode(mats[k % mats.size()].first, mats[k % mats.size()].second, c.schema,
                                        d.doc.Texts()));
    ++k;
  }
}
BENCHMARK(BM_Decode);

void BM_ResolveCollisions(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int nf = 6;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sd::EdgeProbabilities probs{sd::Relation::kSerial, nf, sd::Mat(nf + n, n)};
  for (Eigen::Index i = 0; i < probs.p.size(); ++i) probs.p.data()[i] = u(rng) * u(rng);
  const sd::RelationMatrix m = sd::Binarize(probs);
  for (auto _ : state) benchmark::DoNotOptimize(sd::ResolveCollisions(probs, m));
}
BENCHMARK(BM_ResolveCollisions)->Arg(40)->Arg(160);

void BM_EditDistance(benchmark::State& state) {
  const std::string a(static_cast<std::size_t>(state.range(0)), 'a');
  std::string b = a;
  for (std::size_t i = 0; i < b.size(); i += 3) b[i] = 'b';
  for (auto _ : state) benchmark::DoNotOptimize(sd::EditDistance(a, b));
}
BENCHMARK(BM_EditDistance)->Arg(16)->Arg(64);

void BM_ScoreParse(benchmark::State& state) {
  const sd::Corpus c = sd::Generate(14, 20, sd::SynthProfile{});
  const sd::MatchConfig cfg = sd::DefaultMatchConfig();
  for (auto _ : state) {
    for (const auto& d : c.docs) benchmark::DoNotOptimize(sd::ScoreParse(d.parse, d.parse, cfg));
  }
}
BENCHMARK(BM_ScoreParse);

}  // namespace
BENCHMARK_MAIN();
