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

#include "spatialdep/graph.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spatialdep {

std::string_view RelationName(Relation r) { return r == Relation::kSerial ? "rel_s" : "rel_g"; }

Relation RelationFromName(std::string_view name) {
  if (name == "rel_s" || name == "rel-s" || name == "s") return Relation::kSerial;
  if (name == "rel_g" || name == "rel-g" || name == "g") return Relation::kGroup;
  throw std::invalid_argument("unknown relation '" + std::string(name) + "'");
}

RelationMatrix RelationMatrix::Zero(Relation r, int n_field, int n_text) {
  RelationMatrix out;
  out.relation = r;
  out.n_field = n_field;
  out.m = BinaryMat::Zero(n_field + n_text, n_text);
  return out;
}

std::size_t RelationMatrix::EdgeCount() const {
  std::size_t c = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) c += m(i, j) != 0;
  }
  return c;
}

ScorerParams ScorerParams::Init(int n_field, int d_model, int d_score, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  ScorerParams p;
  p.field_embed = RandomMatrix(n_field, d_score, std::sqrt(static_cast<double>(d_score)) * 0.5, rng);
  p.head_w = RandomMatrix(d_score, d_model, 1.0, rng);
  p.head_b = Mat::Zero(1, d_score);
  p.dep_w = RandomMatrix(d_score, d_model, 1.0, rng);
  p.dep_b = Mat::Zero(1, d_score);
  // Entry std 1/d_score keeps initial margins O(1), clear of the loss clipping.
  const double bilinear_scale = 1.0 / std::sqrt(static_cast<double>(d_score));
  p.bilinear0 = RandomMatrix(d_score, d_score, bilinear_scale, rng);
  p.bilinear1 = RandomMatrix(d_score, d_score, bilinear_scale, rng);
  return p;
}

TensorList ScorerParams::Tensors(const std::string& prefix) {
  return {{prefix + "field_embed", &field_embed}, {prefix + "head_w", &head_w},
          {prefix + "head_b", &head_b},           {prefix + "dep_w", &dep_w},
          {prefix + "dep_b", &dep_b},             {prefix + "bilinear0", &bilinear0},
          {prefix + "bilinear1", &bilinear1}};
}

EdgeProbabilities ScoreEdges(const Mat& context, const ScorerParams& params, Relation relation) {
  ScorerCache cache;
  return ScoreEdgesWithCache(context, params, relation, cache);
}

EdgeProbabilities ScoreEdgesWithCache(const Mat& context, const ScorerParams& params,
                                      Relation relation, ScorerCache& cache) {
  if (context.rows() == 0) throw std::invalid_argument("no context vectors to score");
  if (context.cols() != params.head_w.cols() || context.cols() != params.dep_w.cols()) {
    throw std::invalid_argument("context width does not match scorer projections");
  }
  const Eigen::Index n = context.rows();
  const Eigen::Index nf = params.field_embed.rows();
  const Eigen::Index ds = params.bilinear0.rows();

  cache.heads.resize(nf + n, ds);
  cache.heads.topRows(nf) = params.field_embed;
  Mat text_heads = context * params.head_w.transpose();
  text_heads.rowwise() += params.head_b.row(0);
  cache.heads.bottomRows(n) = text_heads;
  cache.deps = context * params.dep_w.transpose();
  cache.deps.rowwise() += params.dep_b.row(0);

  const Mat s0 = cache.heads * params.bilinear0 * cache.deps.transpose();
  const Mat s1 = cache.heads * params.bilinear1 * cache.deps.transpose();
  // Two-logit softmax written as a logistic of the margin; both branches
  // exponentiate a non-positive number.
  cache.probs = (s1 - s0).unaryExpr([](double m) {
    if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
    const double e = std::exp(m);
    return e / (1.0 + e);
  });

  EdgeProbabilities out;
  out.relation = relation;
  out.n_field = static_cast<int>(nf);
  out.p = cache.probs;
  return out;
}

Mat ScorerBackward(const ScorerCache& cache, const Mat& context, const ScorerParams& params,
                   const Mat& d_margin, ScorerParams& grads) {
  if (d_margin.rows() != cache.probs.rows() || d_margin.cols() != cache.probs.cols()) {
    throw std::invalid_argument("margin gradient shape mismatch");
  }
  const Eigen::Index n = context.rows();
  const Eigen::Index nf = params.field_embed.rows();
  // s_1 receives +d_margin, s_0 receives -d_margin.
  const Mat hd = cache.heads.transpose() * d_margin * cache.deps;
  grads.bilinear1 += hd;
  grads.bilinear0 -= hd;
  const Mat w_diff = params.bilinear1 - params.bilinear0;
  const Mat d_heads = d_margin * cache.deps * w_diff.transpose();
  const Mat d_deps = d_margin.transpose() * cache.heads * w_diff;

  grads.field_embed += d_heads.topRows(nf);
  const Mat d_text_heads = d_heads.bottomRows(n);
  grads.head_w += d_text_heads.transpose() * context;
  grads.head_b.row(0) += d_text_heads.colwise().sum();
  grads.dep_w += d_deps.transpose() * context;
  grads.dep_b.row(0) += d_deps.colwise().sum();
  return d_text_heads * params.head_w + d_deps * params.dep_w;
}

RelationMatrix Binarize(const EdgeProbabilities& probs, double p_th) {
  if (!(p_th > 0.0 && p_th < 1.0)) throw std::invalid_argument("p_th must lie in (0, 1)");
  const Eigen::Index rows = probs.p.rows();
  const Eigen::Index cols = probs.p.cols();
  RelationMatrix out = RelationMatrix::Zero(probs.relation, probs.n_field, static_cast<int>(cols));
  for (Eigen::Index i = 0; i < rows; ++i) {
    const bool field_row = i < probs.n_field;
    if (probs.relation == Relation::kGroup && field_row) continue;
    if (probs.relation == Relation::kSerial && !field_row) {
      if (cols == 0) continue;
      Eigen::Index best = 0;
      for (Eigen::Index j = 1; j < cols; ++j) {
        if (probs.p(i, j) > probs.p(i, best)) best = j;
      }
      if (probs.p(i, best) >= p_th) out.m(i, best) = 1;
      continue;
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (probs.p(i, j) >= p_th) out.m(i, j) = 1;
    }
  }
  return out;
}

}  // namespace spatialdep
