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

#ifndef SPATIALDEP_ENCODER_HPP_
#define SPATIALDEP_ENCODER_HPP_

#include <cstdint>
#include <vector>

#include "spatialdep/document.hpp"
#include "spatialdep/geometry.hpp"
#include "spatialdep/tensor.hpp"
#include "spatialdep/vocab.hpp"

namespace spatialdep {

struct EncoderConfig {
  int n_layers = 2;
  int d_model = 64;
  int n_heads = 4;
  int d_head = 16;
  int d_rel_component = 16;  // sincos width of each of the four relative features
  int d_ff = 128;
  int vocab_size = 1;
  std::uint64_t rng_seed = 7;
  // When false the relative term of the attention logit is dropped (ablation).
  bool use_relative = true;

  int d_rel_base() const { return 4 * d_rel_component; }
  void Validate() const;

  friend bool operator==(const EncoderConfig&, const EncoderConfig&) = default;
};

struct EncoderLayerParams {
  Mat wq, bq, wk, bk, wv, bv, wo, bo;
  Mat w_rel;  // d_model x d_rel_base, projects the concatenated sincos features
  Mat b_key;  // 1 x d_model; head h uses columns [h*d_head, (h+1)*d_head)
  Mat b_rel;  // 1 x d_model; same per-head slicing
  Mat ln1_gain, ln1_bias, ln2_gain, ln2_bias;
  Mat ff1_w, ff1_b, ff2_w, ff2_b;
};

struct EncoderParams {
  Mat token_embed;  // vocab_size x d_model
  std::vector<EncoderLayerParams> layers;
  Mat final_gain, final_bias;

  static EncoderParams Init(const EncoderConfig& cfg);
  static EncoderParams Zeros(const EncoderConfig& cfg);

  TensorList Tensors();
};

// Everything the encoder needs from a document: vocabulary ids and the
// quantized pair features. Token order is irrelevant to the result.
struct EncoderInput {
  std::vector<int> token_ids;
  PairGrid<QuantizedRelFeature> rel;

  std::size_t size() const { return token_ids.size(); }
};

EncoderInput PrepareInput(const Document& doc, const Vocabulary& vocab,
                          const QuantizationSpec& quant);

// (n*n) x 4*d_rc matrix; row i*n+j is concat(sincos(qx), sincos(qy),
// sincos(qdist), sincos(qangle)) of pair (i, j).
Mat RelBaseEmbeddings(const PairGrid<QuantizedRelFeature>& rel, int d_rel_component);

// r_ij for one layer, shape (n*n) x d_model, row i*n+j.
Mat BuildRelVectors(const PairGrid<QuantizedRelFeature>& rel, const EncoderParams& params,
                    const EncoderConfig& cfg, int layer);

// q.k + q.r + b_key.k + b_rel.r
double AttentionLogit(const Eigen::VectorXd& q, const Eigen::VectorXd& k,
                      const Eigen::VectorXd& r, const Eigen::VectorXd& b_key,
                      const Eigen::VectorXd& b_rel);

struct LayerNormCache {
  Mat normalized;           // n x d
  Eigen::VectorXd inv_std;  // n
};

struct EncoderLayerCache {
  Mat input;
  LayerNormCache ln1;
  Mat attn_in, q, k, v;
  std::vector<Mat> probs;    // per head, n x n
  std::vector<Mat> rel_key;  // per head, n x d_rel_base: (q_i + b_rel) projected back through w_rel
  Mat heads_out;
  Mat resid1;
  LayerNormCache ln2;
  Mat ff_in, ff_pre, ff_act;
};

struct EncoderCache {
  std::vector<int> token_ids;
  Mat rel_base;
  std::vector<EncoderLayerCache> layers;
  Mat final_in;
  LayerNormCache final_ln;
  Mat output;
};

// Contextualized token vectors (n x d_model). Rows follow input token order.
Mat Encode(const EncoderInput& input, const EncoderParams& params, const EncoderConfig& cfg);

Mat EncodeWithCache(const EncoderInput& input, const EncoderParams& params,
                    const EncoderConfig& cfg, EncoderCache& cache);

// Accumulates dLoss/dparams into grads given dLoss/doutput.
void EncoderBackward(const EncoderCache& cache, const EncoderParams& params,
                     const EncoderConfig& cfg, const Mat& d_output, EncoderParams& grads);

}  // namespace spatialdep

#endif  // SPATIALDEP_ENCODER_HPP_
