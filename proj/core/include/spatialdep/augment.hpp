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

#ifndef SPATIALDEP_AUGMENT_HPP_
#define SPATIALDEP_AUGMENT_HPP_

#include <random>
#include <span>
#include <string>

#include "spatialdep/decoder.hpp"
#include "spatialdep/document.hpp"

namespace spatialdep {

struct AugmentConfig {
  bool enabled = true;
  double max_rotation_deg = 10.0;
  double warp_probability = 0.5;
  double max_warp_amplitude_fraction = 0.05;  // of document height
  double min_wavelength_fraction = 0.5;       // of document width
  double max_wavelength_fraction = 2.0;
  double p_delete = 0.033;
  double p_insert = 0.033;
  double p_attach = 0.017;

  void Validate() const;
};

struct LabeledDocument {
  Document doc;
  ChainParse labels;
};

// Rotates every corner about the centroid of the token centres.
Document Rotate(const Document& doc, double angle_deg);

// y += amplitude * sin(2 pi x / wavelength + phase), x untouched.
Document Warp(const Document& doc, double amplitude, double wavelength, double phase);

// Random warp with amplitude <= max_amplitude and phase drawn from rng.
Document Warp(const Document& doc, double max_amplitude, double wavelength, std::mt19937_64& rng);

// Per-token Bernoulli deletion and insertion, plus per-chain attachment of
// one or two unlabeled tokens after the chain's last token. Deleted tokens are
// spliced out of their chains; a group that loses its head is dissolved into
// the ungrouped list. Insertion texts come from `pool`.
LabeledDocument PerturbTokens(const Document& doc, const ChainParse& labels,
                              const AugmentConfig& cfg, std::span<const std::string> pool,
                              std::mt19937_64& rng);

// Random rotation, optional warp, then token perturbation.
LabeledDocument Augment(const Document& doc, const ChainParse& labels, const AugmentConfig& cfg,
                        std::span<const std::string> pool, std::mt19937_64& rng);

}  // namespace spatialdep

#endif  // SPATIALDEP_AUGMENT_HPP_
