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

#include "spatialdep/augment.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spatialdep {

void AugmentConfig::Validate() const {
  if (max_rotation_deg < 0.0 || max_rotation_deg > 10.0) {
    throw std::invalid_argument("rotation range must lie within [0, 10] degrees");
  }
  auto prob = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!prob(warp_probability) || !prob(p_delete) || !prob(p_insert) || !prob(p_attach)) {
    throw std::invalid_argument("augmentation probabilities must lie in [0, 1]");
  }
  if (max_warp_amplitude_fraction < 0.0 || min_wavelength_fraction <= 0.0 ||
      max_wavelength_fraction < min_wavelength_fraction) {
    throw std::invalid_argument("invalid warp parameters");
  }
}

Document Rotate(const Document& doc, double angle_deg) {
  Document out = doc;
  if (doc.tokens.empty() || angle_deg == 0.0) return out;
  Point c;
  for (const Point& p : doc.Centers()) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= static_cast<double>(doc.tokens.size());
  c.y /= static_cast<double>(doc.tokens.size());
  const double th = angle_deg * std::numbers::pi / 180.0;
  const double cs = std::cos(th);
  const double sn = std::sin(th);
  for (Token& t : out.tokens) {
    for (Point& p : t.box.corners) {
      const double dx = p.x - c.x;
      const double dy = p.y - c.y;
      p = Point{c.x + dx * cs - dy * sn, c.y + dx * sn + dy * cs};
    }
  }
  return out;
}

Document Warp(const Document& doc, double amplitude, double wavelength, double phase) {
  if (amplitude < 0.0) throw std::invalid_argument("warp amplitude must be >= 0");
  if (!(wavelength > 0.0)) throw std::invalid_argument("warp wavelength must be > 0");
  Document out = doc;
  for (Token& t : out.tokens) {
    for (Point& p : t.box.corners) {
      p.y += amplitude * std::sin(2.0 * std::numbers::pi * p.x / wavelength + phase);
    }
  }
  return out;
}

Document Warp(const Document& doc, double max_amplitude, double wavelength, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double amplitude = max_amplitude * unit(rng);
  const double phase = 2.0 * std::numbers::pi * unit(rng);
  return Warp(doc, amplitude, wavelength, phase);
}

namespace {

// Remaps a chain through old->new token ids; deleted tokens (-1) drop out.
FieldChain Remap(const FieldChain& c, const std::vector<int>& map) {
  FieldChain out{c.field, {}};
  for (int t : c.tokens) {
    if (map[static_cast<std::size_t>(t)] >= 0) out.tokens.push_back(map[static_cast<std::size_t>(t)]);
  }
  return out;
}

void Dissolve(const ChainGroup& g, const std::vector<int>& map, ChainParse& out, bool keep_head) {
  for (std::size_t k = keep_head ? 0 : 1; k < g.members.size(); ++k) {
    FieldChain c = Remap(g.members[k], map);
    if (!c.tokens.empty()) out.ungrouped.push_back(std::move(c));
  }
  for (const auto& s : g.subgroups) Dissolve(s, map, out, true);
}

// nullopt when the head vanished; dissolved parts land in `spill`.
std::optional<ChainGroup> RemapGroup(const ChainGroup& g, const std::vector<int>& map,
                                     ChainParse& spill) {
  FieldChain head = Remap(g.members.front(), map);
  if (head.tokens.empty()) {
    Dissolve(g, map, spill, false);
    return std::nullopt;
  }
  ChainGroup out;
  out.members.push_back(std::move(head));
  for (std::size_t k = 1; k < g.members.size(); ++k) {
    FieldChain c = Remap(g.members[k], map);
    if (!c.tokens.empty()) out.members.push_back(std::move(c));
  }
  for (const auto& s : g.subgroups) {
    if (auto sub = RemapGroup(s, map, spill)) out.subgroups.push_back(std::move(*sub));
  }
  return out;
}

Token MakeNeighbour(const Token& anchor, const std::string& text, double shift_fraction) {
  double left = anchor.box.corners[0].x;
  double right = anchor.box.corners[0].x;
  double top = anchor.box.corners[0].y;
  double bottom = anchor.box.corners[0].y;
  for (const Point& p : anchor.box.corners) {
    left = std::min(left, p.x);
    right = std::max(right, p.x);
    top = std::min(top, p.y);
    bottom = std::max(bottom, p.y);
  }
  const double h = std::max(bottom - top, 1.0);
  const double w = std::max(1.0, 0.6 * h * static_cast<double>(text.size()));
  const double x0 = right + shift_fraction * h;
  return Token{text, TokenBox::FromRect(x0, top, x0 + w, bottom)};
}

template <typename F>
void ForEachChainOf(const ChainGroup& g, F&& f) {
  for (const auto& m : g.members) f(m);
  for (const auto& s : g.subgroups) ForEachChainOf(s, f);
}

}  // namespace

LabeledDocument PerturbTokens(const Document& doc, const ChainParse& labels,
                              const AugmentConfig& cfg, std::span<const std::string> pool,
                              std::mt19937_64& rng) {
  cfg.Validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_text = [&]() -> std::string {
    if (pool.empty()) return "<noise>";
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return pool[pick(rng)];
  };

  LabeledDocument out;
  out.doc.id = doc.id;
  out.doc.width = doc.width;
  out.doc.height = doc.height;
  std::vector<int> map(doc.tokens.size(), -1);
  std::vector<Token> extra;
  for (std::size_t t = 0; t < doc.tokens.size(); ++t) {
    const bool drop = unit(rng) < cfg.p_delete;
    const bool insert = unit(rng) < cfg.p_insert;
    if (!drop) {
      map[t] = static_cast<int>(out.doc.tokens.size());
      out.doc.tokens.push_back(doc.tokens[t]);
    }
    if (insert) extra.push_back(MakeNeighbour(doc.tokens[t], draw_text(), 0.5 + unit(rng)));
  }

  auto attach = [&](const FieldChain& chain) {
    if (cfg.p_attach <= 0.0 || unit(rng) >= cfg.p_attach) return;
    const int count = unit(rng) < 0.5 ? 1 : 2;
    Token anchor = doc.tokens[static_cast<std::size_t>(chain.tokens.back())];
    for (int k = 0; k < count; ++k) {
      anchor = MakeNeighbour(anchor, draw_text(), 0.3);
      extra.push_back(anchor);
    }
  };
  for (const auto& g : labels.groups) ForEachChainOf(g, attach);
  for (const auto& c : labels.ungrouped) attach(c);

  for (Token& t : extra) out.doc.tokens.push_back(std::move(t));

  for (const auto& g : labels.groups) {
    if (auto kept = RemapGroup(g, map, out.labels)) out.labels.groups.push_back(std::move(*kept));
  }
  for (const auto& c : labels.ungrouped) {
    FieldChain r = Remap(c, map);
    if (!r.tokens.empty()) out.labels.ungrouped.push_back(std::move(r));
  }
  Canonicalize(out.labels);
  return out;
}

LabeledDocument Augment(const Document& doc, const ChainParse& labels, const AugmentConfig& cfg,
                        std::span<const std::string> pool, std::mt19937_64& rng) {
  cfg.Validate();
  if (!cfg.enabled) return {doc, labels};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Document d = Rotate(doc, (2.0 * unit(rng) - 1.0) * cfg.max_rotation_deg);
  if (unit(rng) < cfg.warp_probability) {
    const double wl = doc.width * (cfg.min_wavelength_fraction +
                                   unit(rng) * (cfg.max_wavelength_fraction - cfg.min_wavelength_fraction));
    d = Warp(d, cfg.max_warp_amplitude_fraction * doc.height, wl, rng);
  }
  return PerturbTokens(d, labels, cfg, pool, rng);
}

}  // namespace spatialdep
