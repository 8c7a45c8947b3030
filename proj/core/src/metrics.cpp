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

#include "spatialdep/metrics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace spatialdep {

namespace {

// Lenient UTF-8 decode; malformed bytes become one code point each.
std::u32string DecodeUtf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    int len = 1;
    char32_t cp = c;
    if (c >= 0xF0 && c < 0xF8) {
      len = 4;
      cp = c & 0x07;
    } else if (c >= 0xE0) {
      len = c < 0xF0 ? 3 : 1;
      cp = len == 3 ? (c & 0x0F) : c;
    } else if (c >= 0xC0) {
      len = 2;
      cp = c & 0x1F;
    }
    if (len > 1 && i + static_cast<std::size_t>(len) <= s.size()) {
      bool ok = true;
      for (int k = 1; k < len; ++k) {
        const unsigned char cc = static_cast<unsigned char>(s[i + static_cast<std::size_t>(k)]);
        if ((cc & 0xC0) != 0x80) ok = false;
        cp = (cp << 6) | (cc & 0x3F);
      }
      if (ok) {
        out.push_back(cp);
        i += static_cast<std::size_t>(len);
        continue;
      }
    }
    out.push_back(c);
    ++i;
  }
  return out;
}

std::string StripSpaces(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') out.push_back(c);
  }
  return out;
}

double Ratio(long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / den; }

}  // namespace

void MatchConfig::Validate() const {
  if (max_ed < 0) throw std::invalid_argument("max_ed must be >= 0");
  if (max_ed_ratio < 0.0 || max_ed_ratio > 1.0) {
    throw std::invalid_argument("max_ed_ratio must lie in [0, 1]");
  }
}

double PRF::precision() const {
  if (tp + fp + fn == 0) return 1.0;
  return Ratio(tp, tp + fp);
}

double PRF::recall() const {
  if (tp + fp + fn == 0) return 1.0;
  return Ratio(tp, tp + fn);
}

double PRF::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

int EditDistance(std::string_view a, std::string_view b) {
  const std::u32string x = DecodeUtf8(a);
  const std::u32string y = DecodeUtf8(b);
  std::vector<int> row(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) row[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    int diag = row[0];
    row[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= y.size(); ++j) {
      const int up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (x[i - 1] == y[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[y.size()];
}

bool ValuesMatch(const std::string& field, const std::string& pred, const std::string& gt,
                 const MatchConfig& cfg) {
  const std::string p = cfg.ignore_whitespace ? StripSpaces(pred) : pred;
  const std::string g = cfg.ignore_whitespace ? StripSpaces(gt) : gt;
  if (p == g) return true;
  if (!cfg.tolerant_fields.contains(field)) return false;
  const int ed = EditDistance(p, g);
  if (ed < cfg.max_ed) return true;
  const std::size_t gt_len = DecodeUtf8(g).size();
  return gt_len > 0 && static_cast<double>(ed) / static_cast<double>(gt_len) <= cfg.max_ed_ratio;
}

ParseScore& ParseScore::operator+=(const ParseScore& o) {
  overall += o.overall;
  for (const auto& [f, prf] : o.per_field) per_field[f] += prf;
  return *this;
}

std::vector<int> GreedyAssign(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  const std::size_t cols = rows == 0 ? 0 : cost[0].size();
  std::vector<int> assign(rows, -1);
  std::vector<bool> col_used(cols, false);
  for (std::size_t step = 0; step < std::min(rows, cols); ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    std::size_t bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < rows; ++i) {
      if (assign[i] >= 0) continue;
      for (std::size_t j = 0; j < cols; ++j) {
        if (col_used[j]) continue;
        if (!found || cost[i][j] < best) {
          best = cost[i][j];
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found) break;
    assign[bi] = static_cast<int>(bj);
    col_used[bj] = true;
  }
  return assign;
}

std::vector<int> HungarianAssign(const std::vector<std::vector<double>>& cost) {
  const std::size_t rows = cost.size();
  if (rows == 0) return {};
  const std::size_t cols = cost[0].size();
  if (cols == 0) return std::vector<int>(rows, -1);
  if (rows > cols) {
    std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) t[j][i] = cost[i][j];
    }
    const std::vector<int> col_to_row = HungarianAssign(t);
    std::vector<int> assign(rows, -1);
    for (std::size_t j = 0; j < cols; ++j) {
      if (col_to_row[j] >= 0) assign[static_cast<std::size_t>(col_to_row[j])] = static_cast<int>(j);
    }
    return assign;
  }
  // Potentials formulation, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(cols + 1, inf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assign(rows, -1);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (match[j] != 0) assign[match[j] - 1] = static_cast<int>(j - 1);
  }
  return assign;
}

namespace {

std::string Concat(const std::vector<KeyValue>& pairs) {
  std::string s;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    if (k > 0) s += ' ';
    s += pairs[k].second;
  }
  return s;
}

void ScoreGroupPair(const std::vector<KeyValue>& pred, const std::vector<KeyValue>& gt,
                    const MatchConfig& cfg, ParseScore& score) {
  std::vector<bool> used(gt.size(), false);
  for (const auto& [field, value] : pred) {
    std::size_t hit = gt.size();
    // Exact matches first so a tolerant match never steals an exact partner.
    for (std::size_t k = 0; k < gt.size() && hit == gt.size(); ++k) {
      if (!used[k] && gt[k].first == field && gt[k].second == value) hit = k;
    }
    for (std::size_t k = 0; k < gt.size() && hit == gt.size(); ++k) {
      if (!used[k] && gt[k].first == field && ValuesMatch(field, value, gt[k].second, cfg)) hit = k;
    }
    if (hit < gt.size()) {
      used[hit] = true;
      ++score.overall.tp;
      ++score.per_field[field].tp;
    } else {
      ++score.overall.fp;
      ++score.per_field[field].fp;
    }
  }
  for (std::size_t k = 0; k < gt.size(); ++k) {
    if (!used[k]) {
      ++score.overall.fn;
      ++score.per_field[gt[k].first].fn;
    }
  }
}

}  // namespace

ParseScore ScoreParse(const Parse& pred, const Parse& gt, const MatchConfig& cfg) {
  cfg.Validate();
  std::vector<std::vector<KeyValue>> pg, gg;
  for (const auto& g : pred.groups) pg.push_back(FlattenGroup(g));
  for (const auto& g : gt.groups) gg.push_back(FlattenGroup(g));

  std::vector<std::vector<double>> cost(pg.size(), std::vector<double>(gg.size()));
  for (std::size_t i = 0; i < pg.size(); ++i) {
    const std::string a = Concat(pg[i]);
    for (std::size_t j = 0; j < gg.size(); ++j) cost[i][j] = EditDistance(a, Concat(gg[j]));
  }
  const std::vector<int> assign =
      cfg.matching == GroupMatching::kHungarian ? HungarianAssign(cost) : GreedyAssign(cost);

  ParseScore score;
  std::vector<bool> gt_matched(gg.size(), false);
  for (std::size_t i = 0; i < pg.size(); ++i) {
    if (assign[i] >= 0) {
      gt_matched[static_cast<std::size_t>(assign[i])] = true;
      ScoreGroupPair(pg[i], gg[static_cast<std::size_t>(assign[i])], cfg, score);
    } else {
      ScoreGroupPair(pg[i], {}, cfg, score);
    }
  }
  for (std::size_t j = 0; j < gg.size(); ++j) {
    if (!gt_matched[j]) ScoreGroupPair({}, gg[j], cfg, score);
  }
  ScoreGroupPair(pred.ungrouped, gt.ungrouped, cfg, score);
  return score;
}

ParseScore ParseF1(std::span<const Parse> pred, std::span<const Parse> gt, const MatchConfig& cfg) {
  if (pred.size() != gt.size()) {
    throw std::invalid_argument("prediction and reference lists differ in length");
  }
  ParseScore total;
  for (std::size_t d = 0; d < pred.size(); ++d) total += ScoreParse(pred[d], gt[d], cfg);
  return total;
}

PRF EdgePRF(const RelationMatrix& pred, const RelationMatrix& gt) {
  if (pred.m.rows() != gt.m.rows() || pred.m.cols() != gt.m.cols()) {
    throw std::invalid_argument("edge matrices differ in shape");
  }
  PRF prf;
  for (Eigen::Index i = 0; i < pred.m.rows(); ++i) {
    for (Eigen::Index j = 0; j < pred.m.cols(); ++j) {
      const bool p = pred.m(i, j) != 0;
      const bool g = gt.m(i, j) != 0;
      prf.tp += p && g;
      prf.fp += p && !g;
      prf.fn += !p && g;
    }
  }
  return prf;
}

}  // namespace spatialdep
