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

#include "spatialdep/decoder.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace spatialdep {

std::string_view DiagnosticKindName(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::kCycle: return "cycle";
    case Diagnostic::Kind::kConsumed: return "consumed";
    case Diagnostic::Kind::kMultipleOutgoing: return "multiple_outgoing";
    case Diagnostic::Kind::kTailCollision: return "tail_collision";
    case Diagnostic::Kind::kUnusedGroupEdge: return "unused_group_edge";
    case Diagnostic::Kind::kContestedMember: return "contested_member";
  }
  return "unknown";
}

int DecodeResult::CountDiagnostics(Diagnostic::Kind kind) const {
  return static_cast<int>(std::count_if(diagnostics.begin(), diagnostics.end(),
                                        [&](const Diagnostic& d) { return d.kind == kind; }));
}

std::vector<std::vector<int>> Seed(const RelationMatrix& serial, const FieldSchema& schema) {
  if (serial.n_field != static_cast<int>(schema.size())) {
    throw std::invalid_argument("rel-s matrix field rows do not match the schema");
  }
  std::vector<std::vector<int>> seeds(schema.size());
  for (int f = 0; f < serial.n_field; ++f) {
    for (Eigen::Index j = 0; j < serial.m.cols(); ++j) {
      if (serial.m(f, j)) seeds[static_cast<std::size_t>(f)].push_back(static_cast<int>(j));
    }
  }
  return seeds;
}

std::vector<FieldChain> Serialize(const RelationMatrix& serial,
                                  const std::vector<std::vector<int>>& seeds,
                                  std::vector<Diagnostic>& diagnostics) {
  const int n_text = serial.n_text();
  std::vector<int> owner(static_cast<std::size_t>(n_text), -1);
  std::vector<FieldChain> chains;
  for (std::size_t f = 0; f < seeds.size(); ++f) {
    for (int seed : seeds[f]) {
      if (owner[seed] >= 0) {
        diagnostics.push_back({Diagnostic::Kind::kConsumed,
                               "seed " + std::to_string(seed) + " of field " +
                                   std::to_string(f) + " already belongs to chain " +
                                   std::to_string(owner[seed])});
        continue;
      }
      const int chain_id = static_cast<int>(chains.size());
      FieldChain chain{f, {seed}};
      owner[seed] = chain_id;
      int cur = seed;
      while (true) {
        const Eigen::Index row = serial.n_field + cur;
        int next = -1;
        int outgoing = 0;
        for (int j = 0; j < n_text; ++j) {
          if (!serial.m(row, j)) continue;
          if (next < 0) next = j;
          ++outgoing;
        }
        if (outgoing > 1) {
          diagnostics.push_back({Diagnostic::Kind::kMultipleOutgoing,
                                 "token " + std::to_string(cur) + " has " +
                                     std::to_string(outgoing) + " rel-s successors"});
        }
        if (next < 0) break;
        if (owner[next] == chain_id) {
          diagnostics.push_back({Diagnostic::Kind::kCycle, "cycle at token " +
                                                               std::to_string(next) + " in chain " +
                                                               std::to_string(chain_id)});
          break;
        }
        if (owner[next] >= 0) {
          diagnostics.push_back({Diagnostic::Kind::kConsumed,
                                 "token " + std::to_string(next) + " already belongs to chain " +
                                     std::to_string(owner[next])});
          break;
        }
        owner[next] = chain_id;
        chain.tokens.push_back(next);
        cur = next;
      }
      chains.push_back(std::move(chain));
    }
  }
  return chains;
}

namespace {

// Flat group node used while grouping; assembled into ChainGroup afterwards.
struct GroupNode {
  int head = -1;
  int layer = 2;
  std::vector<int> members;
  std::vector<int> children;
};

ChainGroup Assemble(const std::vector<GroupNode>& nodes, int idx,
                    const std::vector<FieldChain>& chains) {
  const GroupNode& node = nodes[static_cast<std::size_t>(idx)];
  ChainGroup g;
  g.members.push_back(chains[static_cast<std::size_t>(node.head)]);
  for (int c : node.members) g.members.push_back(chains[static_cast<std::size_t>(c)]);
  for (int child : node.children) g.subgroups.push_back(Assemble(nodes, child, chains));
  return g;
}

}  // namespace

ChainParse GroupChains(const RelationMatrix& group, const std::vector<FieldChain>& chains,
                       const FieldSchema& schema, std::vector<Diagnostic>& diagnostics,
                       const Mat* group_probs) {
  const int n_text = group.n_text();
  const int nf = group.n_field;
  std::vector<int> chain_of_first(static_cast<std::size_t>(n_text), -1);
  for (std::size_t c = 0; c < chains.size(); ++c) {
    if (!chains[c].tokens.empty()) chain_of_first[chains[c].tokens.front()] = static_cast<int>(c);
  }
  std::vector<std::optional<int>> rep_layer(chains.size());
  for (std::size_t c = 0; c < chains.size(); ++c) {
    rep_layer[c] = schema.RepresentativeLayer(chains[c].field);
  }

  std::vector<bool> assigned(chains.size(), false);
  std::vector<GroupNode> nodes;
  std::vector<int> top_level;
  std::vector<int> frontier;
  if (schema.depth >= 2) {
    for (std::size_t c = 0; c < chains.size(); ++c) {
      if (rep_layer[c] == 2) {
        assigned[c] = true;
        top_level.push_back(static_cast<int>(nodes.size()));
        frontier.push_back(static_cast<int>(nodes.size()));
        nodes.push_back({static_cast<int>(c), 2, {}, {}});
      }
    }
  }

  std::map<std::pair<int, int>, std::string> reasons;
  std::map<std::pair<int, int>, bool> used;
  auto edge_prob = [&](int row, int col) {
    return group_probs != nullptr ? (*group_probs)(row, col) : 0.0;
  };

  for (int layer = 2; layer <= schema.depth && !frontier.empty(); ++layer) {
    // chain -> (node, row) claims, in frontier order.
    std::map<int, std::vector<std::pair<int, int>>> claims;
    for (int node_idx : frontier) {
      const GroupNode& node = nodes[static_cast<std::size_t>(node_idx)];
      const int row = nf + chains[static_cast<std::size_t>(node.head)].tokens.front();
      for (int j = 0; j < n_text; ++j) {
        if (!group.m(row, j)) continue;
        const int c = chain_of_first[j];
        if (c < 0) {
          reasons[{row, j}] = "tail is not the first token of a chain";
          continue;
        }
        const auto& rl = rep_layer[static_cast<std::size_t>(c)];
        if (assigned[c]) {
          reasons[{row, j}] = "tail chain already placed";
          continue;
        }
        if (rl.has_value() && *rl != layer + 1) {
          reasons[{row, j}] = "tail chain represents another layer";
          continue;
        }
        claims[c].push_back({node_idx, row});
      }
    }
    std::vector<int> next_frontier;
    for (auto& [c, heads] : claims) {
      std::size_t best = 0;
      for (std::size_t k = 1; k < heads.size(); ++k) {
        if (edge_prob(heads[k].second, chains[c].tokens.front()) >
            edge_prob(heads[best].second, chains[c].tokens.front())) {
          best = k;
        }
      }
      if (heads.size() > 1) {
        diagnostics.push_back({Diagnostic::Kind::kContestedMember,
                               "chain " + std::to_string(c) + " claimed by " +
                                   std::to_string(heads.size()) + " group heads"});
      }
      const int tail = chains[static_cast<std::size_t>(c)].tokens.front();
      for (std::size_t k = 0; k < heads.size(); ++k) {
        if (k == best) {
          used[{heads[k].second, tail}] = true;
        } else {
          reasons[{heads[k].second, tail}] = "lost contested member";
        }
      }
      assigned[c] = true;
      GroupNode& owner = nodes[static_cast<std::size_t>(heads[best].first)];
      if (rep_layer[static_cast<std::size_t>(c)] == layer + 1) {
        const int child = static_cast<int>(nodes.size());
        owner.children.push_back(child);
        nodes.push_back({c, layer + 1, {}, {}});
        next_frontier.push_back(child);
      } else {
        owner.members.push_back(c);
      }
    }
    frontier = std::move(next_frontier);
  }

  for (Eigen::Index i = nf; i < group.m.rows(); ++i) {
    for (Eigen::Index j = 0; j < group.m.cols(); ++j) {
      if (!group.m(i, j)) continue;
      const std::pair<int, int> key{static_cast<int>(i), static_cast<int>(j)};
      if (used.contains(key)) continue;
      auto it = reasons.find(key);
      const std::string why = it != reasons.end() ? it->second : "head is not an active group head";
      diagnostics.push_back({Diagnostic::Kind::kUnusedGroupEdge,
                             "rel-g edge " + std::to_string(i - nf) + "->" + std::to_string(j) +
                                 " ignored: " + why});
    }
  }

  ChainParse out;
  for (int idx : top_level) out.groups.push_back(Assemble(nodes, idx, chains));
  for (std::size_t c = 0; c < chains.size(); ++c) {
    if (!assigned[c]) out.ungrouped.push_back(chains[c]);
  }
  return out;
}

namespace {

KeyValue Render(const FieldChain& chain, std::span<const std::string> texts,
                const FieldSchema& schema) {
  std::string value;
  for (std::size_t k = 0; k < chain.tokens.size(); ++k) {
    if (k > 0) value += ' ';
    value += texts[static_cast<std::size_t>(chain.tokens[k])];
  }
  return {schema.fields.at(chain.field), value};
}

Group RenderGroup(const ChainGroup& g, std::span<const std::string> texts,
                  const FieldSchema& schema) {
  Group out;
  for (const auto& m : g.members) out.members.push_back(Render(m, texts, schema));
  for (const auto& s : g.subgroups) out.subgroups.push_back(RenderGroup(s, texts, schema));
  return out;
}

}  // namespace

Parse Detokenize(const ChainParse& chains, std::span<const std::string> texts,
                 const FieldSchema& schema) {
  Parse out;
  for (const auto& g : chains.groups) out.groups.push_back(RenderGroup(g, texts, schema));
  for (const auto& c : chains.ungrouped) out.ungrouped.push_back(Render(c, texts, schema));
  return out;
}

DecodeResult Decode(const RelationMatrix& serial, const RelationMatrix& group,
                    const FieldSchema& schema, std::span<const std::string> texts,
                    const Mat* group_probs) {
  if (serial.relation != Relation::kSerial || group.relation != Relation::kGroup) {
    throw std::invalid_argument("decode expects a rel-s and a rel-g matrix");
  }
  if (serial.m.rows() != group.m.rows() || serial.m.cols() != group.m.cols() ||
      serial.n_field != group.n_field) {
    throw std::invalid_argument("rel-s and rel-g matrices differ in shape");
  }
  if (serial.n_text() != static_cast<int>(texts.size())) {
    throw std::invalid_argument("matrix columns do not match token count");
  }
  DecodeResult result;
  for (const RelationMatrix* m : {&serial, &group}) {
    for (Eigen::Index j = 0; j < m->m.cols(); ++j) {
      int incoming = 0;
      for (Eigen::Index i = 0; i < m->m.rows(); ++i) incoming += m->m(i, j) != 0;
      if (incoming >= 2) {
        result.diagnostics.push_back(
            {Diagnostic::Kind::kTailCollision, std::string(RelationName(m->relation)) +
                                                   " column " + std::to_string(j) + " has " +
                                                   std::to_string(incoming) + " incoming edges"});
      }
    }
  }
  const auto seeds = Seed(serial, schema);
  const auto chains = Serialize(serial, seeds, result.diagnostics);
  result.chains = GroupChains(group, chains, schema, result.diagnostics, group_probs);
  result.parse = Detokenize(result.chains, texts, schema);
  return result;
}

namespace {

void EncodeGroup(const ChainGroup& g, int layer, const FieldSchema& schema, RelationMatrix& grp) {
  if (g.members.empty()) throw std::invalid_argument("group without members");
  if (layer > schema.depth) throw std::invalid_argument("group nesting exceeds schema depth");
  const FieldChain& head = g.members.front();
  if (schema.RepresentativeLayer(head.field) != layer) {
    throw std::invalid_argument("group at layer " + std::to_string(layer) +
                                " is not headed by its representative field");
  }
  const int row = grp.n_field + head.tokens.front();
  for (std::size_t k = 1; k < g.members.size(); ++k) {
    if (schema.RepresentativeLayer(g.members[k].field).has_value()) {
      throw std::invalid_argument("representative field used as a plain group member");
    }
    grp.m(row, g.members[k].tokens.front()) = 1;
  }
  for (const ChainGroup& sub : g.subgroups) {
    if (sub.members.empty()) throw std::invalid_argument("group without members");
    grp.m(row, sub.members.front().tokens.front()) = 1;
    EncodeGroup(sub, layer + 1, schema, grp);
  }
}

template <typename F>
void ForEachChain(const ChainGroup& g, F&& f) {
  for (const auto& m : g.members) f(m);
  for (const auto& s : g.subgroups) ForEachChain(s, f);
}

}  // namespace

std::pair<RelationMatrix, RelationMatrix> EncodeParse(const ChainParse& parse,
                                                      const FieldSchema& schema, int n_text) {
  schema.Validate();
  const int nf = static_cast<int>(schema.size());
  RelationMatrix serial = RelationMatrix::Zero(Relation::kSerial, nf, n_text);
  RelationMatrix grp = RelationMatrix::Zero(Relation::kGroup, nf, n_text);
  std::vector<bool> seen(static_cast<std::size_t>(n_text), false);
  auto encode_chain = [&](const FieldChain& chain) {
    if (chain.tokens.empty()) throw std::invalid_argument("empty field chain");
    if (chain.field >= schema.size()) throw std::invalid_argument("chain field out of range");
    for (int t : chain.tokens) {
      if (t < 0 || t >= n_text) throw std::invalid_argument("token index out of range");
      if (seen[t]) {
        throw std::invalid_argument("token " + std::to_string(t) + " assigned twice");
      }
      seen[t] = true;
    }
    serial.m(static_cast<Eigen::Index>(chain.field), chain.tokens.front()) = 1;
    for (std::size_t k = 1; k < chain.tokens.size(); ++k) {
      serial.m(nf + chain.tokens[k - 1], chain.tokens[k]) = 1;
    }
  };
  for (const ChainGroup& g : parse.groups) {
    ForEachChain(g, encode_chain);
    EncodeGroup(g, 2, schema, grp);
  }
  for (const FieldChain& c : parse.ungrouped) {
    if (schema.RepresentativeLayer(c.field) == 2) {
      throw std::invalid_argument("top-layer representative chain outside any group");
    }
    encode_chain(c);
  }
  return {std::move(serial), std::move(grp)};
}

namespace {

auto ChainKey(const FieldChain& c) {
  return std::make_tuple(c.field, c.tokens.empty() ? -1 : c.tokens.front());
}

void CanonicalizeGroup(ChainGroup& g) {
  if (g.members.size() > 1) {
    std::sort(g.members.begin() + 1, g.members.end(),
              [](const FieldChain& a, const FieldChain& b) { return ChainKey(a) < ChainKey(b); });
  }
  for (auto& s : g.subgroups) CanonicalizeGroup(s);
  std::sort(g.subgroups.begin(), g.subgroups.end(), [](const ChainGroup& a, const ChainGroup& b) {
    return ChainKey(a.members.front()) < ChainKey(b.members.front());
  });
}

void FlattenInto(const Group& g, std::vector<KeyValue>& out) {
  out.insert(out.end(), g.members.begin(), g.members.end());
  for (const auto& s : g.subgroups) FlattenInto(s, out);
}

}  // namespace

void Canonicalize(ChainParse& parse) {
  for (auto& g : parse.groups) CanonicalizeGroup(g);
  std::sort(parse.groups.begin(), parse.groups.end(), [](const ChainGroup& a, const ChainGroup& b) {
    return ChainKey(a.members.front()) < ChainKey(b.members.front());
  });
  std::sort(parse.ungrouped.begin(), parse.ungrouped.end(),
            [](const FieldChain& a, const FieldChain& b) { return ChainKey(a) < ChainKey(b); });
}

std::vector<KeyValue> FlattenGroup(const Group& group) {
  std::vector<KeyValue> out;
  FlattenInto(group, out);
  return out;
}

}  // namespace spatialdep
