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

#include "spatialdep/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spatialdep/augment.hpp"

namespace spatialdep {

namespace {

constexpr double kLineHeight = 24.0;
constexpr double kCharWidth = 9.0;
constexpr double kTokenHeight = 16.0;
constexpr double kMargin = 16.0;

constexpr std::array kStoreWords = {"CAFE",   "BLUE",   "MOON",  "BAKERY",  "HOUSE",
                                    "GRILL",  "NOODLE", "BAR",   "KITCHEN", "GARDEN",
                                    "SUSHI",  "PIZZA",  "TACO",  "DINER",   "STAR",
                                    "GOLDEN", "DRAGON", "CORNER", "BISTRO", "PLACE"};

constexpr std::array kMenuWords = {
    "volcano",   "iced",      "coffee",  "latte",     "mocha",      "tea",      "green",
    "black",     "milk",      "cake",    "cheese",    "chocolate",  "vanilla",  "caramel",
    "hot",       "cold",      "lemon",   "honey",     "ginger",     "rice",     "fried",
    "chicken",   "beef",      "pork",    "noodle",    "soup",       "spicy",    "garlic",
    "bread",     "toast",     "egg",     "salad",     "tuna",       "mango",    "strawberry",
    "banana",    "juice",     "smoothie", "cookie",   "waffle",     "pancake",  "croissant",
    "bagel",     "sandwich",  "burger",  "fries",     "pasta",      "cream",    "berry",
    "matcha",    "peach",     "orange",  "apple",     "americano",  "espresso", "cappuccino",
    "donut",     "muffin",    "brownie", "tart"};

constexpr std::array kSubWords = {"extra", "shot", "large", "small", "less", "ice",  "sugar", "syrup",
                                  "whip",  "oat",  "soy",   "add",   "no",   "topping", "pearl"};

constexpr std::array kFirstNames = {"Minji", "Jisoo", "Hana",  "Daniel", "Sora",  "Kevin",
                                    "Yuna",  "Alex",  "Emily", "Junho",  "Maria", "Tom"};
constexpr std::array kLastNames = {"Kim", "Lee", "Park", "Choi", "Smith", "Tanaka", "Garcia", "Chen"};
constexpr std::array kCompanyWords = {"ACME",  "GLOBAL",   "TECH",   "SYSTEMS", "LABS",
                                      "CORP",  "PARTNERS", "DESIGN", "MEDIA",   "FOODS"};
constexpr std::array kPositionWords = {"Senior", "Manager", "Engineer", "Director", "Sales",
                                       "Designer", "Lead",  "Chief",    "Officer"};
constexpr std::array kAddressWords = {"Main", "St",    "Seoul", "Ave",  "Tower", "Floor",
                                      "3F",   "Road",  "Busan", "12",   "45",    "Suite"};
constexpr std::array kNoiseWords = {"TEL",  "02-555-0199", "TABLE", "07",    "CASH",
                                    "CHANGE", "RECEIPT",   "NO.",   "ORDER", "SERVER"};

template <std::size_t N>
std::string Pick(const std::array<const char*, N>& words, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> d(0, N - 1);
  return words[d(rng)];
}

int UniformInt(std::mt19937_64& rng, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng);
}

double Uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng);
}

bool Chance(std::mt19937_64& rng, double p) { return Uniform(rng, 0.0, 1.0) < p; }

std::string FormatAmount(long value) {
  std::string digits = std::to_string(value);
  std::string out;
  const int n = static_cast<int>(digits.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && (n - i) % 3 == 0) out += ',';
    out += digits[static_cast<std::size_t>(i)];
  }
  return out;
}

long RandomPrice(std::mt19937_64& rng) { return 500L * UniformInt(rng, 1, 60); }

double TextWidth(const std::string& s) { return kCharWidth * static_cast<double>(s.size()); }

double WordsWidth(const std::vector<std::string>& words) {
  double w = 0.0;
  for (const auto& s : words) w += TextWidth(s);
  return w + kCharWidth * static_cast<double>(words.empty() ? 0 : words.size() - 1);
}

// Accumulates tokens and their chain structure for one document.
class DocBuilder {
 public:
  DocBuilder(const FieldSchema& schema, std::mt19937_64& rng) : schema_(schema), rng_(rng) {}

  int AddToken(const std::string& text, double x, double y) {
    doc_.tokens.push_back(Token{text, TokenBox::FromRect(x, y, x + TextWidth(text), y + kTokenHeight)});
    return static_cast<int>(doc_.tokens.size()) - 1;
  }

  // Lays words left to right; returns nullopt when the schema lacks the field
  // (the words are still placed, unlabeled).
  std::optional<FieldChain> AddChain(const std::string& field, const std::vector<std::string>& words,
                                     double x, double y) {
    FieldChain chain;
    for (const auto& w : words) {
      chain.tokens.push_back(AddToken(w, x, y));
      x += TextWidth(w) + kCharWidth;
    }
    auto idx = schema_.FieldIndex(field);
    if (!idx) return std::nullopt;
    chain.field = *idx;
    return chain;
  }

  void Continue(FieldChain& chain, const std::string& word, double x, double y) {
    chain.tokens.push_back(AddToken(word, x, y));
  }

  Document& doc() { return doc_; }
  ChainParse& labels() { return labels_; }
  std::mt19937_64& rng() { return rng_; }
  const FieldSchema& schema() const { return schema_; }

 private:
  const FieldSchema& schema_;
  std::mt19937_64& rng_;
  Document doc_;
  ChainParse labels_;
};

void AddUngrouped(DocBuilder& b, std::optional<FieldChain> chain) {
  if (chain) b.labels().ungrouped.push_back(std::move(*chain));
}

// Returns (width, height) of the receipt drawn at (x0, y0).
std::pair<double, double> DrawReceipt(DocBuilder& b, int depth, double x0, double y0) {
  auto& rng = b.rng();
  const double width = UniformInt(rng, 360, 480);
  double y = y0 + 20.0;

  std::vector<std::string> store;
  for (int k = UniformInt(rng, 1, 3); k > 0; --k) store.push_back(Pick(kStoreWords, rng));
  AddUngrouped(b, b.AddChain("store_name", store, x0 + (width - WordsWidth(store)) / 2.0, y));
  y += kLineHeight;
  if (Chance(rng, 0.5)) {
    b.AddToken(Pick(kNoiseWords, rng), x0 + kMargin, y);
    b.AddToken(Pick(kNoiseWords, rng), x0 + kMargin + 10 * kCharWidth, y);
    y += kLineHeight;
  }
  y += kLineHeight * 0.5;

  const bool has_rep = b.schema().FieldIndex("menu_name").has_value();
  for (int item = UniformInt(rng, 2, 6); item > 0; --item) {
    std::vector<std::string> words;
    for (int k = UniformInt(rng, 1, 3); k > 0; --k) words.push_back(Pick(kMenuWords, rng));
    const bool wrap = words.size() == 3 && Chance(rng, 0.15);
    std::vector<std::string> first_line(words.begin(), words.end() - (wrap ? 1 : 0));
    auto menu = b.AddChain("menu_name", first_line, x0 + kMargin, y);
    ChainGroup group;
    std::vector<FieldChain> members;
    if (Chance(rng, 0.85)) {
      auto c = b.AddChain("count", {"x" + std::to_string(UniformInt(rng, 1, 9))}, x0 + 0.50 * width, y);
      if (c) members.push_back(std::move(*c));
    }
    if (Chance(rng, 0.6)) {
      auto c = b.AddChain("unit_price", {"@" + FormatAmount(RandomPrice(rng))}, x0 + 0.62 * width, y);
      if (c) members.push_back(std::move(*c));
    }
    {
      const std::string price = FormatAmount(RandomPrice(rng));
      auto c = b.AddChain("price", {price}, x0 + width - kMargin - TextWidth(price), y);
      if (c) members.push_back(std::move(*c));
    }
    y += kLineHeight;
    if (wrap) {
      const double x = x0 + kMargin + 2 * kCharWidth;
      if (menu) {
        b.Continue(*menu, words.back(), x, y);
      } else {
        b.AddToken(words.back(), x, y);
      }
      y += kLineHeight;
    }
    std::vector<ChainGroup> subgroups;
    if (depth >= 3) {
      for (int s = UniformInt(rng, 0, 2); s > 0; --s) {
        std::vector<std::string> sw;
        for (int k = UniformInt(rng, 1, 2); k > 0; --k) sw.push_back(Pick(kSubWords, rng));
        auto sub = b.AddChain("sub_name", sw, x0 + kMargin + 3 * kCharWidth, y);
        std::vector<FieldChain> sub_members;
        if (Chance(rng, 0.7)) {
          const std::string sp = FormatAmount(500L * UniformInt(rng, 1, 4));
          auto c = b.AddChain("sub_price", {sp}, x0 + width - kMargin - TextWidth(sp), y);
          if (c) sub_members.push_back(std::move(*c));
        }
        y += kLineHeight;
        if (sub && menu) {
          ChainGroup sg;
          sg.members.push_back(std::move(*sub));
          for (auto& m : sub_members) sg.members.push_back(std::move(m));
          subgroups.push_back(std::move(sg));
        } else {
          if (sub) b.labels().ungrouped.push_back(std::move(*sub));
          for (auto& m : sub_members) b.labels().ungrouped.push_back(std::move(m));
        }
      }
    }
    if (menu && has_rep && depth >= 2) {
      group.members.push_back(std::move(*menu));
      for (auto& m : members) group.members.push_back(std::move(m));
      group.subgroups = std::move(subgroups);
      b.labels().groups.push_back(std::move(group));
    } else {
      if (menu) b.labels().ungrouped.push_back(std::move(*menu));
      for (auto& m : members) b.labels().ungrouped.push_back(std::move(m));
    }
  }

  y += kLineHeight * 0.5;
  b.AddToken("TOTAL", x0 + kMargin, y);
  {
    long total = RandomPrice(rng) * UniformInt(rng, 2, 8);
    const std::string t = FormatAmount(total);
    AddUngrouped(b, b.AddChain("total_price", {t}, x0 + width - kMargin - TextWidth(t), y));
  }
  y += kLineHeight;
  if (Chance(rng, 0.5)) {
    b.AddToken("THANK", x0 + width / 2.0 - 6 * kCharWidth, y);
    b.AddToken("YOU", x0 + width / 2.0, y);
    y += kLineHeight;
  }
  return {width, y + 30.0 - y0};
}

std::pair<double, double> DrawNameCard(DocBuilder& b, double x0, double y0) {
  auto& rng = b.rng();
  const double width = UniformInt(rng, 400, 480);
  std::vector<std::pair<std::string, std::vector<std::string>>> lines;
  lines.push_back({"name", {Pick(kFirstNames, rng), Pick(kLastNames, rng)}});
  {
    std::vector<std::string> w;
    for (int k = UniformInt(rng, 1, 2); k > 0; --k) w.push_back(Pick(kCompanyWords, rng));
    lines.push_back({"company", w});
  }
  {
    std::vector<std::string> w;
    for (int k = UniformInt(rng, 1, 2); k > 0; --k) w.push_back(Pick(kPositionWords, rng));
    lines.push_back({"position", w});
  }
  {
    std::string phone = "010-" + std::to_string(UniformInt(rng, 1000, 9999)) + "-" +
                        std::to_string(UniformInt(rng, 1000, 9999));
    lines.push_back({"phone", {phone}});
  }
  lines.push_back({"email", {Pick(kLastNames, rng) + "@" + Pick(kCompanyWords, rng) + ".com"}});
  {
    std::vector<std::string> w;
    for (int k = UniformInt(rng, 2, 4); k > 0; --k) w.push_back(Pick(kAddressWords, rng));
    lines.push_back({"address", w});
  }
  std::shuffle(lines.begin() + 1, lines.end(), rng);
  const bool right_aligned = Chance(rng, 0.3);
  double y = y0 + 24.0;
  for (const auto& [field, words] : lines) {
    const double x = right_aligned ? x0 + width - kMargin - WordsWidth(words) : x0 + kMargin;
    AddUngrouped(b, b.AddChain(field, words, x, y));
    y += kLineHeight * (Chance(rng, 0.3) ? 1.5 : 1.0);
  }
  return {width, y + 24.0 - y0};
}

std::pair<double, double> Draw(DocBuilder& b, int depth, double x0, double y0) {
  return depth == 1 ? DrawNameCard(b, x0, y0) : DrawReceipt(b, depth, x0, y0);
}

void ShuffleTokens(Document& doc, ChainParse& labels, std::mt19937_64& rng) {
  std::vector<int> perm(doc.tokens.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // perm[new] = old
  std::vector<int> old_to_new(perm.size());
  std::vector<Token> tokens(doc.tokens.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    tokens[k] = std::move(doc.tokens[static_cast<std::size_t>(perm[k])]);
    old_to_new[static_cast<std::size_t>(perm[k])] = static_cast<int>(k);
  }
  doc.tokens = std::move(tokens);
  auto remap = [&](FieldChain& c) {
    for (int& t : c.tokens) t = old_to_new[static_cast<std::size_t>(t)];
  };
  std::function<void(ChainGroup&)> remap_group = [&](ChainGroup& g) {
    for (auto& m : g.members) remap(m);
    for (auto& s : g.subgroups) remap_group(s);
  };
  for (auto& g : labels.groups) remap_group(g);
  for (auto& c : labels.ungrouped) remap(c);
  Canonicalize(labels);
}

SynthDocument GenerateOne(std::uint64_t seed, int index, const SynthProfile& profile,
                          const FieldSchema& schema) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(profile.depth),
                    static_cast<std::uint32_t>(profile.layout)};
  std::mt19937_64 rng(seq);
  DocBuilder b(schema, rng);
  double width = 0.0;
  double height = 0.0;
  if (profile.layout == Layout::kTwoColumn) {
    auto [w1, h1] = Draw(b, profile.depth, 0.0, 0.0);
    const double gap = 40.0;
    const double y_shift = kLineHeight * Uniform(rng, 0.2, 0.8);
    auto [w2, h2] = Draw(b, profile.depth, w1 + gap, y_shift);
    width = w1 + gap + w2;
    height = std::max(h1, h2 + y_shift);
    // Scan misalignment: every token drifts vertically by up to a quarter line.
    for (std::size_t t = 0; t < b.doc().tokens.size(); ++t) {
      const double jitter = Uniform(rng, -0.25, 0.25) * kLineHeight;
      for (Point& p : b.doc().tokens[t].box.corners) p.y += jitter;
    }
  } else {
    std::tie(width, height) = Draw(b, profile.depth, 0.0, 0.0);
  }
  b.doc().width = width;
  b.doc().height = height;

  if (profile.layout == Layout::kTilted) {
    const double magnitude = Uniform(rng, 4.0, 10.0);
    b.doc() = Rotate(b.doc(), Chance(rng, 0.5) ? magnitude : -magnitude);
  } else if (profile.layout == Layout::kWarped) {
    const double amplitude = 0.05 * height * Uniform(rng, 0.5, 1.0);
    const double wavelength = width * Uniform(rng, 0.5, 2.0);
    b.doc() = Warp(b.doc(), amplitude, wavelength, Uniform(rng, 0.0, 6.283185307179586));
  }

  SynthDocument out;
  out.doc = std::move(b.doc());
  out.labels = std::move(b.labels());
  std::ostringstream id;
  id << "doc-" << seed << "-" << index;
  out.doc.id = id.str();
  ShuffleTokens(out.doc, out.labels, rng);
  out.parse = Detokenize(out.labels, out.doc.Texts(), schema);
  return out;
}

}  // namespace

std::string_view LayoutName(Layout layout) {
  switch (layout) {
    case Layout::kPlain: return "plain";
    case Layout::kTilted: return "tilted";
    case Layout::kWarped: return "warped";
    case Layout::kTwoColumn: return "two-column";
  }
  return "plain";
}

Layout LayoutFromName(std::string_view name) {
  if (name == "plain") return Layout::kPlain;
  if (name == "tilted") return Layout::kTilted;
  if (name == "warped") return Layout::kWarped;
  if (name == "two-column" || name == "two_column") return Layout::kTwoColumn;
  throw std::invalid_argument("unknown layout '" + std::string(name) + "'");
}

SynthProfile ParseProfile(std::string_view text) {
  SynthProfile p;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      p.layout = LayoutFromName(item);
      continue;
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "depth") {
      p.depth = std::stoi(value);
    } else if (key == "n_fields") {
      p.n_fields = std::stoi(value);
    } else if (key == "layout") {
      p.layout = LayoutFromName(value);
    } else {
      throw std::invalid_argument("unknown profile key '" + key + "'");
    }
  }
  if (p.depth < 1 || p.depth > 3) throw std::invalid_argument("profile depth must be 1, 2 or 3");
  if (p.n_fields < 0) throw std::invalid_argument("n_fields must be >= 0");
  return p;
}

FieldSchema SchemaForProfile(const SynthProfile& profile) {
  FieldSchema schema;
  schema.depth = profile.depth;
  std::vector<std::string> priority;
  switch (profile.depth) {
    case 1:
      schema.fields = {"name", "company", "position", "phone", "email", "address"};
      priority = {"name", "company", "phone", "email", "position", "address"};
      break;
    case 2:
      schema.fields = {"store_name", "menu_name", "count", "unit_price", "price", "total_price"};
      schema.representative = {{2, "menu_name"}};
      priority = {"menu_name", "price", "count", "store_name", "total_price", "unit_price"};
      break;
    case 3:
      schema.fields = {"store_name", "menu_name", "count", "unit_price",
                       "price",      "sub_name",  "sub_price", "total_price"};
      schema.representative = {{2, "menu_name"}, {3, "sub_name"}};
      priority = {"menu_name", "sub_name",   "price", "sub_price",
                  "count",     "store_name", "total_price", "unit_price"};
      break;
    default:
      throw std::invalid_argument("profile depth must be 1, 2 or 3");
  }
  if (profile.n_fields > 0 && profile.n_fields < static_cast<int>(schema.fields.size())) {
    const std::size_t keep_n =
        std::max<std::size_t>(static_cast<std::size_t>(profile.n_fields), schema.representative.size());
    std::vector<std::string> keep(priority.begin(), priority.begin() + static_cast<std::ptrdiff_t>(keep_n));
    std::erase_if(schema.fields, [&](const std::string& f) {
      return std::find(keep.begin(), keep.end(), f) == keep.end();
    });
  }
  schema.Validate();
  return schema;
}

Corpus Generate(std::uint64_t seed, int n_docs, const SynthProfile& profile) {
  if (n_docs < 1) throw std::invalid_argument("n_docs must be >= 1");
  Corpus corpus;
  corpus.schema = SchemaForProfile(profile);
  corpus.docs.reserve(static_cast<std::size_t>(n_docs));
  for (int i = 0; i < n_docs; ++i) corpus.docs.push_back(GenerateOne(seed, i, profile, corpus.schema));
  const int n_train = static_cast<int>(std::floor(0.8 * n_docs));
  const int n_dev = static_cast<int>(std::floor(0.1 * n_docs));
  for (int i = 0; i < n_docs; ++i) {
    const std::string& id = corpus.docs[static_cast<std::size_t>(i)].doc.id;
    if (i < n_train) {
      corpus.split.train.push_back(id);
    } else if (i < n_train + n_dev) {
      corpus.split.dev.push_back(id);
    } else {
      corpus.split.test.push_back(id);
    }
  }
  return corpus;
}

std::vector<int> TokenFieldLabels(const ChainParse& labels, std::size_t n_tokens) {
  std::vector<int> out(n_tokens, -1);
  auto mark = [&](const FieldChain& c) {
    for (int t : c.tokens) out[static_cast<std::size_t>(t)] = static_cast<int>(c.field);
  };
  std::function<void(const ChainGroup&)> walk = [&](const ChainGroup& g) {
    for (const auto& m : g.members) mark(m);
    for (const auto& s : g.subgroups) walk(s);
  };
  for (const auto& g : labels.groups) walk(g);
  for (const auto& c : labels.ungrouped) mark(c);
  return out;
}

std::vector<int> InferFieldLayers(const std::vector<ChainParse>& labels, const FieldSchema& schema) {
  std::vector<int> layer(schema.size(), 1);
  for (std::size_t f = 0; f < schema.size(); ++f) {
    if (auto l = schema.RepresentativeLayer(f)) layer[f] = *l;
  }
  std::function<void(const ChainGroup&, int)> walk = [&](const ChainGroup& g, int l) {
    for (std::size_t k = 1; k < g.members.size(); ++k) layer[g.members[k].field] = l;
    for (const auto& s : g.subgroups) walk(s, l + 1);
  };
  for (const auto& p : labels) {
    for (const auto& g : p.groups) walk(g, 2);
  }
  return layer;
}

namespace {

std::vector<std::size_t> ReadingOrder(const Document& doc) {
  const std::vector<Point> c = doc.Centers();
  std::vector<std::size_t> order(c.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (c[a].y != c[b].y) return c[a].y < c[b].y;
    return c[a].x < c[b].x;
  });
  return order;
}

}  // namespace

Parse NaiveSerializerParse(const Document& doc, const std::vector<int>& token_fields,
                           const std::vector<int>& field_layer, const FieldSchema& schema) {
  const std::vector<std::size_t> order = ReadingOrder(doc);
  std::vector<FieldChain> chains;
  int current = -1;
  for (std::size_t t : order) {
    const int f = token_fields[t];
    if (f >= 0 && f == current) {
      chains.back().tokens.push_back(static_cast<int>(t));
      continue;
    }
    current = f;
    if (f >= 0) chains.push_back(FieldChain{static_cast<std::size_t>(f), {static_cast<int>(t)}});
  }

  ChainParse parse;
  ChainGroup* group = nullptr;
  ChainGroup* sub = nullptr;
  for (auto& c : chains) {
    const auto rep = schema.RepresentativeLayer(c.field);
    const int home = field_layer[c.field];
    if (rep == 2) {
      parse.groups.push_back(ChainGroup{{c}, {}});
      group = &parse.groups.back();
      sub = nullptr;
    } else if (rep == 3 && group != nullptr) {
      group->subgroups.push_back(ChainGroup{{c}, {}});
      sub = &group->subgroups.back();
    } else if (!rep && home == 2 && group != nullptr) {
      group->members.push_back(c);
    } else if (!rep && home == 3 && sub != nullptr) {
      sub->members.push_back(c);
    } else {
      parse.ungrouped.push_back(c);
    }
  }
  return Detokenize(parse, doc.Texts(), schema);
}

double NaiveChainBreakRate(const Document& doc, const ChainParse& labels) {
  const std::vector<std::size_t> order = ReadingOrder(doc);
  std::vector<std::size_t> rank(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
  int multi = 0;
  int broken = 0;
  auto check = [&](const FieldChain& c) {
    if (c.tokens.size() < 2) return;
    ++multi;
    for (std::size_t k = 1; k < c.tokens.size(); ++k) {
      if (rank[static_cast<std::size_t>(c.tokens[k])] != rank[static_cast<std::size_t>(c.tokens[k - 1])] + 1) {
        ++broken;
        return;
      }
    }
  };
  std::function<void(const ChainGroup&)> walk = [&](const ChainGroup& g) {
    for (const auto& m : g.members) check(m);
    for (const auto& s : g.subgroups) walk(s);
  };
  for (const auto& g : labels.groups) walk(g);
  for (const auto& c : labels.ungrouped) check(c);
  return multi == 0 ? 0.0 : static_cast<double>(broken) / multi;
}

}  // namespace spatialdep
