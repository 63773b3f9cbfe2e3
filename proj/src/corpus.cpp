/* Copyright 2026 The SEJE Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "seje/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "json.hpp"
#include "seje/base64.hpp"
#include "seje/lexicon.hpp"
#include "seje/rng.hpp"

namespace seje::corpus {

using nlohmann::json;

Tokens Recipe::full_text() const {
  Tokens out = title;
  for (const auto& line : ingredient_lines) out.insert(out.end(), line.begin(), line.end());
  for (const auto& sent : instructions) out.insert(out.end(), sent.begin(), sent.end());
  return out;
}

bool FoodImage::operator==(const FoodImage& o) const {
  return id == o.id && height == o.height && width == o.width && category == o.category &&
         pixels.rows() == o.pixels.rows() && pixels.cols() == o.pixels.cols() && pixels == o.pixels;
}

std::vector<std::string> RecipePair::ground_truth_ingredients() const {
  std::vector<std::string> out;
  for (const auto& s : spans) {
    const Tokens& line = recipe.ingredient_lines.at(static_cast<std::size_t>(s.line));
    out.push_back(underscore_join(Tokens(line.begin() + s.begin, line.begin() + s.end)));
  }
  return out;
}

CategoryVocabulary::CategoryVocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], static_cast<int>(i)).second)
      throw ConfigError("duplicate category label '" + labels_[i] + "'");
  }
}

int CategoryVocabulary::index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw SchemaError("unknown category '" + label + "'");
  return it->second;
}

bool Corpus::operator==(const Corpus& o) const {
  return categories == o.categories && pairs == o.pairs && image_height == o.image_height &&
         image_width == o.image_width;
}

// ---------------------------------------------------------------------------
// generator

namespace {

struct Rgb {
  double r, g, b;
};

struct Patch {
  Rgb color;
  int y, x;
};

std::vector<std::string> take_pool(const std::vector<std::string>& base, int count, const std::string& suffix,
                                   int pseudo_offset) {
  std::vector<std::string> out;
  for (int i = 0; i < count; ++i) {
    if (i < static_cast<int>(base.size())) {
      out.push_back(base[static_cast<std::size_t>(i)]);
    } else {
      out.push_back(lexicon::pseudo_word(pseudo_offset + i) + suffix);
    }
  }
  return out;
}

template <class T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

Rgb random_color(Rng& rng) { return {rng.uniform(0.15, 0.95), rng.uniform(0.15, 0.95), rng.uniform(0.15, 0.95)}; }

void fill_rect(Matrix& px, int width, int y0, int x0, int h, int w, const Rgb& c, int height) {
  for (int y = std::max(0, y0); y < std::min(height, y0 + h); ++y)
    for (int x = std::max(0, x0); x < std::min(width, x0 + w); ++x) {
      const Index k = y * width + x;
      px(0, k) = c.r;
      px(1, k) = c.g;
      px(2, k) = c.b;
    }
}

Tokens sample_distinct(const std::vector<std::string>& primary, const std::vector<std::string>& noise, int n,
                       double primary_rate, Rng& rng) {
  Tokens out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < n && attempts < 100 * n) {
    ++attempts;
    const std::string& w = rng.bernoulli(primary_rate) ? pick(primary, rng) : pick(noise, rng);
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  }
  return out;
}

}  // namespace

Corpus generate_synthetic_corpus(const GeneratorSpec& spec) {
  if (spec.num_categories < 1 || spec.pairs_per_category < 1 || spec.vocab_size < 1 || spec.ingredient_pool_size < 1 ||
      spec.utensil_pool_size < 1 || spec.action_pool_size < 1)
    throw ConfigError("generator counts must be >= 1");
  const int pooled = spec.ingredient_pool_size + spec.utensil_pool_size + spec.action_pool_size;
  if (spec.vocab_size < pooled)
    throw ConfigError("vocab_size " + std::to_string(spec.vocab_size) + " is smaller than the combined pool size " +
                      std::to_string(pooled));
  if (spec.ingredient_pool_size < spec.num_categories)
    throw ConfigError("ingredient_pool_size must be >= num_categories for disjoint signatures");
  if (spec.image_size < 8) throw ConfigError("image_size must be >= 8");

  Rng rng(spec.seed);
  const int img = spec.image_size;

  std::vector<std::string> ingredient_pool = take_pool(lexicon::ingredients(), spec.ingredient_pool_size, "", 0);
  const std::vector<std::string> utensil_pool = take_pool(lexicon::utensils(), spec.utensil_pool_size, "pot", 1000);
  const std::vector<std::string> action_pool = take_pool(lexicon::actions(), spec.action_pool_size, "ate", 2000);
  const std::vector<std::string> descriptor_pool =
      take_pool(lexicon::descriptors(), std::max(1, spec.vocab_size - pooled), "ish", 3000);
  rng.shuffle(ingredient_pool);

  std::vector<std::string> labels;
  for (int c = 0; c < spec.num_categories; ++c) {
    labels.push_back(c < static_cast<int>(lexicon::dishes().size()) ? lexicon::dishes()[static_cast<std::size_t>(c)]
                                                                     : "dish_" + lexicon::pseudo_word(4000 + c));
  }

  Corpus corpus;
  corpus.categories = CategoryVocabulary(labels);
  corpus.image_height = img;
  corpus.image_width = img;

  const int sig_size = std::min(6, spec.ingredient_pool_size / spec.num_categories);
  std::map<std::string, Patch> ingredient_patch;
  const int patch = std::max(2, img / 6);
  for (const auto& ing : ingredient_pool) {
    ingredient_patch[ing] = {random_color(rng), static_cast<int>(rng.below(static_cast<std::uint64_t>(img - patch))),
                             static_cast<int>(rng.below(static_cast<std::uint64_t>(img - patch)))};
  }
  struct CategoryStyle {
    Rgb background, block;
    int y, x;
  };
  std::vector<CategoryStyle> styles;
  const int block = img * 3 / 8;
  for (int c = 0; c < spec.num_categories; ++c) {
    CategorySignature sig;
    for (int k = 0; k < sig_size; ++k) sig.ingredients.push_back(ingredient_pool[static_cast<std::size_t>(c * sig_size + k)]);
    sig.utensils = sample_distinct(utensil_pool, utensil_pool, std::min(3, spec.utensil_pool_size), 1.0, rng);
    sig.actions = sample_distinct(action_pool, action_pool, std::min(3, spec.action_pool_size), 1.0, rng);
    corpus.signatures[labels[static_cast<std::size_t>(c)]] = sig;
    styles.push_back({random_color(rng), random_color(rng), static_cast<int>(rng.below(static_cast<std::uint64_t>(img - block))),
                      static_cast<int>(rng.below(static_cast<std::uint64_t>(img - block)))});
  }

  const double rate = spec.signature_rate;
  int serial = 0;
  for (int c = 0; c < spec.num_categories; ++c) {
    const std::string& label = labels[static_cast<std::size_t>(c)];
    const CategorySignature& sig = corpus.signatures[label];
    for (int k = 0; k < spec.pairs_per_category; ++k, ++serial) {
      RecipePair pair;
      char idbuf[32];
      std::snprintf(idbuf, sizeof(idbuf), "%08llx-%05d", static_cast<unsigned long long>(rng.next() & 0xffffffffULL),
                    serial);
      Recipe& r = pair.recipe;
      r.id = idbuf;
      r.category = label;

      const Tokens ingredients =
          sample_distinct(sig.ingredients, ingredient_pool, 3 + static_cast<int>(rng.below(3)), rate, rng);
      const Tokens utensils = sample_distinct(sig.utensils, utensil_pool, 2, rate, rng);
      const Tokens actions = sample_distinct(sig.actions, action_pool, 3, rate, rng);

      r.title.push_back(pick(descriptor_pool, rng));
      r.title.push_back(label);
      if (rng.bernoulli(0.5)) {
        r.title.push_back("with");
        for (auto& t : tokenize(ingredients.front())) r.title.push_back(t);
      }

      for (const auto& ing : ingredients) {
        Tokens line;
        line.push_back(pick(lexicon::quantities(), rng));
        if (rng.bernoulli(0.8)) line.push_back(pick(lexicon::units(), rng));
        if (rng.bernoulli(0.15)) line.push_back(pick(lexicon::descriptors(), rng));
        IngredientSpan span;
        span.line = static_cast<int>(r.ingredient_lines.size());
        span.begin = static_cast<int>(line.size());
        for (auto& t : tokenize(ing)) line.push_back(t);
        span.end = static_cast<int>(line.size());
        if (rng.bernoulli(0.5)) line.push_back(pick(lexicon::preparations(), rng));
        if (rng.bernoulli(0.1)) {
          line.push_back("and");
          line.push_back(pick(lexicon::preparations(), rng));
        }
        r.ingredient_lines.push_back(std::move(line));
        pair.spans.push_back(span);
      }

      const int n_sent = 3 + static_cast<int>(rng.below(3));
      for (int s = 0; s < n_sent; ++s) {
        const std::string& act = pick(actions, rng);
        const Tokens ing = tokenize(pick(ingredients, rng));
        const std::string& ut = pick(utensils, rng);
        Tokens sent;
        auto append = [&sent](std::initializer_list<std::string> words) { sent.insert(sent.end(), words); };
        auto append_tokens = [&sent](const Tokens& words) { sent.insert(sent.end(), words.begin(), words.end()); };
        switch (rng.below(5)) {
          case 0:
            append({act, "the"});
            append_tokens(ing);
            append({"in", "the", ut});
            break;
          case 1: {
            append({act});
            append_tokens(ing);
            append({"and"});
            append_tokens(tokenize(pick(ingredients, rng)));
            break;
          }
          case 2:
            append({act, "for", pick(lexicon::quantities(), rng), "minutes"});
            break;
          case 3:
            append({"transfer", "to", "the", ut, "and", act});
            break;
          default:
            append({"place", "the"});
            append_tokens(ing);
            append({"in", "a", ut, "and", act});
            break;
        }
        r.instructions.push_back(std::move(sent));
      }

      FoodImage& im = pair.image;
      im.id = r.id;
      im.category = label;
      im.height = img;
      im.width = img;
      const CategoryStyle& st = styles[static_cast<std::size_t>(c)];
      im.pixels = Matrix(3, img * img);
      im.pixels.row(0).setConstant(st.background.r * 0.5);
      im.pixels.row(1).setConstant(st.background.g * 0.5);
      im.pixels.row(2).setConstant(st.background.b * 0.5);
      fill_rect(im.pixels, img, st.y, st.x, block, block, st.block, img);
      for (const auto& ing : ingredients) {
        const Patch& p = ingredient_patch.at(ing);
        fill_rect(im.pixels, img, p.y, p.x, patch, patch, p.color, img);
      }
      for (Index q = 0; q < im.pixels.size(); ++q) {
        const double v = std::clamp(im.pixels(q) + spec.pixel_noise * rng.normal(), 0.0, 1.0);
        im.pixels(q) = std::round(v * 255.0) / 255.0;
      }
      corpus.pairs.push_back(std::move(pair));
    }
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// persistence

namespace {

json tokens_list(const std::vector<Tokens>& lines) {
  json arr = json::array();
  for (const auto& l : lines) arr.push_back(join(l));
  return arr;
}

[[noreturn]] void schema_fail(std::size_t line, const std::string& field, const std::string& what) {
  throw SchemaError("line " + std::to_string(line) + ": field '" + field + "': " + what);
}

const json& require(const json& rec, const char* field, std::size_t line) {
  auto it = rec.find(field);
  if (it == rec.end()) schema_fail(line, field, "missing");
  return *it;
}

std::string require_string(const json& rec, const char* field, std::size_t line) {
  const json& v = require(rec, field, line);
  if (!v.is_string()) schema_fail(line, field, "expected string");
  return v.get<std::string>();
}

std::vector<Tokens> require_lines(const json& rec, const char* field, std::size_t line) {
  const json& v = require(rec, field, line);
  if (!v.is_array()) schema_fail(line, field, "expected array of strings");
  std::vector<Tokens> out;
  for (const auto& s : v) {
    if (!s.is_string()) schema_fail(line, field, "expected array of strings");
    out.push_back(tokenize(s.get<std::string>()));
  }
  return out;
}

}  // namespace

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path.string());
  json header = {{"schema_version", 1},
                 {"categories", corpus.categories.labels()},
                 {"image_height", corpus.image_height},
                 {"image_width", corpus.image_width}};
  os << header.dump() << '\n';
  for (const auto& p : corpus.pairs) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(p.image.pixels.size()));
    for (Index r = 0; r < p.image.pixels.rows(); ++r)
      for (Index c = 0; c < p.image.pixels.cols(); ++c)
        bytes[static_cast<std::size_t>(r * p.image.pixels.cols() + c)] =
            static_cast<std::uint8_t>(std::lround(p.image.pixels(r, c) * 255.0));
    json spans = json::array();
    for (const auto& s : p.spans) spans.push_back({s.line, s.begin, s.end});
    json rec = {{"id", p.recipe.id},
                {"title", join(p.recipe.title)},
                {"ingredient_lines", tokens_list(p.recipe.ingredient_lines)},
                {"instructions", tokens_list(p.recipe.instructions)},
                {"category", p.recipe.category},
                {"pixels", base64_encode(bytes)},
                {"ground_truth_spans", spans}};
    os << rec.dump() << '\n';
  }
  if (!os) throw Error("write failed: " + path.string());
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read " + path.string());
  std::string text;
  std::size_t line_no = 0;
  Corpus corpus;
  bool have_header = false;
  std::set<std::string> ids;
  while (std::getline(is, text)) {
    ++line_no;
    if (text.empty()) continue;
    json rec;
    try {
      rec = json::parse(text);
    } catch (const json::parse_error& e) {
      throw SchemaError("line " + std::to_string(line_no) + ": invalid JSON: " + e.what());
    }
    if (!rec.is_object()) schema_fail(line_no, "<record>", "expected object");
    if (!have_header) {
      const json& ver = require(rec, "schema_version", line_no);
      if (!ver.is_number_integer() || ver.get<int>() != 1) schema_fail(line_no, "schema_version", "expected 1");
      const json& cats = require(rec, "categories", line_no);
      if (!cats.is_array()) schema_fail(line_no, "categories", "expected array");
      corpus.categories = CategoryVocabulary(cats.get<std::vector<std::string>>());
      corpus.image_height = require(rec, "image_height", line_no).get<int>();
      corpus.image_width = require(rec, "image_width", line_no).get<int>();
      have_header = true;
      continue;
    }
    RecipePair p;
    p.recipe.id = require_string(rec, "id", line_no);
    if (!ids.insert(p.recipe.id).second) schema_fail(line_no, "id", "duplicate id '" + p.recipe.id + "'");
    p.recipe.title = tokenize(require_string(rec, "title", line_no));
    p.recipe.ingredient_lines = require_lines(rec, "ingredient_lines", line_no);
    p.recipe.instructions = require_lines(rec, "instructions", line_no);
    if (p.recipe.ingredient_lines.empty()) schema_fail(line_no, "ingredient_lines", "at least one line required");
    if (p.recipe.instructions.empty()) schema_fail(line_no, "instructions", "at least one sentence required");
    p.recipe.category = require_string(rec, "category", line_no);
    if (!corpus.categories.contains(p.recipe.category))
      schema_fail(line_no, "category", "unknown category '" + p.recipe.category + "'");

    std::vector<std::uint8_t> bytes;
    try {
      bytes = base64_decode(require_string(rec, "pixels", line_no));
    } catch (const SchemaError&) {
      schema_fail(line_no, "pixels", "invalid base64");
    }
    const std::size_t hw = static_cast<std::size_t>(corpus.image_height * corpus.image_width);
    if (bytes.size() != 3 * hw) schema_fail(line_no, "pixels", "expected " + std::to_string(3 * hw) + " bytes");
    p.image.id = p.recipe.id;
    p.image.category = p.recipe.category;
    p.image.height = corpus.image_height;
    p.image.width = corpus.image_width;
    p.image.pixels = Matrix(3, static_cast<Index>(hw));
    for (Index r = 0; r < 3; ++r)
      for (Index c = 0; c < static_cast<Index>(hw); ++c)
        p.image.pixels(r, c) = bytes[static_cast<std::size_t>(r) * hw + static_cast<std::size_t>(c)] / 255.0;

    if (auto it = rec.find("ground_truth_spans"); it != rec.end()) {
      if (!it->is_array()) schema_fail(line_no, "ground_truth_spans", "expected array");
      for (const auto& s : *it) {
        if (!s.is_array() || s.size() != 3) schema_fail(line_no, "ground_truth_spans", "expected [line, begin, end]");
        IngredientSpan span{s[0].get<int>(), s[1].get<int>(), s[2].get<int>()};
        if (span.line < 0 || span.line >= static_cast<int>(p.recipe.ingredient_lines.size()) || span.begin < 0 ||
            span.end <= span.begin ||
            span.end > static_cast<int>(p.recipe.ingredient_lines[static_cast<std::size_t>(span.line)].size()))
          schema_fail(line_no, "ground_truth_spans", "span out of range");
        p.spans.push_back(span);
      }
    }
    corpus.pairs.push_back(std::move(p));
  }
  if (!have_header) throw SchemaError("line 1: field 'schema_version': missing header");
  return corpus;
}

// ---------------------------------------------------------------------------

Split split(const Corpus& corpus, double train_frac, double val_frac, std::uint64_t seed) {
  if (!(train_frac > 0 && train_frac < 1) || !(val_frac > 0 && val_frac < 1))
    throw ConfigError("split fractions must lie in (0, 1)");
  if (train_frac + val_frac >= 1) throw ConfigError("train_frac + val_frac must be < 1");

  std::map<std::string, std::vector<std::size_t>> by_cat;
  for (std::size_t i = 0; i < corpus.pairs.size(); ++i) by_cat[corpus.pairs[i].category()].push_back(i);
  bool stratify = !by_cat.empty();
  for (const auto& [cat, idx] : by_cat) stratify = stratify && idx.size() >= 3;

  std::vector<std::vector<std::size_t>> groups;
  if (stratify) {
    for (const auto& label : corpus.categories.labels())
      if (auto it = by_cat.find(label); it != by_cat.end()) groups.push_back(it->second);
  } else {
    std::vector<std::size_t> all(corpus.pairs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    groups.push_back(std::move(all));
  }

  Rng rng(seed, 0x5b1u);
  Split out;
  for (auto& g : groups) {
    rng.shuffle(g);
    const auto n = static_cast<double>(g.size());
    const auto n_train = static_cast<std::size_t>(std::llround(n * train_frac));
    const auto n_val = std::min(g.size() - n_train, static_cast<std::size_t>(std::llround(n * val_frac)));
    for (std::size_t k = 0; k < g.size(); ++k) {
      const RecipePair& p = corpus.pairs[g[k]];
      if (k < n_train)
        out.train.push_back(p);
      else if (k < n_train + n_val)
        out.val.push_back(p);
      else
        out.test.push_back(p);
    }
  }
  return out;
}

}  // namespace seje::corpus
