#pragma once

// Synthetic planted-genus corpora.
//
// Every sentence instantiates one of a fixed set of reordering templates.
// With a language-specific probability the learner (L2) side shows the
// template's marked word order; otherwise L2 and L1 are identical. Genera
// differ only in which templates they reorder often, and words are drawn
// uniformly regardless of language, so the genus signal is purely structural.

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "transfer/alignment.hpp"
#include "transfer/corpus.hpp"
#include "transfer/error.hpp"
#include "transfer/metrics.hpp"
#include "transfer/treebank.hpp"

namespace transfer {

/// A reordering template. Tree tokens are placeholders "_k" naming the k-th
/// L2 token; the L1 tree places the same placeholders in corrected order.
/// The expected patterns are written out by hand and used as bookkeeping
/// for tests.
struct ReorderTemplate {
  std::string name;
  std::string l2;
  std::string l1;
  std::string expected_t2s;
  std::string expected_t2t;
};

inline const std::vector<ReorderTemplate>& reorder_templates() {
  static const std::vector<ReorderTemplate> t = {
      {"adverb-verb",
       "(S (NP (PRP _0)) (VP (VB _1) (ADVP (RB _2)) (NP (NNS _3))))",
       "(S (NP (PRP _0)) (VP (ADVP (RB _2)) (VP (VB _1) (NP (NNS _3)))))",
       "(VP (VB x0) (ADVP x1) (NP x2)) ||| x1 x0 x2",
       "(VP (VB x0) (ADVP x1) (NP x2)) ||| (VP (ADVP x1) (VP (VB x0) (NP x2)))"},
      {"noun-compound",
       "(S (NP (NN _0) (NN _1)) (VP (VBZ _2)))",
       "(S (NP (NN _1) (NN _0)) (VP (VBZ _2)))",
       "(NP (NN x0) (NN x1)) ||| x1 x0",
       "(NP (NN x0) (NN x1)) ||| (NP (NN x1) (NN x0))"},
      {"modal",
       "(S (NP (PRP _0)) (VP (MD _1) (VP (VB _2))))",
       "(SQ (MD _1) (NP (PRP _0)) (VP (VB _2)))",
       "(S (NP x0) (VP (MD x1) (VP x2))) ||| x1 x0 x2",
       "(S (NP x0) (VP (MD x1) (VP x2))) ||| (SQ (MD x1) (NP x0) (VP x2))"},
      {"np-pp",
       "(S (NP (NP (NN _0)) (PP (IN _1) (NP (NN _2)))) (VP (VBZ _3)))",
       "(S (NP (NP (IN _1) (NN _2)) (NN _0)) (VP (VBZ _3)))",
       "(NP (NP x0) (PP x1)) ||| x1 x0",
       "(NP (NP x0) (PP x1)) ||| (NP (NP x1) (NN x0))"},
      {"noun-adjective",
       "(S (NP (DT _0) (NN _1) (JJ _2)) (VP (VBZ _3)))",
       "(S (NP (DT _0) (JJ _2) (NN _1)) (VP (VBZ _3)))",
       "(NP (DT x0) (NN x1) (JJ x2)) ||| x0 x2 x1",
       "(NP (DT x0) (NN x1) (JJ x2)) ||| (NP (DT x0) (JJ x2) (NN x1))"},
      {"verb-final",
       "(S (NP (PRP _0)) (VP (NP (DT _1) (NN _2)) (VBD _3)))",
       "(S (NP (PRP _0)) (VP (VBD _3) (NP (DT _1) (NN _2))))",
       "(VP (NP x0) (VBD x1)) ||| x1 x0",
       "(VP (NP x0) (VBD x1)) ||| (VP (VBD x1) (NP x0))"},
      {"verb-second",
       "(S (ADVP (RB _0)) (VP (VBD _1)) (NP (NN _2)))",
       "(S (ADVP (RB _0)) (NP (NN _2)) (VP (VBD _1)))",
       "(S (ADVP x0) (VP x1) (NP x2)) ||| x0 x2 x1",
       "(S (ADVP x0) (VP x1) (NP x2)) ||| (S (ADVP x0) (NP x2) (VP x1))"},
      {"pp-object",
       "(S (NP (PRP _0)) (VP (VB _1) (PP (IN _2) (NP (NN _3))) (NP (NN _4))))",
       "(S (NP (PRP _0)) (VP (VB _1) (NP (NN _4)) (PP (IN _2) (NP (NN _3)))))",
       "(VP (VB x0) (PP x1) (NP x2)) ||| x0 x2 x1",
       "(VP (VB x0) (PP x1) (NP x2)) ||| (VP (VB x0) (NP x2) (PP x1))"},
  };
  return t;
}

inline const std::vector<std::string>& lexicon(const std::string& pos) {
  static const std::map<std::string, std::vector<std::string>> lex = {
      {"PRP", {"i", "you", "he", "she", "we", "they"}},
      {"VB", {"play", "eat", "read", "watch", "take", "make", "put", "swim"}},
      {"VBD", {"played", "ate", "read", "watched", "took", "made", "came", "left"}},
      {"VBZ", {"works", "sleeps", "runs", "helps", "opens", "closes"}},
      {"MD", {"can", "will", "should", "must", "may"}},
      {"RB", {"often", "always", "never", "usually", "yesterday", "today"}},
      {"NN", {"book", "table", "city", "friend", "school", "music", "teacher", "shop", "river"}},
      {"NNS", {"sports", "books", "games", "movies", "songs"}},
      {"DT", {"the", "a", "this", "that"}},
      {"JJ", {"big", "small", "old", "new", "good", "red"}},
      {"IN", {"on", "in", "at", "with", "near"}},
  };
  auto it = lex.find(pos);
  if (it == lex.end()) throw Error("synth: no lexicon for POS " + pos);
  return it->second;
}

struct SynthOptions {
  int genera = 4;
  /// One entry per genus, or a single entry applied to every genus.
  std::vector<int> langs_per_genus = {3};
  int pairs_per_lang = 2000;
  std::uint64_t seed = 1;
  double high_rate = 0.6;     // reordering rate of a genus's own templates
  double low_rate = 0.05;     // reordering rate of every other template
  double perturbation = 0.05; // per-language uniform jitter, +/- this much
};

struct SynthLanguage {
  std::string name;
  std::string genus;
  std::vector<double> rates;  // per template
};

struct SynthCorpus {
  std::vector<SynthLanguage> languages;
  std::vector<SentencePair> records;

  GenusLabeling genus_labels() const {
    GenusLabeling g;
    for (const auto& l : languages) g[l.name] = l.genus;
    return g;
  }
};

namespace detail {

/// Portable draws from mt19937_64 (std distributions differ across
/// standard libraries).
struct SynthRng {
  explicit SynthRng(std::uint64_t seed) : gen(seed) {}
  double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }
  std::mt19937_64 gen;
};

inline ConstTree fill_tokens(const ConstTree& tmpl, const std::vector<std::string>& words) {
  TreeBuilder b;
  auto rec = [&](auto&& self, NodeId v) -> void {
    if (tmpl.is_leaf(v)) {
      int k = std::stoi(tmpl.token(tmpl.node(v).leaf_index).substr(1));
      b.leaf(tmpl.label(v), words.at(static_cast<std::size_t>(k)));
      return;
    }
    b.open(tmpl.label(v));
    for (NodeId c : tmpl.children(v)) self(self, c);
    b.close();
  };
  rec(rec, tmpl.root());
  return b.finish();
}

inline int placeholder(const ConstTree& t, int leaf) { return std::stoi(t.token(leaf).substr(1)); }

}  // namespace detail

/// Which templates each genus reorders at the high rate.
inline std::vector<std::vector<int>> genus_templates(int genera, detail::SynthRng& rng) {
  const int t = static_cast<int>(reorder_templates().size());
  std::vector<std::vector<int>> out;
  for (int g = 0; g < genera; ++g) {
    if (2 * genera <= t) {
      out.push_back({2 * g, 2 * g + 1});
    } else {
      int a = static_cast<int>(rng.index(static_cast<std::size_t>(t)));
      int b = static_cast<int>(rng.index(static_cast<std::size_t>(t - 1)));
      if (b >= a) ++b;
      out.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  return out;
}

inline SynthCorpus synthesize(const SynthOptions& opts) {
  if (opts.genera < 1 || opts.pairs_per_lang < 1 || opts.langs_per_genus.empty())
    throw Error("synth: counts must be >= 1");
  if (opts.langs_per_genus.size() != 1 &&
      opts.langs_per_genus.size() != static_cast<std::size_t>(opts.genera))
    throw Error("synth: langs_per_genus needs 1 or " + std::to_string(opts.genera) + " entries");
  for (int n : opts.langs_per_genus)
    if (n < 1) throw Error("synth: counts must be >= 1");

  const auto& templates = reorder_templates();
  std::vector<ConstTree> l2_shape, l1_shape;
  for (const auto& t : templates) {
    l2_shape.push_back(parse_bracketed(t.l2));
    l1_shape.push_back(parse_bracketed(t.l1));
  }

  detail::SynthRng rng(opts.seed);
  auto owned = genus_templates(opts.genera, rng);

  SynthCorpus out;
  for (int g = 0; g < opts.genera; ++g) {
    int count = opts.langs_per_genus.size() == 1 ? opts.langs_per_genus[0]
                                                 : opts.langs_per_genus[static_cast<std::size_t>(g)];
    for (int l = 0; l < count; ++l) {
      SynthLanguage lang;
      lang.name = "g" + std::to_string(g) + "_l" + std::to_string(l);
      lang.genus = "genus" + std::to_string(g);
      for (std::size_t t = 0; t < templates.size(); ++t) {
        bool own = std::find(owned[static_cast<std::size_t>(g)].begin(),
                             owned[static_cast<std::size_t>(g)].end(),
                             static_cast<int>(t)) != owned[static_cast<std::size_t>(g)].end();
        double base = own ? opts.high_rate : opts.low_rate;
        double jitter = (2.0 * rng.uniform() - 1.0) * opts.perturbation;
        lang.rates.push_back(std::clamp(base + jitter, 0.0, 1.0));
      }
      out.languages.push_back(std::move(lang));
    }
  }

  for (const auto& lang : out.languages) {
    for (int s = 0; s < opts.pairs_per_lang; ++s) {
      std::size_t t = rng.index(templates.size());
      bool reorder = rng.uniform() < lang.rates[t];
      const ConstTree& canon = l1_shape[t];
      // Words indexed by placeholder, drawn by the POS of their leaf.
      std::vector<std::string> words(canon.num_tokens());
      for (std::size_t leaf = 0; leaf < canon.num_tokens(); ++leaf) {
        int k = detail::placeholder(canon, static_cast<int>(leaf));
        const auto& lex = lexicon(canon.label(canon.leaf(static_cast<int>(leaf))));
        words[static_cast<std::size_t>(k)] = lex[rng.index(lex.size())];
      }
      SentencePair p;
      p.native_language = lang.name;
      p.l1_tree = detail::fill_tokens(canon, words);
      p.l1_tokens = p.l1_tree->tokens();
      const ConstTree& l2 = reorder ? l2_shape[t] : canon;
      p.l2_tree = detail::fill_tokens(l2, words);
      p.l2_tokens = p.l2_tree.tokens();
      // L2 position of each placeholder, then one link per L1 position.
      std::vector<int> l2_pos(words.size());
      for (std::size_t i = 0; i < l2.num_tokens(); ++i)
        l2_pos[static_cast<std::size_t>(detail::placeholder(l2, static_cast<int>(i)))] = static_cast<int>(i);
      for (std::size_t j = 0; j < canon.num_tokens(); ++j)
        p.alignment.add(l2_pos[static_cast<std::size_t>(detail::placeholder(canon, static_cast<int>(j)))],
                        static_cast<int>(j));
      p.has_alignment = true;
      out.records.push_back(std::move(p));
    }
  }
  return out;
}

inline void write_corpus_jsonl(std::ostream& os, const std::vector<SentencePair>& records) {
  for (const auto& r : records) os << to_json(r).dump() << '\n';
}

inline void write_genus_tsv(std::ostream& os, const GenusLabeling& labels) {
  for (const auto& [lang, genus] : labels) os << lang << '\t' << genus << '\n';
}

}  // namespace transfer
