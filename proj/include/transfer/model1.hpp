#pragma once

// Lexical translation model (IBM Model 1) trained with EM. Used to align
// corpora that arrive without external word alignments.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "transfer/alignment.hpp"
#include "transfer/error.hpp"

namespace transfer {

/// One sentence pair as (l2 tokens, l1 tokens).
using TokenPair = std::pair<std::vector<std::string>, std::vector<std::string>>;

/// t(l1 word | l2 word), with a null token on the L2 side.
class Model1 {
 public:
  static constexpr const char* kNullToken = "NULL";

  /// Builds both vocabularies and the uniform initial table.
  explicit Model1(std::span<const TokenPair> corpus) {
    l2_vocab_.emplace_back(kNullToken);
    for (const auto& [l2, l1] : corpus) {
      if (l2.empty() || l1.empty()) continue;
      for (const auto& w : l2) intern(l2_ids_, l2_vocab_, w);
      for (const auto& w : l1) intern(l1_ids_, l1_vocab_, w);
    }
    table_.assign(l2_vocab_.size(), {});
    if (l1_vocab_.empty()) throw Error("Model1: corpus has no non-empty sentence pairs");
    const double uniform = 1.0 / static_cast<double>(l1_vocab_.size());
    for (const auto& [l2, l1] : corpus) {
      if (l2.empty() || l1.empty()) continue;
      for (const auto& f : l1) {
        int fi = l1_ids_.at(f);
        table_[0][fi] = uniform;
        for (const auto& e : l2) table_[static_cast<std::size_t>(l2_ids_.at(e))][fi] = uniform;
      }
    }
  }

  std::size_t l2_vocab_size() const { return l2_vocab_.size(); }
  std::size_t l1_vocab_size() const { return l1_vocab_.size(); }
  int iterations_done() const { return iterations_; }

  /// t(l1 | l2). Pass kNullToken as l2 for the null word.
  double prob(const std::string& l1, const std::string& l2) const {
    auto fi = l1_ids_.find(l1);
    if (fi == l1_ids_.end()) return 0.0;
    int ei = 0;
    if (l2 != kNullToken) {
      auto it = l2_ids_.find(l2);
      if (it == l2_ids_.end()) return 0.0;
      ei = it->second;
    }
    return prob_ids(fi->second, ei);
  }

  /// Sum over the L1 vocabulary of t(. | l2) for every L2 type (null first).
  std::vector<double> row_sums() const {
    std::vector<double> out;
    for (std::size_t e = 0; e < table_.size(); ++e) {
      if (iterations_ == 0) {
        out.push_back(1.0);  // uniform rows are 1/|V| over the whole vocabulary
        continue;
      }
      double s = 0.0;
      for (int f : sorted_keys(table_[e])) s += table_[e].at(f);
      out.push_back(s);
    }
    return out;
  }

  /// Corpus log-likelihood, sum_s sum_j log(sum_i t(f_j | e_i) / (l + 1)).
  double log_likelihood(std::span<const TokenPair> corpus) const {
    double ll = 0.0;
    for (const auto& [l2, l1] : corpus) {
      if (l2.empty() || l1.empty()) continue;
      auto es = ids_with_null(l2);
      const double norm = std::log(static_cast<double>(es.size()));
      for (const auto& f : l1) {
        int fi = l1_ids_.at(f);
        double s = 0.0;
        for (int e : es) s += prob_ids(fi, e);
        ll += std::log(s) - norm;
      }
    }
    return ll;
  }

  /// One EM iteration over the corpus. Accumulation order is fixed by corpus
  /// order, so results are reproducible bit-for-bit.
  void em_step(std::span<const TokenPair> corpus) {
    std::vector<std::unordered_map<int, double>> counts(table_.size());
    std::vector<double> totals(table_.size(), 0.0);
    for (const auto& [l2, l1] : corpus) {
      if (l2.empty() || l1.empty()) continue;
      auto es = ids_with_null(l2);
      for (const auto& f : l1) {
        int fi = l1_ids_.at(f);
        double denom = 0.0;
        for (int e : es) denom += prob_ids(fi, e);
        if (denom <= 0.0) continue;
        for (int e : es) {
          double c = prob_ids(fi, e) / denom;
          counts[static_cast<std::size_t>(e)][fi] += c;
          totals[static_cast<std::size_t>(e)] += c;
        }
      }
    }
    for (std::size_t e = 0; e < table_.size(); ++e) {
      table_[e].clear();
      if (totals[e] <= 0.0) continue;
      for (const auto& [f, c] : counts[e]) table_[e][f] = c / totals[e];
    }
    ++iterations_;
  }

  /// Links each L1 token j to argmax_i t(l1_j | l2_i); ties go to the lowest
  /// L2 index and the null word wins only when strictly better.
  Alignment align(const std::vector<std::string>& l2, const std::vector<std::string>& l1) const {
    Alignment a;
    if (l2.empty()) return a;
    for (std::size_t j = 0; j < l1.size(); ++j) {
      double best = 0.0;
      int best_i = -1;
      for (std::size_t i = 0; i < l2.size(); ++i) {
        double p = prob(l1[j], l2[i]);
        if (p > best) {
          best = p;
          best_i = static_cast<int>(i);
        }
      }
      if (best_i < 0) continue;
      if (prob(l1[j], kNullToken) > best) continue;
      a.add(best_i, static_cast<int>(j));
    }
    return a;
  }

  /// TSV dump "l2_word<TAB>l1_word<TAB>prob", sorted by words, zero entries omitted.
  void write_tsv(std::ostream& os) const {
    std::vector<std::tuple<std::string, std::string, double>> rows;
    for (std::size_t e = 0; e < table_.size(); ++e) {
      for (const auto& [f, p] : table_[e]) {
        double v = iterations_ == 0 ? uniform() : p;
        if (v > 0.0) rows.emplace_back(l2_vocab_[e], l1_vocab_[static_cast<std::size_t>(f)], v);
      }
    }
    std::sort(rows.begin(), rows.end());
    char buf[64];
    for (const auto& [e, f, p] : rows) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
      (void)ec;
      os << e << '\t' << f << '\t' << std::string_view(buf, static_cast<std::size_t>(ptr - buf))
         << '\n';
    }
  }

 private:
  static void intern(std::unordered_map<std::string, int>& ids, std::vector<std::string>& vocab,
                     const std::string& w) {
    if (ids.emplace(w, static_cast<int>(vocab.size())).second) vocab.push_back(w);
  }

  static std::vector<int> sorted_keys(const std::unordered_map<int, double>& m) {
    std::vector<int> k;
    k.reserve(m.size());
    for (const auto& kv : m) k.push_back(kv.first);
    std::sort(k.begin(), k.end());
    return k;
  }

  double uniform() const { return 1.0 / static_cast<double>(l1_vocab_.size()); }

  double prob_ids(int f, int e) const {
    if (iterations_ == 0) return uniform();
    const auto& row = table_[static_cast<std::size_t>(e)];
    auto it = row.find(f);
    return it == row.end() ? 0.0 : it->second;
  }

  std::vector<int> ids_with_null(const std::vector<std::string>& l2) const {
    std::vector<int> es;
    es.reserve(l2.size() + 1);
    es.push_back(0);
    for (const auto& w : l2) es.push_back(l2_ids_.at(w));
    return es;
  }

  std::unordered_map<std::string, int> l2_ids_, l1_ids_;
  std::vector<std::string> l2_vocab_, l1_vocab_;
  std::vector<std::unordered_map<int, double>> table_;
  int iterations_ = 0;
};

/// Runs `iterations` EM steps. When `ll_trace` is given it receives the
/// log-likelihood before the first step and after every step.
inline Model1 train_model1(std::span<const TokenPair> corpus, int iterations,
                           std::vector<double>* ll_trace = nullptr) {
  if (iterations < 1) throw Error("train_model1: iterations must be >= 1");
  Model1 m(corpus);
  if (ll_trace) ll_trace->push_back(m.log_likelihood(corpus));
  for (int it = 0; it < iterations; ++it) {
    m.em_step(corpus);
    if (ll_trace) ll_trace->push_back(m.log_likelihood(corpus));
  }
  return m;
}

}  // namespace transfer
