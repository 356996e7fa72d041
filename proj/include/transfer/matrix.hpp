#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "transfer/error.hpp"
#include "transfer/feature.hpp"

namespace transfer {

/// Feature-by-language count matrix (Np x Nl).
struct LangPatternMatrix {
  std::vector<std::string> languages;
  std::vector<std::string> features;
  Eigen::MatrixXd counts;

  std::size_t num_languages() const { return languages.size(); }
  std::size_t num_features() const { return features.size(); }

  /// Per-language relative frequencies; every column sums to 1.
  Eigen::MatrixXd normalized() const {
    Eigen::MatrixXd out = counts;
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      double s = out.col(j).sum();
      if (s <= 0.0) throw Error("language '" + languages[static_cast<std::size_t>(j)] + "' has no features");
      out.col(j) /= s;
    }
    return out;
  }
};

/// Builds the matrix over the union vocabulary. Features whose total count
/// across languages is below min_count are dropped before anything else.
/// Languages and features are in lexicographic order.
inline LangPatternMatrix build_matrix(const LanguageFeatures& per_language,
                                      std::uint64_t min_count = 2) {
  if (per_language.size() < 2) throw Error("build_matrix: need at least 2 languages");
  std::map<std::string, std::uint64_t> totals;
  for (const auto& [lang, counts] : per_language)
    for (const auto& [key, n] : counts) totals[key] += n;

  LangPatternMatrix m;
  std::map<std::string, Eigen::Index> row;
  for (const auto& [key, n] : totals) {
    if (n < min_count) continue;
    row.emplace(key, static_cast<Eigen::Index>(m.features.size()));
    m.features.push_back(key);
  }
  for (const auto& [lang, counts] : per_language) m.languages.push_back(lang);
  m.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m.features.size()),
                                   static_cast<Eigen::Index>(m.languages.size()));
  Eigen::Index col = 0;
  for (const auto& [lang, counts] : per_language) {
    double sum = 0.0;
    for (const auto& [key, n] : counts) {
      auto it = row.find(key);
      if (it == row.end()) continue;
      m.counts(it->second, col) = static_cast<double>(n);
      sum += static_cast<double>(n);
    }
    if (sum <= 0.0)
      throw Error("language '" + lang + "' has no features" +
                  (counts.empty() ? std::string() : " after min_count pruning"));
    ++col;
  }
  return m;
}

/// TSV: header "feature<TAB>lang..." then one row of integer counts per feature.
inline void write_matrix_tsv(std::ostream& os, const LangPatternMatrix& m) {
  os << "feature";
  for (const auto& l : m.languages) os << '\t' << l;
  os << '\n';
  for (std::size_t i = 0; i < m.features.size(); ++i) {
    os << m.features[i];
    for (Eigen::Index j = 0; j < m.counts.cols(); ++j)
      os << '\t' << static_cast<std::uint64_t>(m.counts(static_cast<Eigen::Index>(i), j));
    os << '\n';
  }
}

inline LangPatternMatrix read_matrix_tsv(std::istream& is) {
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    return out;
  };
  LangPatternMatrix m;
  std::string line;
  if (!std::getline(is, line)) throw Error("matrix TSV: missing header");
  auto header = split(line);
  if (header.size() < 3 || header[0] != "feature")
    throw Error("matrix TSV: header must be 'feature' followed by at least 2 languages");
  m.languages.assign(header.begin() + 1, header.end());
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != header.size())
      throw Error("matrix TSV line " + std::to_string(line_no) + ": wrong column count");
    m.features.push_back(cells[0]);
    std::vector<double> r;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      try {
        r.push_back(static_cast<double>(std::stoull(cells[k])));
      } catch (const std::exception&) {
        throw Error("matrix TSV line " + std::to_string(line_no) + ": bad count");
      }
    }
    rows.push_back(std::move(r));
  }
  m.counts = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()),
                                   static_cast<Eigen::Index>(m.languages.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m.counts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

}  // namespace transfer
