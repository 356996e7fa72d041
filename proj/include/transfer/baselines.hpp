#pragma once

// Comparison feature families: aligned word pairs (lexical) and CFG
// productions of the L2 tree (structural, no lexical rules).

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "transfer/corpus.hpp"
#include "transfer/feature.hpp"

namespace transfer {

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

/// One `wp:l2|||l1` feature per alignment link, tokens lowercased.
inline std::vector<FeatureKey> word_pair_features(const SentencePair& pair) {
  std::vector<FeatureKey> out;
  out.reserve(pair.alignment.size());
  for (const auto& [i, j] : pair.alignment)
    out.push_back({Family::kWordPair, lowercase(pair.l2_tokens.at(static_cast<std::size_t>(i))) +
                                          "|||" +
                                          lowercase(pair.l1_tokens.at(static_cast<std::size_t>(j)))});
  return out;
}

/// One `cfg:LHS -> RHS...` feature per non-preterminal node of the L2 tree.
inline std::vector<FeatureKey> cfg_features(const ConstTree& tree) {
  std::vector<FeatureKey> out;
  for (NodeId v : tree.preorder()) {
    if (tree.is_leaf(v)) continue;
    std::string body = tree.label(v) + " ->";
    for (NodeId c : tree.children(v)) {
      body += ' ';
      body += tree.label(c);
    }
    out.push_back({Family::kCfg, std::move(body)});
  }
  return out;
}

inline std::vector<FeatureKey> cfg_features(const SentencePair& pair) {
  return cfg_features(pair.l2_tree);
}

}  // namespace transfer
