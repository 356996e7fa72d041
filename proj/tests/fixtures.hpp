#pragma once

#include <string>

#include "transfer/corpus.hpp"

namespace fixtures {

inline transfer::SentencePair make_pair(const std::string& l2_tree, const std::string& align,
                                        const std::string& l1_tree = {}, std::size_t l1_len = 0,
                                        const std::string& lang = "xx") {
  transfer::SentencePair p;
  p.native_language = lang;
  p.l2_tree = transfer::parse_bracketed(l2_tree);
  p.l2_tokens = p.l2_tree.tokens();
  if (!l1_tree.empty()) {
    p.l1_tree = transfer::parse_bracketed(l1_tree);
    p.l1_tokens = p.l1_tree->tokens();
  } else {
    for (std::size_t j = 0; j < l1_len; ++j) p.l1_tokens.push_back("t" + std::to_string(j));
  }
  p.alignment = transfer::parse_pharaoh(align);
  p.has_alignment = true;
  return p;
}

// "I play often sports" against "I often play sports", VP level.
inline transfer::SentencePair figure1() {
  return make_pair("(VP (VB play) (ADVP (RB often)) (NP (NNS sports)))", "0-1 1-0 2-2",
                   "(VP (ADVP (RB often)) (VP (VB play) (NP (NNS sports))))");
}

inline const char* kFig2cRule = "(VP (VB x0) (ADVP x1) (NP x2)) ||| x1 x0 x2";
inline const char* kFig2cPattern =
    "(VP (VB x0) (ADVP x1) (NP x2)) ||| (VP (ADVP x1) (VP (VB x0) (NP x2)))";

}  // namespace fixtures
