#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "oracles/random_pairs.hpp"
#include "transfer/treebank.hpp"

using namespace transfer;

TEST(Treebank, ParsesSimpleTree) {
  auto t = parse_bracketed("(S (NP (PRP I)) (VP (VBP play) (NN tennis)))");
  EXPECT_EQ(t.num_tokens(), 3u);
  EXPECT_EQ(t.label(t.root()), "S");
  EXPECT_EQ(t.tokens(), (std::vector<std::string>{"I", "play", "tennis"}));
  EXPECT_EQ(t.to_string(), "(S (NP (PRP I)) (VP (VBP play) (NN tennis)))");
}

TEST(Treebank, TruncatedInputReportsEndOffset) {
  try {
    parse_bracketed("((NP");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
}

TEST(Treebank, RejectsMalformedInput) {
  for (const char* bad : {"", "   ", "NP", "(NP)", "(NP a) (NP b)", "(S (NP a) b)", "(NP a))", "( (NN a))"})
    EXPECT_THROW(parse_bracketed(bad), ParseError) << bad;
}

TEST(Treebank, Spans) {
  auto t = parse_bracketed("(S (NP (PRP I)) (VP (VB eat) (NN rice)))");
  EXPECT_EQ(t.span(t.root()), (Span{0, 2}));
  NodeId vp = t.children(t.root())[1];
  EXPECT_EQ(t.label(vp), "VP");
  EXPECT_EQ(t.span(vp), (Span{1, 2}));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(t.span(t.leaf(i)), (Span{i, i}));
  EXPECT_THROW(t.span(99), Error);
}

TEST(Treebank, MinimalCoveringSubtree) {
  auto t = parse_bracketed("(S (NP (PRP I)) (VP (VB eat) (NN rice)))");
  std::vector<int> a{1, 2}, b{0, 2}, c{2}, none{}, out{5};
  EXPECT_EQ(t.label(t.minimal_covering_subtree(a)), "VP");
  EXPECT_EQ(t.minimal_covering_subtree(b), t.root());
  EXPECT_EQ(t.minimal_covering_subtree(c), t.leaf(2));
  EXPECT_EQ(t.label(t.minimal_covering_subtree(c)), "NN");
  EXPECT_THROW(t.minimal_covering_subtree(none), Error);
  EXPECT_THROW(t.minimal_covering_subtree(out), Error);
}

TEST(Treebank, CanonicalizeNormalizesWhitespace) {
  EXPECT_EQ(canonicalize("  ( S\n\t(NP (NN a) )(VP(VB b)))  "), "(S (NP (NN a)) (VP (VB b)))");
}

TEST(Treebank, StripAfterOption) {
  ParseOptions opts{"-="};
  auto t = parse_bracketed("(S (NP-SBJ=1 (NN a)) (-NONE- (NN b)))", opts);
  EXPECT_EQ(t.to_string(), "(S (NP (NN a)) (-NONE- (NN b)))");
}

// Random generated trees, re-spaced, must serialize back to canonical form.
TEST(TreebankProperty, RoundTripRandomTrees) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    int n = oracle::uniform_int(rng, 1, 12);
    std::string canon = oracle::random_tree(rng, 0, n - 1, "w");
    std::string messy;
    for (char c : canon) {
      if (c == ' ') messy += std::string(static_cast<std::size_t>(oracle::uniform_int(rng, 1, 3)), oracle::uniform_int(rng, 0, 1) ? ' ' : '\n');
      else messy += c;
      if (c == '(' && oracle::uniform_int(rng, 0, 2) == 0) messy += ' ';
    }
    auto t = parse_bracketed(messy);
    ASSERT_EQ(t.to_string(), canon);
    ASSERT_EQ(canonicalize(canon), canon);
    ASSERT_EQ(parse_bracketed(t.to_string()), t);
  }
}

TEST(TreebankProperty, StructuralInvariants) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    int n = oracle::uniform_int(rng, 1, 12);
    auto t = parse_bracketed(oracle::random_tree(rng, 0, n - 1, "w"));
    ASSERT_EQ(t.span(t.root()), (Span{0, n - 1}));
    ASSERT_EQ(t.parent(t.root()), kNoNode);
    int roots = 0;
    for (NodeId v : t.preorder()) {
      if (t.parent(v) == kNoNode) ++roots;
      else {
        const auto& sib = t.children(t.parent(v));
        ASSERT_EQ(std::count(sib.begin(), sib.end(), v), 1);
      }
      ASSERT_FALSE(t.label(v).empty());
      if (t.is_leaf(v)) continue;
      const auto& ch = t.children(v);
      ASSERT_EQ(t.span(v).begin, t.span(ch.front()).begin);
      ASSERT_EQ(t.span(v).end, t.span(ch.back()).end);
      for (std::size_t k = 1; k < ch.size(); ++k) ASSERT_EQ(t.span(ch[k]).begin, t.span(ch[k - 1]).end + 1);
    }
    ASSERT_EQ(roots, 1);
    for (int i = 0; i < n; ++i) ASSERT_EQ(t.span(t.leaf(i)), (Span{i, i}));
  }
}
