#pragma once

// Delexicalized tree-to-tree patterns from anchor-based tree alignment.
//
// An anchor is an L2 subtree whose projected L1 positions contain an
// inversion. Anchors are found bottom-up; an ancestor is kept only when it
// holds an inversion no kept descendant already covers. Each anchor is paired
// with the smallest L1 subtree covering its projection, and both sides are
// collapsed into variables at internally monotone constituents.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "transfer/alignment.hpp"
#include "transfer/corpus.hpp"
#include "transfer/error.hpp"
#include "transfer/t2s.hpp"
#include "transfer/treebank.hpp"

namespace transfer {

struct T2TPattern {
  ConstTree l2;  // variable leaves x0..xk in L2 order
  ConstTree l1;  // same variables, in L1 order

  std::string canonical() const { return l2.to_string() + " ||| " + l1.to_string(); }

  /// Variable indices in the order they are read off the L1 fragment.
  std::vector<int> l1_order() const {
    std::vector<int> out;
    for (const auto& t : l1.tokens()) out.push_back(parse_variable(t));
    return out;
  }

  friend bool operator==(const T2TPattern& a, const T2TPattern& b) {
    return a.canonical() == b.canonical();
  }
};

inline T2TPattern parse_t2t_pattern(std::string_view text) {
  auto sep = text.find(" ||| ");
  if (sep == std::string_view::npos) throw ParseError("pattern without ' ||| '", 0);
  return T2TPattern{parse_bracketed(text.substr(0, sep)), parse_bracketed(text.substr(sep + 5))};
}

namespace detail {

/// Representative L1 index (minimum link) per L2 token, -1 when unaligned.
inline std::vector<int> representatives(const Alignment& a, std::size_t l2_len) {
  std::vector<int> rep(l2_len, -1);
  for (const auto& [i, j] : a)
    if (i >= 0 && static_cast<std::size_t>(i) < l2_len &&
        (rep[static_cast<std::size_t>(i)] < 0 || j < rep[static_cast<std::size_t>(i)]))
      rep[static_cast<std::size_t>(i)] = j;
  return rep;
}

}  // namespace detail

/// Kept anchors in post-order.
inline std::vector<NodeId> find_anchors(const ConstTree& l2, const Alignment& a) {
  auto rep = detail::representatives(a, l2.num_tokens());
  std::vector<NodeId> kept;
  for (NodeId v : l2.postorder()) {
    Span s = l2.span(v);
    bool uncovered = false;
    for (int i = s.begin; i <= s.end && !uncovered; ++i) {
      if (rep[static_cast<std::size_t>(i)] < 0) continue;
      for (int j = i + 1; j <= s.end && !uncovered; ++j) {
        if (rep[static_cast<std::size_t>(j)] < 0 ||
            rep[static_cast<std::size_t>(i)] <= rep[static_cast<std::size_t>(j)])
          continue;
        bool covered = std::any_of(kept.begin(), kept.end(), [&](NodeId k) {
          Span ks = l2.span(k);
          return ks.contains(i) && ks.contains(j);
        });
        if (!covered) uncovered = true;
      }
    }
    if (uncovered) kept.push_back(v);
  }
  return kept;
}

/// Pattern rooted at `anchor`, or nullopt when either side cannot be
/// collapsed into a fully delexicalized fragment.
inline std::optional<T2TPattern> extract_pattern(NodeId anchor, const ConstTree& l2,
                                                 const ConstTree& l1, const Alignment& a) {
  const auto per_token = a.l2_to_l1(l2.num_tokens());
  const auto rep = detail::representatives(a, l2.num_tokens());
  std::vector<std::vector<int>> l1_sources(l1.num_tokens());
  for (const auto& [i, j] : a)
    if (static_cast<std::size_t>(j) < l1_sources.size())
      l1_sources[static_cast<std::size_t>(j)].push_back(i);

  auto aligned_set = [&](Span s) {
    std::vector<int> out;
    for (int i = s.begin; i <= s.end; ++i) {
      const auto& t = per_token[static_cast<std::size_t>(i)];
      out.insert(out.end(), t.begin(), t.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  // A constituent collapses to a variable when it owns a contiguous L1 block
  // (no index inside the block is linked from outside the constituent, which
  // also makes blocks of sibling variables disjoint) and its projection has
  // no internal inversion.
  auto block_of = [&](NodeId u) -> std::optional<Span> {
    Span s = l2.span(u);
    auto set = aligned_set(s);
    if (set.empty()) return std::nullopt;
    Span block{set.front(), set.back()};
    for (int j = block.begin; j <= block.end; ++j)
      for (int i : l1_sources[static_cast<std::size_t>(j)])
        if (!s.contains(i)) return std::nullopt;
    int last = -1;
    for (int i = s.begin; i <= s.end; ++i) {
      int r = rep[static_cast<std::size_t>(i)];
      if (r < 0) continue;
      if (r < last) return std::nullopt;
      last = r;
    }
    return block;
  };

  TreeBuilder b2;
  std::vector<Span> blocks;
  bool failed = false;
  auto emit_l2 = [&](auto&& self, NodeId v, bool is_root) -> void {
    if (failed) return;
    if (!is_root) {
      if (auto block = block_of(v)) {
        b2.leaf(l2.label(v), variable_name(static_cast<int>(blocks.size())));
        blocks.push_back(*block);
        return;
      }
    }
    if (l2.is_leaf(v)) {
      failed = true;
      return;
    }
    b2.open(l2.label(v));
    for (NodeId c : l2.children(v)) self(self, c, false);
    if (!failed) b2.close();
  };
  emit_l2(emit_l2, anchor, true);
  if (failed || blocks.size() < 2) return std::nullopt;

  auto covered = aligned_set(l2.span(anchor));
  for (int j : covered)
    if (static_cast<std::size_t>(j) >= l1.num_tokens()) throw Error("alignment exceeds L1 tree");
  NodeId l1_root = l1.minimal_covering_subtree(covered);

  // Shallowest L1 node whose span is exactly the block; preorder visits
  // ancestors first and equal spans only occur along unary chains.
  std::vector<NodeId> var_node(blocks.size(), kNoNode);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    for (NodeId v = l1_root; v < l1.subtree_end(l1_root); ++v) {
      if (l1.span(v) == blocks[k]) {
        var_node[k] = v;
        break;
      }
    }
    if (var_node[k] == kNoNode) return std::nullopt;
  }

  TreeBuilder b1;
  std::vector<int> seen;
  auto emit_l1 = [&](auto&& self, NodeId v) -> void {
    if (failed) return;
    auto it = std::find(var_node.begin(), var_node.end(), v);
    if (it != var_node.end()) {
      int k = static_cast<int>(it - var_node.begin());
      b1.leaf(l1.label(v), variable_name(k));
      seen.push_back(k);
      return;
    }
    if (l1.is_leaf(v)) {
      failed = true;
      return;
    }
    b1.open(l1.label(v));
    for (NodeId c : l1.children(v)) self(self, c);
    if (!failed) b1.close();
  };
  emit_l1(emit_l1, l1_root);
  if (failed || seen.size() != blocks.size()) return std::nullopt;
  if (std::is_sorted(seen.begin(), seen.end())) return std::nullopt;

  return T2TPattern{b2.finish(), b1.finish()};
}

/// All patterns of one sentence pair, in post-order of their anchors.
inline std::vector<T2TPattern> extract_all(const SentencePair& pair) {
  if (!pair.l1_tree)
    throw Error("tree-to-tree extraction needs an l1_tree; use the t2s family for records "
                "without L1 trees");
  std::vector<T2TPattern> out;
  for (NodeId anchor : find_anchors(pair.l2_tree, pair.alignment))
    if (auto p = extract_pattern(anchor, pair.l2_tree, *pair.l1_tree, pair.alignment))
      out.push_back(std::move(*p));
  return out;
}

}  // namespace transfer
