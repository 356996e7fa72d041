#pragma once

// Delexicalized tree-to-string reordering rules.
//
// Minimal GHKM rules are read off an (L2 tree, L1 string, alignment) triple,
// then two filters apply: a rule survives only if every leaf of its fragment
// is a variable, and only if its L1 side reorders the variables.

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "transfer/alignment.hpp"
#include "transfer/error.hpp"
#include "transfer/treebank.hpp"

namespace transfer {

inline std::string variable_name(int k) { return "x" + std::to_string(k); }

/// Returns k for "xk", or -1.
inline int parse_variable(std::string_view s) {
  if (s.size() < 2 || s[0] != 'x') return -1;
  int k = 0;
  for (char c : s.substr(1)) {
    if (c < '0' || c > '9') return -1;
    k = k * 10 + (c - '0');
  }
  return k;
}

struct T2SRule {
  /// Fragment whose leaves are variables: preterminal-shaped nodes whose
  /// token is "xk", numbered left to right.
  ConstTree lhs;
  /// Variable indices in L1 order.
  std::vector<int> rhs;

  std::size_t num_variables() const { return rhs.size(); }

  std::string canonical() const {
    std::string out = lhs.to_string();
    out += " |||";
    for (int k : rhs) {
      out += ' ';
      out += variable_name(k);
    }
    return out;
  }

  friend bool operator==(const T2SRule& a, const T2SRule& b) {
    return a.canonical() == b.canonical();
  }
};

inline std::string canonicalize_rule(const T2SRule& rule) { return rule.canonical(); }

/// Inverse of canonicalize_rule. Throws ParseError on malformed text.
inline T2SRule parse_t2s_rule(std::string_view text) {
  auto sep = text.find(" ||| ");
  if (sep == std::string_view::npos) throw ParseError("rule without ' ||| '", 0);
  T2SRule r;
  r.lhs = parse_bracketed(text.substr(0, sep));
  for (std::size_t i = 0; i < r.lhs.num_tokens(); ++i)
    if (parse_variable(r.lhs.token(static_cast<int>(i))) != static_cast<int>(i))
      throw ParseError("lhs leaves must be x0..xk in order", 0);
  std::string_view rest = text.substr(sep + 5);
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto next = rest.find(' ', pos);
    if (next == std::string_view::npos) next = rest.size();
    int k = parse_variable(rest.substr(pos, next - pos));
    if (k < 0) throw ParseError("bad rhs variable", sep + 5 + pos);
    r.rhs.push_back(k);
    pos = next + 1;
  }
  std::vector<int> sorted = r.rhs;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) || sorted.size() != r.lhs.num_tokens())
      throw ParseError("rhs is not a permutation of the lhs variables", sep + 5);
  return r;
}

namespace detail {

/// Aligned L1 indices per node (tspan) and its closure.
struct TargetSpans {
  std::vector<std::vector<int>> tspan;  // sorted, unique
  std::vector<Span> closure;            // empty span when tspan is empty
};

inline TargetSpans target_spans(const ConstTree& tree, const Alignment& a) {
  TargetSpans ts;
  ts.tspan.resize(tree.size());
  ts.closure.resize(tree.size());
  auto per_token = a.l2_to_l1(tree.num_tokens());
  for (NodeId v : tree.preorder()) {
    Span s = tree.span(v);
    auto& out = ts.tspan[static_cast<std::size_t>(v)];
    for (int i = s.begin; i <= s.end; ++i) {
      const auto& t = per_token[static_cast<std::size_t>(i)];
      out.insert(out.end(), t.begin(), t.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!out.empty()) ts.closure[static_cast<std::size_t>(v)] = Span{out.front(), out.back()};
  }
  return ts;
}

}  // namespace detail

/// Frontier flags: v is frontier iff tspan(v) is non-empty and its closure
/// contains no L1 index aligned from a token outside v.
inline std::vector<bool> frontier_flags(const ConstTree& tree, const Alignment& a) {
  auto ts = detail::target_spans(tree, a);
  std::vector<std::vector<int>> l1_sources;
  for (const auto& [i, j] : a) {
    if (static_cast<std::size_t>(j) >= l1_sources.size()) l1_sources.resize(static_cast<std::size_t>(j) + 1);
    l1_sources[static_cast<std::size_t>(j)].push_back(i);
  }
  std::vector<bool> frontier(tree.size(), false);
  for (NodeId v : tree.preorder()) {
    const auto idx = static_cast<std::size_t>(v);
    if (ts.tspan[idx].empty()) continue;
    Span s = tree.span(v);
    bool ok = true;
    for (int j = ts.closure[idx].begin; ok && j <= ts.closure[idx].end; ++j) {
      if (static_cast<std::size_t>(j) >= l1_sources.size()) continue;
      for (int i : l1_sources[static_cast<std::size_t>(j)])
        if (!s.contains(i)) {
          ok = false;
          break;
        }
    }
    frontier[idx] = ok;
  }
  return frontier;
}

/// Frontier node ids in preorder.
inline std::vector<NodeId> frontier_set(const ConstTree& tree, const Alignment& a) {
  auto flags = frontier_flags(tree, a);
  std::vector<NodeId> out;
  for (NodeId v : tree.preorder())
    if (flags[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

/// Minimal delexicalized reordering rules, in preorder of their root nodes.
inline std::vector<T2SRule> extract_minimal_rules(const ConstTree& tree, std::size_t l1_len,
                                                  const Alignment& a) {
  if (!a.in_bounds(tree.num_tokens(), l1_len))
    throw Error("extract_minimal_rules: alignment out of range");
  auto ts = detail::target_spans(tree, a);
  auto frontier = frontier_flags(tree, a);

  std::vector<T2SRule> rules;
  for (NodeId root : tree.preorder()) {
    if (!frontier[static_cast<std::size_t>(root)] || tree.is_leaf(root)) continue;

    TreeBuilder b;
    std::vector<NodeId> vars;
    bool lexical = false;
    auto emit = [&](auto&& self, NodeId v, bool is_root) -> void {
      if (lexical) return;
      if (!is_root && frontier[static_cast<std::size_t>(v)]) {
        b.leaf(tree.label(v), variable_name(static_cast<int>(vars.size())));
        vars.push_back(v);
        return;
      }
      if (tree.is_leaf(v)) {  // lexical token, or a subtree with no ordering evidence
        lexical = true;
        return;
      }
      b.open(tree.label(v));
      for (NodeId c : tree.children(v)) self(self, c, false);
      if (!lexical) b.close();
    };
    emit(emit, root, true);
    if (lexical || vars.size() < 2) continue;

    std::vector<int> order(vars.size());
    std::iota(order.begin(), order.end(), 0);
    auto closure = [&](int k) { return ts.closure[static_cast<std::size_t>(vars[static_cast<std::size_t>(k)])]; };
    std::sort(order.begin(), order.end(), [&](int x, int y) {
      return closure(x).begin < closure(y).begin || (closure(x).begin == closure(y).begin && x < y);
    });
    bool overlapping = false;
    for (std::size_t k = 1; k < order.size(); ++k)
      if (closure(order[k]).begin <= closure(order[k - 1]).end) overlapping = true;
    if (overlapping) continue;
    if (std::is_sorted(order.begin(), order.end())) continue;  // identity: no reordering

    rules.push_back(T2SRule{b.finish(), std::move(order)});
  }
  return rules;
}

}  // namespace transfer
