#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "transfer/cluster.hpp"
#include "transfer/error.hpp"

namespace transfer {

/// Shortest decimal text that reads back to the same double.
inline std::string format_double(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

namespace detail {

inline bool newick_plain(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), [](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' ||
           c == ']' || c == '\'' || c == ':' || c == ';' || c == ',';
  });
}

inline std::string newick_label(const std::string& s) {
  if (newick_plain(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

}  // namespace detail

/// Newick text; branch length = parent height - child height, the smaller
/// cluster id is written first, and the root carries no length.
inline std::string to_newick(const Dendrogram& dg) {
  dg.validate();
  std::string out;
  auto rec = [&](auto&& self, int id) -> void {
    if (dg.is_leaf(id)) {
      out += detail::newick_label(dg.labels[static_cast<std::size_t>(id)]);
      return;
    }
    auto [a, b] = dg.children(id);
    out += '(';
    self(self, a);
    out += ':' + format_double(dg.height(id) - dg.height(a));
    out += ',';
    self(self, b);
    out += ':' + format_double(dg.height(id) - dg.height(b));
    out += ')';
  };
  rec(rec, dg.root());
  out += ';';
  return out;
}

/// Parses a binary Newick tree back into a Dendrogram. Node heights are
/// rebuilt from branch lengths (leaves at 0, parent = max over children of
/// child height + length); leaf ids follow appearance order and merges are
/// ordered by height.
inline Dendrogram parse_newick(std::string_view text) {
  struct PNode {
    std::string label;
    std::vector<int> children;
    double length = 0.0;
  };
  std::vector<PNode> nodes;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_label = [&]() -> std::string {
    skip_ws();
    std::string out;
    if (pos < text.size() && text[pos] == '\'') {
      ++pos;
      while (true) {
        if (pos >= text.size()) throw ParseError("unterminated quoted label", pos);
        if (text[pos] == '\'') {
          if (pos + 1 < text.size() && text[pos + 1] == '\'') {
            out += '\'';
            pos += 2;
            continue;
          }
          ++pos;
          break;
        }
        out += text[pos++];
      }
      return out;
    }
    while (pos < text.size() && std::string_view("(),:;[]").find(text[pos]) == std::string_view::npos &&
           !std::isspace(static_cast<unsigned char>(text[pos])))
      out += text[pos++];
    return out;
  };
  auto read_length = [&](PNode& n) {
    skip_ws();
    if (pos < text.size() && text[pos] == ':') {
      ++pos;
      skip_ws();
      const char* begin = text.data() + pos;
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), v);
      if (ec != std::errc()) throw ParseError("bad branch length", pos);
      pos += static_cast<std::size_t>(ptr - begin);
      n.length = v;
    }
  };
  auto parse_node = [&](auto&& self) -> int {
    skip_ws();
    PNode n;
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      while (true) {
        n.children.push_back(self(self));
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of Newick", pos);
        if (text[pos] == ',') {
          ++pos;
          continue;
        }
        if (text[pos] == ')') {
          ++pos;
          break;
        }
        throw ParseError("expected ',' or ')'", pos);
      }
    }
    n.label = read_label();
    read_length(n);
    nodes.push_back(std::move(n));
    return static_cast<int>(nodes.size()) - 1;
  };

  int root = parse_node(parse_node);
  skip_ws();
  if (pos >= text.size() || text[pos] != ';') throw ParseError("expected ';'", pos);
  ++pos;
  skip_ws();
  if (pos != text.size()) throw ParseError("trailing content after ';'", pos);

  // nodes[] is in post-order; compute heights and leaf ordering.
  std::vector<double> height(nodes.size(), 0.0);
  std::vector<int> leaf_id(nodes.size(), -1);
  Dendrogram dg;
  auto order_leaves = [&](auto&& self, int v) -> void {
    if (nodes[static_cast<std::size_t>(v)].children.empty()) {
      leaf_id[static_cast<std::size_t>(v)] = static_cast<int>(dg.labels.size());
      dg.labels.push_back(nodes[static_cast<std::size_t>(v)].label);
      return;
    }
    if (nodes[static_cast<std::size_t>(v)].children.size() != 2)
      throw Error("parse_newick: dendrogram nodes must have exactly 2 children");
    for (int c : nodes[static_cast<std::size_t>(v)].children) self(self, c);
  };
  order_leaves(order_leaves, root);
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].children.empty()) continue;
    double h = -std::numeric_limits<double>::infinity();
    for (int c : nodes[v].children)
      h = std::max(h, height[static_cast<std::size_t>(c)] + nodes[static_cast<std::size_t>(c)].length);
    height[v] = h;
  }

  // Kahn's order over internal nodes keyed by (height, post-order index).
  const int n = static_cast<int>(dg.labels.size());
  std::vector<int> cluster_id(nodes.size(), -1);
  std::vector<int> pending(nodes.size(), 0);
  std::vector<int> parent(nodes.size(), -1);
  using Item = std::tuple<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> ready;
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    for (int c : nodes[v].children) parent[static_cast<std::size_t>(c)] = static_cast<int>(v);
    if (nodes[v].children.empty()) cluster_id[v] = leaf_id[v];
  }
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    if (nodes[v].children.empty()) continue;
    for (int c : nodes[v].children)
      if (!nodes[static_cast<std::size_t>(c)].children.empty()) ++pending[v];
    if (pending[v] == 0) ready.emplace(height[v], static_cast<int>(v));
  }
  while (!ready.empty()) {
    auto [h, v] = ready.top();
    ready.pop();
    const auto& ch = nodes[static_cast<std::size_t>(v)].children;
    int a = cluster_id[static_cast<std::size_t>(ch[0])], b = cluster_id[static_cast<std::size_t>(ch[1])];
    int sz = 0;
    for (int c : {a, b}) sz += c < n ? 1 : dg.merges[static_cast<std::size_t>(c - n)].size;
    cluster_id[static_cast<std::size_t>(v)] = n + static_cast<int>(dg.merges.size());
    dg.merges.push_back(Merge{std::min(a, b), std::max(a, b), h, sz});
    int p = parent[static_cast<std::size_t>(v)];
    if (p >= 0 && --pending[static_cast<std::size_t>(p)] == 0)
      ready.emplace(height[static_cast<std::size_t>(p)], p);
  }
  dg.validate();
  return dg;
}

}  // namespace transfer
