#pragma once

// Bracketed (PTB-style) constituency trees.
//
// A tree's leaves are its preterminals: a node "(NN dog)" is a leaf whose
// label is NN and whose token is "dog". Leaf order is token order, so every
// node covers a contiguous inclusive token range.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transfer/error.hpp"

namespace transfer {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

/// Inclusive token range [begin, end].
struct Span {
  int begin = 0;
  int end = -1;

  bool contains(int i) const { return begin <= i && i <= end; }
  bool contains(const Span& o) const { return begin <= o.begin && o.end <= end; }
  int length() const { return end - begin + 1; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct ParseOptions {
  /// When non-empty, labels are truncated at the first of these characters
  /// (e.g. "-=|" turns NP-SBJ=2 into NP). A label that would become empty is
  /// kept intact so "-NONE-" style labels survive.
  std::string strip_after;
};

namespace detail {

inline bool is_delim(char c) {
  return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c));
}

inline bool valid_atom(std::string_view s) {
  return !s.empty() && std::none_of(s.begin(), s.end(), is_delim);
}

}  // namespace detail

class TreeBuilder;

/// Immutable rooted ordered labeled tree. Node ids are assigned in preorder,
/// so the root is always node 0 and a node's descendants follow it.
class ConstTree {
 public:
  struct Node {
    std::string label;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
    int leaf_index = -1;  // token index for preterminals, -1 otherwise
  };

  ConstTree() = default;

  NodeId root() const { return nodes_.empty() ? kNoNode : 0; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const Node& node(NodeId id) const {
    check(id);
    return nodes_[static_cast<std::size_t>(id)];
  }
  const std::string& label(NodeId id) const { return node(id).label; }
  NodeId parent(NodeId id) const { return node(id).parent; }
  const std::vector<NodeId>& children(NodeId id) const { return node(id).children; }
  bool is_leaf(NodeId id) const { return node(id).children.empty(); }

  /// Number of tokens (== number of preterminal leaves).
  std::size_t num_tokens() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int i) const { return tokens_.at(static_cast<std::size_t>(i)); }
  std::span<const NodeId> leaves() const { return leaves_; }
  NodeId leaf(int token_index) const { return leaves_.at(static_cast<std::size_t>(token_index)); }

  Span span(NodeId id) const {
    check(id);
    return spans_[static_cast<std::size_t>(id)];
  }

  int depth(NodeId id) const {
    int d = 0;
    for (NodeId p = parent(id); p != kNoNode; p = parent(p)) ++d;
    return d;
  }

  bool is_ancestor(NodeId anc, NodeId desc) const {
    check(anc);
    check(desc);
    // Preorder ids: descendants occupy (anc, anc + subtree size).
    return anc < desc && desc < anc + subtree_size_[static_cast<std::size_t>(anc)];
  }

  /// One past the last preorder id inside the subtree rooted at `id`.
  NodeId subtree_end(NodeId id) const {
    check(id);
    return id + subtree_size_[static_cast<std::size_t>(id)];
  }

  std::vector<NodeId> preorder() const {
    std::vector<NodeId> out(nodes_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<NodeId>(i);
    return out;
  }

  std::vector<NodeId> postorder() const {
    std::vector<NodeId> out;
    out.reserve(nodes_.size());
    if (!empty()) postorder_rec(root(), out);
    return out;
  }

  /// Deepest node whose span covers every given token index.
  NodeId minimal_covering_subtree(std::span<const int> tokens) const {
    if (tokens.empty()) throw Error("minimal_covering_subtree: empty token set");
    int lo = tokens.front(), hi = tokens.front();
    for (int t : tokens) {
      if (t < 0 || static_cast<std::size_t>(t) >= tokens_.size())
        throw Error("minimal_covering_subtree: token index " + std::to_string(t) +
                    " out of range");
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    // Walk up from the leftmost leaf; the first ancestor reaching hi is the LCA.
    NodeId v = leaf(lo);
    while (span(v).end < hi) v = parent(v);
    return v;
  }

  /// Canonical bracketed form: one space between siblings, no newlines.
  std::string to_string() const { return empty() ? std::string() : to_string(root()); }

  std::string to_string(NodeId id) const {
    std::string out;
    write(id, out);
    return out;
  }

  friend bool operator==(const ConstTree& a, const ConstTree& b) {
    return a.to_string() == b.to_string();
  }

 private:
  friend class TreeBuilder;

  void check(NodeId id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size())
      throw Error("unknown node id " + std::to_string(id));
  }

  void postorder_rec(NodeId id, std::vector<NodeId>& out) const {
    for (NodeId c : nodes_[static_cast<std::size_t>(id)].children) postorder_rec(c, out);
    out.push_back(id);
  }

  void write(NodeId id, std::string& out) const {
    const Node& n = node(id);
    out += '(';
    out += n.label;
    if (n.children.empty()) {
      out += ' ';
      out += tokens_[static_cast<std::size_t>(n.leaf_index)];
    } else {
      for (NodeId c : n.children) {
        out += ' ';
        write(c, out);
      }
    }
    out += ')';
  }

  std::vector<Node> nodes_;
  std::vector<NodeId> leaves_;
  std::vector<std::string> tokens_;
  std::vector<Span> spans_;
  std::vector<NodeId> subtree_size_;
};

/// Builds a ConstTree in preorder: open()/close() bracket an internal node,
/// leaf() adds a preterminal.
class TreeBuilder {
 public:
  void open(std::string label) {
    if (finished_root_) throw Error("tree already has a root");
    if (!detail::valid_atom(label)) throw Error("invalid node label '" + label + "'");
    NodeId id = add(std::move(label));
    stack_.push_back(id);
  }

  void leaf(std::string label, std::string token) {
    if (finished_root_) throw Error("tree already has a root");
    if (!detail::valid_atom(label)) throw Error("invalid node label '" + label + "'");
    if (!detail::valid_atom(token)) throw Error("invalid token '" + token + "'");
    NodeId id = add(std::move(label));
    auto& n = tree_.nodes_[static_cast<std::size_t>(id)];
    n.leaf_index = static_cast<int>(tree_.tokens_.size());
    tree_.tokens_.push_back(std::move(token));
    tree_.leaves_.push_back(id);
    if (stack_.empty()) finished_root_ = true;
  }

  void close() {
    if (stack_.empty()) throw Error("close() without open()");
    NodeId id = stack_.back();
    if (tree_.nodes_[static_cast<std::size_t>(id)].children.empty())
      throw Error("internal node '" + tree_.nodes_[static_cast<std::size_t>(id)].label +
                  "' has no children");
    stack_.pop_back();
    if (stack_.empty()) finished_root_ = true;
  }

  std::size_t depth() const { return stack_.size(); }

  ConstTree finish() {
    if (!stack_.empty()) throw Error("unclosed node in tree builder");
    if (tree_.nodes_.empty()) throw Error("empty tree");
    if (tree_.tokens_.empty()) throw Error("tree has zero leaves");
    const std::size_t n = tree_.nodes_.size();
    tree_.spans_.assign(n, Span{});
    tree_.subtree_size_.assign(n, 1);
    // Reverse preorder visits children before parents.
    for (std::size_t k = n; k-- > 0;) {
      auto& nd = tree_.nodes_[k];
      if (nd.children.empty()) {
        tree_.spans_[k] = Span{nd.leaf_index, nd.leaf_index};
      } else {
        tree_.spans_[k] = Span{tree_.spans_[static_cast<std::size_t>(nd.children.front())].begin,
                               tree_.spans_[static_cast<std::size_t>(nd.children.back())].end};
        for (NodeId c : nd.children)
          tree_.subtree_size_[k] += tree_.subtree_size_[static_cast<std::size_t>(c)];
      }
    }
    ConstTree out = std::move(tree_);
    tree_ = ConstTree{};
    finished_root_ = false;
    return out;
  }

 private:
  NodeId add(std::string label) {
    NodeId id = static_cast<NodeId>(tree_.nodes_.size());
    ConstTree::Node n;
    n.label = std::move(label);
    if (!stack_.empty()) {
      n.parent = stack_.back();
      tree_.nodes_[static_cast<std::size_t>(n.parent)].children.push_back(id);
    }
    tree_.nodes_.push_back(std::move(n));
    return id;
  }

  ConstTree tree_;
  std::vector<NodeId> stack_;
  bool finished_root_ = false;
};

inline std::string apply_label_options(std::string label, const ParseOptions& opts) {
  if (opts.strip_after.empty()) return label;
  auto pos = label.find_first_of(opts.strip_after);
  if (pos == std::string::npos || pos == 0) return label;
  label.resize(pos);
  return label;
}

/// Parses one bracketed tree. Throws ParseError naming the byte offset of the
/// first problem.
inline ConstTree parse_bracketed(std::string_view text, const ParseOptions& opts = {}) {
  // Balance is checked first so truncated input reports the end of text.
  {
    long depth = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')' && --depth < 0) throw ParseError("unbalanced ')'", i);
    }
    if (depth != 0) throw ParseError("unbalanced '(': missing ')'", text.size());
  }

  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_atom = [&]() -> std::string_view {
    std::size_t start = pos;
    while (pos < text.size() && !detail::is_delim(text[pos])) ++pos;
    return text.substr(start, pos - start);
  };

  TreeBuilder builder;
  skip_ws();
  if (pos >= text.size()) throw ParseError("empty input", pos);
  if (text[pos] != '(') throw ParseError("expected '('", pos);

  // Iterative descent; the builder's stack mirrors the open brackets.
  while (true) {
    skip_ws();
    if (pos >= text.size()) break;
    char c = text[pos];
    if (c == '(') {
      std::size_t open_at = pos;
      ++pos;
      skip_ws();
      std::size_t label_at = pos;
      std::string_view label = read_atom();
      if (label.empty()) throw ParseError("empty label", label_at);
      skip_ws();
      if (pos < text.size() && text[pos] != '(' && text[pos] != ')') {
        // Preterminal: (LABEL token)
        std::size_t token_at = pos;
        std::string_view token = read_atom();
        skip_ws();
        if (pos >= text.size() || text[pos] != ')')
          throw ParseError("expected ')' after token", pos < text.size() ? pos : token_at);
        ++pos;
        builder.leaf(apply_label_options(std::string(label), opts), std::string(token));
      } else if (pos < text.size() && text[pos] == ')') {
        throw ParseError("node without children or token", open_at);
      } else {
        builder.open(apply_label_options(std::string(label), opts));
      }
    } else if (c == ')') {
      if (builder.depth() == 0) throw ParseError("unbalanced ')'", pos);
      builder.close();
      ++pos;
    } else {
      throw ParseError("unexpected token outside a preterminal", pos);
    }
    if (builder.depth() == 0) {
      skip_ws();
      if (pos < text.size()) throw ParseError("trailing content after tree", pos);
      break;
    }
  }
  try {
    return builder.finish();
  } catch (const Error& e) {
    throw ParseError(e.what(), pos);
  }
}

/// serialize(parse(text)).
inline std::string canonicalize(std::string_view text, const ParseOptions& opts = {}) {
  return parse_bracketed(text, opts).to_string();
}

}  // namespace transfer
