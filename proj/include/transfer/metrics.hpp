#pragma once

// Dendrogram scores against gold class (genus) labels. Both metrics average
// over unordered pairs of leaves that share a class.

#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "transfer/cluster.hpp"
#include "transfer/error.hpp"

namespace transfer {

/// language -> genus
using GenusLabeling = std::map<std::string, std::string>;

/// Reads "language<TAB>genus" lines.
inline GenusLabeling read_genus_tsv(std::istream& is) {
  GenusLabeling g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw Error("genus TSV line " + std::to_string(line_no) + ": expected language<TAB>genus");
    g[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return g;
}

namespace detail {

struct LabeledTree {
  std::vector<int> leaf_class;               // class index per leaf id
  std::vector<std::pair<int, int>> pairs;    // same-class leaf pairs (i < j)
  std::vector<int> parent;
  std::vector<int> depth;
  int num_classes = 0;
};

inline LabeledTree label_tree(const Dendrogram& dg, const GenusLabeling& labels) {
  dg.validate();
  LabeledTree t;
  std::map<std::string, int> class_index;
  for (const auto& leaf : dg.labels) {
    auto it = labels.find(leaf);
    if (it == labels.end()) throw Error("no genus label for leaf '" + leaf + "'");
    auto [ci, inserted] = class_index.emplace(it->second, static_cast<int>(class_index.size()));
    t.leaf_class.push_back(ci->second);
  }
  t.num_classes = static_cast<int>(class_index.size());
  const int n = dg.num_leaves();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (t.leaf_class[static_cast<std::size_t>(i)] == t.leaf_class[static_cast<std::size_t>(j)])
        t.pairs.emplace_back(i, j);
  if (t.pairs.empty()) throw Error("no class has at least 2 leaves; metric undefined");
  t.parent = dg.parents();
  t.depth.assign(static_cast<std::size_t>(dg.num_nodes()), 0);
  for (int v = dg.root() - 1; v >= 0; --v)  // parents have larger ids
    t.depth[static_cast<std::size_t>(v)] = t.depth[static_cast<std::size_t>(t.parent[static_cast<std::size_t>(v)])] + 1;
  return t;
}

inline int lca(const LabeledTree& t, int a, int b) {
  while (a != b) {
    if (t.depth[static_cast<std::size_t>(a)] < t.depth[static_cast<std::size_t>(b)]) std::swap(a, b);
    a = t.parent[static_cast<std::size_t>(a)];
  }
  return a;
}

}  // namespace detail

/// Exact dendrogram purity: mean over same-class leaf pairs of the fraction
/// of leaves under their lowest common ancestor that share the pair's class.
inline double dendrogram_purity(const Dendrogram& dg, const GenusLabeling& labels) {
  auto t = detail::label_tree(dg, labels);
  auto sets = dg.leaf_sets();
  double total = 0.0;
  for (const auto& [i, j] : t.pairs) {
    int v = detail::lca(t, i, j);
    const auto& under = sets[static_cast<std::size_t>(v)];
    int c = t.leaf_class[static_cast<std::size_t>(i)];
    int same = 0;
    for (int leaf : under) same += t.leaf_class[static_cast<std::size_t>(leaf)] == c;
    total += static_cast<double>(same) / static_cast<double>(under.size());
  }
  return total / static_cast<double>(t.pairs.size());
}

/// Mean number of edges on the path between same-class leaves.
inline double leaf_pair_distance(const Dendrogram& dg, const GenusLabeling& labels) {
  auto t = detail::label_tree(dg, labels);
  double total = 0.0;
  for (const auto& [i, j] : t.pairs) {
    int v = detail::lca(t, i, j);
    total += t.depth[static_cast<std::size_t>(i)] + t.depth[static_cast<std::size_t>(j)] -
             2 * t.depth[static_cast<std::size_t>(v)];
  }
  return total / static_cast<double>(t.pairs.size());
}

}  // namespace transfer
