#pragma once

// Euclidean distances and agglomerative clustering with Lance-Williams
// updates. Cluster ids follow the usual convention: leaves are 0..n-1 and the
// cluster formed by merge t gets id n + t.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "transfer/error.hpp"

namespace transfer {

enum class Linkage { kSingle, kComplete, kAverage, kWard };

inline constexpr Linkage kAllLinkages[] = {Linkage::kSingle, Linkage::kComplete, Linkage::kAverage,
                                           Linkage::kWard};

inline std::string_view linkage_name(Linkage l) {
  switch (l) {
    case Linkage::kSingle: return "single";
    case Linkage::kComplete: return "complete";
    case Linkage::kAverage: return "average";
    case Linkage::kWard: return "ward";
  }
  return "?";
}

inline Linkage parse_linkage(std::string_view s) {
  for (Linkage l : kAllLinkages)
    if (linkage_name(l) == s) return l;
  throw Error("unknown linkage '" + std::string(s) + "' (expected single, complete, average or ward)");
}

/// Pairwise Euclidean distances between the rows of `coords`.
inline Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& coords) {
  const Eigen::Index n = coords.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) d(i, j) = d(j, i) = (coords.row(i) - coords.row(j)).norm();
  return d;
}

struct Merge {
  int a = 0;  // smaller cluster id
  int b = 0;  // larger cluster id
  double height = 0.0;
  int size = 0;
};

/// Binary merge tree with n leaves and n - 1 merges.
struct Dendrogram {
  std::vector<std::string> labels;
  std::vector<Merge> merges;

  int num_leaves() const { return static_cast<int>(labels.size()); }
  int num_nodes() const { return 2 * num_leaves() - 1; }
  int root() const { return num_nodes() - 1; }
  bool is_leaf(int id) const { return id < num_leaves(); }

  double height(int id) const {
    return is_leaf(id) ? 0.0 : merges.at(static_cast<std::size_t>(id - num_leaves())).height;
  }
  std::pair<int, int> children(int id) const {
    const auto& m = merges.at(static_cast<std::size_t>(id - num_leaves()));
    return {m.a, m.b};
  }

  /// Parent of every node id; the root maps to -1.
  std::vector<int> parents() const {
    std::vector<int> p(static_cast<std::size_t>(num_nodes()), -1);
    for (std::size_t t = 0; t < merges.size(); ++t) {
      int id = num_leaves() + static_cast<int>(t);
      p[static_cast<std::size_t>(merges[t].a)] = id;
      p[static_cast<std::size_t>(merges[t].b)] = id;
    }
    return p;
  }

  /// Leaf ids under every node.
  std::vector<std::vector<int>> leaf_sets() const {
    std::vector<std::vector<int>> sets(static_cast<std::size_t>(num_nodes()));
    for (int i = 0; i < num_leaves(); ++i) sets[static_cast<std::size_t>(i)] = {i};
    for (std::size_t t = 0; t < merges.size(); ++t) {
      auto& s = sets[static_cast<std::size_t>(num_leaves()) + t];
      const auto& l = sets[static_cast<std::size_t>(merges[t].a)];
      const auto& r = sets[static_cast<std::size_t>(merges[t].b)];
      s.insert(s.end(), l.begin(), l.end());
      s.insert(s.end(), r.begin(), r.end());
    }
    return sets;
  }

  /// Throws unless every id is used exactly once as a child and merges only
  /// reference earlier clusters.
  void validate() const {
    const int n = num_leaves();
    if (n < 1 || merges.size() != static_cast<std::size_t>(n - 1))
      throw Error("dendrogram: need n - 1 merges for n leaves");
    std::vector<int> used(static_cast<std::size_t>(num_nodes()), 0);
    for (std::size_t t = 0; t < merges.size(); ++t) {
      int self = n + static_cast<int>(t);
      for (int c : {merges[t].a, merges[t].b}) {
        if (c < 0 || c >= self) throw Error("dendrogram: merge references a future cluster");
        if (used[static_cast<std::size_t>(c)]++) throw Error("dendrogram: cluster used twice");
      }
    }
  }
};

namespace detail {

inline void check_distance_matrix(const Eigen::MatrixXd& d) {
  if (d.rows() != d.cols()) throw Error("cluster: distance matrix is not square");
  if (d.rows() < 2) throw Error("cluster: need at least 2 items");
  const double tol = 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    if (std::abs(d(i, i)) > tol) throw Error("cluster: non-zero diagonal");
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (!std::isfinite(d(i, j)) || d(i, j) < 0.0) throw Error("cluster: invalid distance");
      if (std::abs(d(i, j) - d(j, i)) > tol) throw Error("cluster: matrix is not symmetric");
    }
  }
}

}  // namespace detail

/// Agglomerative clustering. Each step merges the closest pair of active
/// clusters; exact ties go to the lexicographically smallest (min id, max id).
inline Dendrogram cluster(const Eigen::MatrixXd& dist, Linkage linkage,
                          std::vector<std::string> labels = {}) {
  detail::check_distance_matrix(dist);
  const int n = static_cast<int>(dist.rows());
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  if (static_cast<int>(labels.size()) != n) throw Error("cluster: label count mismatch");

  Eigen::MatrixXd d = dist;  // indexed by slot
  std::vector<int> id(static_cast<std::size_t>(n)), size(static_cast<std::size_t>(n), 1);
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;

  Dendrogram dg;
  dg.labels = std::move(labels);
  for (int step = 0; step < n - 1; ++step) {
    int bi = -1, bj = -1;
    double best = std::numeric_limits<double>::infinity();
    std::pair<int, int> best_key{std::numeric_limits<int>::max(), 0};
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        const double v = d(i, j);
        std::pair<int, int> key = std::minmax(id[static_cast<std::size_t>(i)], id[static_cast<std::size_t>(j)]);
        if (v < best || (v == best && key < best_key)) {
          best = v;
          best_key = key;
          bi = i;
          bj = j;
        }
      }
    }
    const double ni = size[static_cast<std::size_t>(bi)], nj = size[static_cast<std::size_t>(bj)];
    const double dij = d(bi, bj);
    for (int k = 0; k < n; ++k) {
      if (!active[static_cast<std::size_t>(k)] || k == bi || k == bj) continue;
      const double dki = d(k, bi), dkj = d(k, bj), nk = size[static_cast<std::size_t>(k)];
      double nd = 0.0;
      switch (linkage) {
        case Linkage::kSingle: nd = std::min(dki, dkj); break;
        case Linkage::kComplete: nd = std::max(dki, dkj); break;
        case Linkage::kAverage: nd = (ni * dki + nj * dkj) / (ni + nj); break;
        case Linkage::kWard:
          nd = std::sqrt(std::max(0.0, ((nk + ni) * dki * dki + (nk + nj) * dkj * dkj - nk * dij * dij) /
                                           (nk + ni + nj)));
          break;
      }
      d(k, bi) = d(bi, k) = nd;
    }
    dg.merges.push_back(Merge{best_key.first, best_key.second, dij,
                              size[static_cast<std::size_t>(bi)] + size[static_cast<std::size_t>(bj)]});
    id[static_cast<std::size_t>(bi)] = n + step;
    size[static_cast<std::size_t>(bi)] += size[static_cast<std::size_t>(bj)];
    active[static_cast<std::size_t>(bj)] = false;
  }
  return dg;
}

}  // namespace transfer
