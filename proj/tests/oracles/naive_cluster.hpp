#pragma once

// Agglomerative clustering that recomputes every inter-cluster distance from
// the original members at each step. Ward is defined on points, as the
// increase in within-cluster sum of squares, so it takes coordinates.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "transfer/cluster.hpp"

namespace oracle {

struct NaiveMerge {
  int a, b;
  double height;
};

inline double sse(const Eigen::MatrixXd& pts, const std::vector<int>& members) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(pts.cols());
  for (int m : members) c += pts.row(m).transpose();
  c /= static_cast<double>(members.size());
  double s = 0.0;
  for (int m : members) s += (pts.row(m).transpose() - c).squaredNorm();
  return s;
}

/// `pts` is only read for Ward.
inline std::vector<NaiveMerge> naive_cluster(const Eigen::MatrixXd& dist, transfer::Linkage linkage,
                                             const Eigen::MatrixXd& pts = {}) {
  const int n = static_cast<int>(dist.rows());
  std::vector<std::vector<int>> members;
  std::vector<int> ids;
  for (int i = 0; i < n; ++i) {
    members.push_back({i});
    ids.push_back(i);
  }
  auto between = [&](const std::vector<int>& x, const std::vector<int>& y) {
    switch (linkage) {
      case transfer::Linkage::kSingle: {
        double v = std::numeric_limits<double>::infinity();
        for (int i : x)
          for (int j : y) v = std::min(v, dist(i, j));
        return v;
      }
      case transfer::Linkage::kComplete: {
        double v = 0.0;
        for (int i : x)
          for (int j : y) v = std::max(v, dist(i, j));
        return v;
      }
      case transfer::Linkage::kAverage: {
        double v = 0.0;
        for (int i : x)
          for (int j : y) v += dist(i, j);
        return v / static_cast<double>(x.size() * y.size());
      }
      case transfer::Linkage::kWard: {
        std::vector<int> u = x;
        u.insert(u.end(), y.begin(), y.end());
        // Merge cost 2 * delta(SSE) gives the same scale as the Euclidean
        // distance for two singletons.
        return std::sqrt(2.0 * (sse(pts, u) - sse(pts, x) - sse(pts, y)));
      }
    }
    return 0.0;
  };
  std::vector<NaiveMerge> out;
  for (int step = 0; step + 1 < n; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < members.size(); ++i)
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        double v = between(members[i], members[j]);
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    out.push_back({std::min(ids[bi], ids[bj]), std::max(ids[bi], ids[bj]), best});
    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    ids[bi] = n + step;
    members.erase(members.begin() + static_cast<long>(bj));
    ids.erase(ids.begin() + static_cast<long>(bj));
  }
  return out;
}

}  // namespace oracle
