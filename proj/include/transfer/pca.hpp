#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "transfer/error.hpp"
#include "transfer/matrix.hpp"

namespace transfer {

/// Either a fixed component count (components > 0) or the smallest count
/// whose cumulative explained variance reaches `variance`. Both are capped
/// at Nl - 1.
struct PcaOptions {
  int components = 0;
  double variance = 0.95;
};

struct PcaResult {
  Eigen::MatrixXd coords;                // samples x k
  Eigen::MatrixXd axes;                  // features x k, unit columns
  std::vector<double> explained_ratio;   // per retained axis
  int k = 0;
};

/// PCA of row samples via SVD of the mean-centered sample matrix. Each axis
/// is signed so that its largest-magnitude loading is positive.
inline PcaResult pca_reduce(const Eigen::MatrixXd& samples, const PcaOptions& opts = {}) {
  const Eigen::Index n = samples.rows();
  if (n < 2) throw Error("pca_reduce: need at least 2 samples");
  const int max_k = static_cast<int>(n - 1);
  if (opts.components < 0) throw Error("pca_reduce: component count must be positive");
  if (opts.components == 0 && !(opts.variance > 0.0 && opts.variance <= 1.0))
    throw Error("pca_reduce: variance threshold must be in (0, 1]");
  if (opts.components > max_k)
    throw Error("pca_reduce: k=" + std::to_string(opts.components) + " exceeds samples - 1 = " +
                std::to_string(max_k));

  Eigen::RowVectorXd mean = samples.colwise().mean();
  Eigen::MatrixXd centered = samples.rowwise() - mean;
  const double scale = samples.cwiseAbs().maxCoeff();
  if (centered.cwiseAbs().maxCoeff() <= 1e-12 * (scale > 0.0 ? scale : 1.0))
    throw Error("pca_reduce: all samples are identical (zero variance)");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();
  const Eigen::Index r = s.size();

  const double total = s.squaredNorm();
  int k = opts.components;
  if (k == 0) {
    double cum = 0.0;
    k = 0;
    while (k < r && k < max_k) {
      cum += s(k) * s(k) / total;
      ++k;
      if (cum >= opts.variance - 1e-12) break;
    }
  }

  PcaResult res;
  res.k = k;
  res.coords = Eigen::MatrixXd::Zero(n, k);
  res.axes = Eigen::MatrixXd::Zero(samples.cols(), k);
  for (int c = 0; c < k; ++c) {
    if (c >= r) {
      res.explained_ratio.push_back(0.0);
      continue;  // fewer features than requested axes: remaining axes carry no variance
    }
    Eigen::Index arg = 0;
    v.col(c).cwiseAbs().maxCoeff(&arg);
    double sign = v(arg, c) < 0.0 ? -1.0 : 1.0;
    res.axes.col(c) = sign * v.col(c);
    res.coords.col(c) = sign * u.col(c) * s(c);
    res.explained_ratio.push_back(s(c) * s(c) / total);
  }
  return res;
}

/// Languages as samples: transposed relative frequencies, or raw counts.
inline PcaResult pca_reduce(const LangPatternMatrix& m, const PcaOptions& opts = {},
                            bool use_counts = false) {
  Eigen::MatrixXd samples = use_counts ? Eigen::MatrixXd(m.counts.transpose())
                                       : Eigen::MatrixXd(m.normalized().transpose());
  return pca_reduce(samples, opts);
}

}  // namespace transfer
