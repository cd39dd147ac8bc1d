#pragma once

#include <vector>

#include "dca/linalg.hpp"

namespace dca::models {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

/// Linear least-squares classifier with an L2 penalty on the feature weights.
/// The bias (last row of `weights`) is not penalized.
struct RidgeClassifier {
  Matrix weights;  // (features + 1) x classes
  double penalty = 1.0;

  Index num_features() const { return weights.rows() - 1; }
  Index num_classes() const { return weights.cols(); }
  /// n x classes matrix of x * W + bias.
  Matrix scores(const Matrix& x) const;
};

/// Fits against an n x c indicator matrix. Requires n >= c >= 2 and penalty > 0.
RidgeClassifier ridge_fit(const Matrix& x, const Matrix& one_hot, double penalty);

/// Argmax of the class scores, ties to the lowest class index.
std::vector<int> ridge_predict(const RidgeClassifier& model, const Matrix& x);

/// Nearest class mean in Euclidean distance. Classes absent from the
/// training labels get no centroid and are never predicted.
struct CentroidClassifier {
  Matrix centroids;           // classes x features
  std::vector<bool> present;  // present[c] iff class c had training rows
};

CentroidClassifier centroid_fit(const Matrix& x, const std::vector<int>& labels,
                                int num_classes);

std::vector<int> centroid_predict(const CentroidClassifier& model, const Matrix& x);

/// Fraction of positions where predicted and truth agree.
double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth);

/// Indicator matrix for labels in [0, num_classes).
Matrix one_hot(const std::vector<int>& labels, int num_classes);

}  // namespace dca::models
