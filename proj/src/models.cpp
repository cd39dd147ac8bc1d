#include "dca/models.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dca/errors.hpp"

namespace dca::models {

namespace {

int argmax_row(const Matrix& scores, Index row) {
  int best = 0;
  for (Index c = 1; c < scores.cols(); ++c) {
    if (scores(row, c) > scores(row, best)) {
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace

Matrix one_hot(const std::vector<int>& labels, int num_classes) {
  Matrix out = Matrix::Zero(static_cast<Index>(labels.size()), num_classes);
  for (std::size_t d = 0; d < labels.size(); ++d) {
    if (labels[d] < 0 || labels[d] >= num_classes) {
      throw DataError("one_hot: label " + std::to_string(labels[d]) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
    out(static_cast<Index>(d), labels[d]) = 1.0;
  }
  return out;
}

Matrix RidgeClassifier::scores(const Matrix& x) const {
  if (x.cols() != num_features()) {
    throw DimensionError("ridge_predict: model has " + std::to_string(num_features()) +
                         " features, input has " + std::to_string(x.cols()));
  }
  Matrix out = x * weights.topRows(num_features());
  out.rowwise() += weights.row(num_features());
  return out;
}

RidgeClassifier ridge_fit(const Matrix& x, const Matrix& one_hot, double penalty) {
  linalg::require_finite(x, "ridge_fit");
  if (!(penalty > 0.0) || !std::isfinite(penalty)) {
    throw DimensionError("ridge_fit: penalty must be positive and finite");
  }
  if (one_hot.rows() != x.rows()) {
    throw DimensionError("ridge_fit: " + std::to_string(x.rows()) + " rows but " +
                         std::to_string(one_hot.rows()) + " label rows");
  }
  if (one_hot.cols() < 2 || x.rows() < one_hot.cols()) {
    throw DimensionError("ridge_fit: need rows >= classes >= 2");
  }

  // Centering removes the unpenalized bias from the normal equations.
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const Eigen::RowVectorXd y_mean = one_hot.colwise().mean();
  const Matrix xc = x.rowwise() - x_mean;
  const Matrix yc = one_hot.rowwise() - y_mean;

  Matrix gram = xc.transpose() * xc;
  gram.diagonal().array() += penalty;
  const Matrix coef = gram.llt().solve(xc.transpose() * yc);

  RidgeClassifier model;
  model.penalty = penalty;
  model.weights.resize(x.cols() + 1, one_hot.cols());
  model.weights.topRows(x.cols()) = coef;
  model.weights.row(x.cols()) = y_mean - x_mean * coef;
  return model;
}

std::vector<int> ridge_predict(const RidgeClassifier& model, const Matrix& x) {
  const Matrix scores = model.scores(x);
  std::vector<int> out(static_cast<std::size_t>(x.rows()));
  for (Index d = 0; d < x.rows(); ++d) {
    out[static_cast<std::size_t>(d)] = argmax_row(scores, d);
  }
  return out;
}

CentroidClassifier centroid_fit(const Matrix& x, const std::vector<int>& labels,
                                int num_classes) {
  linalg::require_finite(x, "centroid_fit");
  if (static_cast<Index>(labels.size()) != x.rows()) {
    throw DimensionError("centroid_fit: " + std::to_string(x.rows()) + " rows but " +
                         std::to_string(labels.size()) + " labels");
  }
  CentroidClassifier model;
  model.centroids = Matrix::Zero(num_classes, x.cols());
  model.present.assign(static_cast<std::size_t>(num_classes), false);
  std::vector<Index> counts(static_cast<std::size_t>(num_classes), 0);
  for (Index d = 0; d < x.rows(); ++d) {
    const int label = labels[static_cast<std::size_t>(d)];
    if (label < 0 || label >= num_classes) {
      throw DataError("centroid_fit: label " + std::to_string(label) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
    model.centroids.row(label) += x.row(d);
    ++counts[static_cast<std::size_t>(label)];
  }
  for (int c = 0; c < num_classes; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      model.centroids.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      model.present[static_cast<std::size_t>(c)] = true;
    }
  }
  return model;
}

std::vector<int> centroid_predict(const CentroidClassifier& model, const Matrix& x) {
  if (x.cols() != model.centroids.cols()) {
    throw DimensionError("centroid_predict: model has " +
                         std::to_string(model.centroids.cols()) + " features, input has " +
                         std::to_string(x.cols()));
  }
  std::vector<int> out(static_cast<std::size_t>(x.rows()), 0);
  for (Index d = 0; d < x.rows(); ++d) {
    double best = std::numeric_limits<double>::infinity();
    for (Index c = 0; c < model.centroids.rows(); ++c) {
      if (!model.present[static_cast<std::size_t>(c)]) {
        continue;
      }
      const double dist = (x.row(d) - model.centroids.row(c)).squaredNorm();
      if (dist < best) {
        best = dist;
        out[static_cast<std::size_t>(d)] = static_cast<int>(c);
      }
    }
  }
  return out;
}

double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
  if (predicted.size() != truth.size()) {
    throw DimensionError("accuracy: " + std::to_string(predicted.size()) + " predictions for " +
                         std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) {
    throw DimensionError("accuracy: empty label vectors");
  }
  std::size_t hits = 0;
  for (std::size_t d = 0; d < truth.size(); ++d) {
    hits += predicted[d] == truth[d] ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace dca::models
