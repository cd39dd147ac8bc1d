#include <doctest.h>

#include "dca/errors.hpp"
#include "dca/models.hpp"
#include "oracles.hpp"

using namespace dca::models;

namespace {

struct Blobs {
  Matrix x;
  std::vector<int> labels;
};

Blobs blobs(Index per_class, int classes, Index dims, double separation, std::uint64_t seed) {
  const Matrix means = separation * oracle::gaussian(classes, dims, seed);
  const Matrix noise = oracle::gaussian(per_class * classes, dims, seed + 1);
  Blobs out{Matrix(per_class * classes, dims), {}};
  for (Index i = 0; i < out.x.rows(); ++i) {
    const int c = static_cast<int>(i % classes);
    out.x.row(i) = means.row(c) + noise.row(i);
    out.labels.push_back(c);
  }
  return out;
}

// Augmented normal equations (Z^T Z + P) theta = Z^T Y with Z = [X 1] and P
// penalizing every row but the bias.
Matrix ridge_oracle(const Matrix& x, const Matrix& y, double penalty) {
  const Index p = x.cols();
  Matrix z(x.rows(), p + 1);
  z << x, Matrix::Ones(x.rows(), 1);
  Matrix lhs = Matrix::Zero(p + 1, p + 1);
  for (Index a = 0; a <= p; ++a)
    for (Index b = 0; b <= p; ++b)
      for (Index k = 0; k < z.rows(); ++k) lhs(a, b) += z(k, a) * z(k, b);
  for (Index a = 0; a < p; ++a) lhs(a, a) += penalty;
  const Matrix rhs = z.transpose() * y;
  const Matrix l = oracle::cholesky(lhs);
  return oracle::backward_solve_transpose(l, oracle::forward_solve(l, rhs));
}

double fit_loss(const RidgeClassifier& model, const Matrix& x, const Matrix& y) {
  return (model.scores(x) - y).squaredNorm();
}

}  // namespace

TEST_CASE("ridge: separable 1-d clusters are fit exactly") {
  Matrix x(6, 1);
  x << -5.0, -4.5, -4.0, 4.0, 4.5, 5.0;
  const std::vector<int> labels{0, 0, 0, 1, 1, 1};
  const RidgeClassifier model = ridge_fit(x, one_hot(labels, 2), 1e-6);
  CHECK(accuracy(ridge_predict(model, x), labels) == 1.0);
  CHECK(ridge_predict(model, x) == labels);
}

TEST_CASE("ridge: huge penalty shrinks feature weights") {
  const Blobs data = blobs(20, 3, 4, 3.0, 5);
  const RidgeClassifier model = ridge_fit(data.x, one_hot(data.labels, 3), 1e9);
  CHECK(model.weights.topRows(4).norm() <= 1e-3);
}

TEST_CASE("ridge: coefficients match an independent normal-equations solve") {
  const Blobs data = blobs(30, 3, 5, 2.0, 17);
  const Matrix y = one_hot(data.labels, 3);
  const RidgeClassifier model = ridge_fit(data.x, y, 1.0);
  CHECK((model.weights - ridge_oracle(data.x, y, 1.0)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("ridge: training loss does not increase as the penalty decreases") {
  const Blobs data = blobs(25, 4, 6, 1.0, 23);
  const Matrix y = one_hot(data.labels, 4);
  double previous = INFINITY;
  for (const double penalty : {1e4, 1e2, 1.0, 1e-2, 1e-4}) {
    const double loss = fit_loss(ridge_fit(data.x, y, penalty), data.x, y);
    CHECK(loss <= previous + 1e-9);
    previous = loss;
  }
}

TEST_CASE("ridge: per-column scaling changes the penalized fit") {
  const Blobs data = blobs(20, 2, 3, 2.0, 8);
  const Matrix y = one_hot(data.labels, 2);
  Matrix scaled = data.x;
  scaled.col(1) *= 0.3;
  const RidgeClassifier base = ridge_fit(data.x, y, 5.0);
  const RidgeClassifier shrunk = ridge_fit(scaled, y, 5.0);
  // an unpenalized fit would satisfy w'_1 = w_1 / 0.3 exactly
  CHECK(std::abs(shrunk.weights(1, 0) * 0.3 - base.weights(1, 0)) > 1e-6);
}

TEST_CASE("ridge_predict: hand-computed scores, ties, duplicates") {
  RidgeClassifier model;
  model.weights = Matrix(3, 2);
  model.weights << 1.0, 0.0,   //
      0.0, 2.0,                //
      0.5, 0.0;                // bias
  Matrix x(3, 2);
  x << 1.0, 1.0,   // scores (1.5, 2.0) -> 1
      3.0, 1.0,    // scores (3.5, 2.0) -> 0
      1.5, 1.0;    // scores (2.0, 2.0) -> tie -> 0
  CHECK(ridge_predict(model, x) == std::vector<int>{1, 0, 0});

  Matrix dup(2, 2);
  dup << 0.2, 0.7, 0.2, 0.7;
  const auto pred = ridge_predict(model, dup);
  CHECK(pred[0] == pred[1]);
  CHECK_THROWS_AS(ridge_predict(model, Matrix::Ones(2, 3)), dca::DimensionError);
}

TEST_CASE("ridge_fit: preconditions") {
  const Matrix x = Matrix::Ones(4, 2);
  const Matrix y = one_hot({0, 1, 0, 1}, 2);
  CHECK_THROWS(ridge_fit(x, y, 0.0));
  CHECK_THROWS(ridge_fit(x, one_hot({0}, 1).replicate(4, 1), 1.0));
  CHECK_THROWS_AS(ridge_fit(Matrix::Ones(3, 2), y, 1.0), dca::DimensionError);
}

TEST_CASE("centroid: geometry, own centroids, uniform scale invariance") {
  Matrix x(2, 1);
  x << 0.0, 10.0;
  const CentroidClassifier model = centroid_fit(x, {0, 1}, 2);
  Matrix probe(3, 1);
  probe << 5.0 - 1e-9, 5.0, 5.0 + 1e-9;
  CHECK(centroid_predict(model, probe) == std::vector<int>{0, 0, 1});
  CHECK(centroid_predict(model, model.centroids) == std::vector<int>{0, 1});

  const Blobs data = blobs(15, 3, 4, 2.0, 3);
  const CentroidClassifier fitted = centroid_fit(data.x, data.labels, 3);
  const CentroidClassifier scaled = centroid_fit(0.25 * data.x, data.labels, 3);
  CHECK(centroid_predict(fitted, data.x) == centroid_predict(scaled, 0.25 * data.x));
}

TEST_CASE("centroid: matches a brute-force distance scan") {
  const Blobs train = blobs(20, 4, 3, 1.5, 40);
  const Blobs test = blobs(10, 4, 3, 1.5, 41);
  const CentroidClassifier model = centroid_fit(train.x, train.labels, 4);
  Matrix means = Matrix::Zero(4, 3);
  std::vector<double> counts(4, 0.0);
  for (Index i = 0; i < train.x.rows(); ++i) {
    means.row(train.labels[static_cast<std::size_t>(i)]) += train.x.row(i);
    counts[static_cast<std::size_t>(train.labels[static_cast<std::size_t>(i)])] += 1.0;
  }
  for (int c = 0; c < 4; ++c) means.row(c) /= counts[static_cast<std::size_t>(c)];
  std::vector<int> expected;
  for (Index i = 0; i < test.x.rows(); ++i) {
    int best = 0;
    double best_d = INFINITY;
    for (int c = 0; c < 4; ++c) {
      double d = 0.0;
      for (Index k = 0; k < 3; ++k) d += (test.x(i, k) - means(c, k)) * (test.x(i, k) - means(c, k));
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    expected.push_back(best);
  }
  CHECK(centroid_predict(model, test.x) == expected);
}

TEST_CASE("centroid: classes missing from training are never predicted") {
  Matrix x(2, 1);
  x << 0.0, 1.0;
  const CentroidClassifier model = centroid_fit(x, {0, 2}, 3);
  Matrix probe(1, 1);
  probe << 0.5;
  CHECK(centroid_predict(model, probe)[0] == 0);
  CHECK_FALSE(model.present[1]);
}

TEST_CASE("accuracy: direct counts and length mismatch") {
  CHECK(accuracy({0, 1, 2}, {0, 1, 2}) == 1.0);
  CHECK(accuracy({0, 1, 0, 1}, {1, 0, 1, 0}) == 0.0);
  CHECK(accuracy({0, 1, 1, 1}, {0, 1, 1, 0}) == 0.75);
  CHECK_THROWS(accuracy({0, 1}, {0}));
}
