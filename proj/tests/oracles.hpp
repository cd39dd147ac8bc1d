#pragma once

// Reference computations for the test suites. Everything here is written
// with plain loops so it shares no decomposition code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dca/core/types.hpp"
#include "dca/random.hpp"

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline Matrix gaussian(Index rows, Index cols, std::uint64_t seed) {
  dca::Rng rng(seed);
  return rng.normal_matrix(rows, cols);
}

/// Orthonormalizes the columns of a random matrix by modified Gram-Schmidt.
inline Matrix random_orthonormal(Index rows, Index cols, std::uint64_t seed) {
  Matrix q = gaussian(rows, cols, seed);
  for (Index j = 0; j < cols; ++j) {
    for (Index k = 0; k < j; ++k) {
      double dot = 0.0;
      for (Index i = 0; i < rows; ++i) dot += q(i, k) * q(i, j);
      for (Index i = 0; i < rows; ++i) q(i, j) -= dot * q(i, k);
    }
    double norm = 0.0;
    for (Index i = 0; i < rows; ++i) norm += q(i, j) * q(i, j);
    norm = std::sqrt(norm);
    for (Index i = 0; i < rows; ++i) q(i, j) /= norm;
  }
  return q;
}

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix; ascending values.
inline std::pair<Vector, Matrix> jacobi_eigen(Matrix s) {
  const Index n = s.rows();
  Matrix v = Matrix::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p)
      for (Index q = p + 1; q < n; ++q) off += s(p, q) * s(p, q);
    double scale = 0.0;
    for (Index p = 0; p < n; ++p) scale += s(p, p) * s(p, p);
    if (off <= 1e-32 * std::max(scale, 1e-300)) break;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        if (s(p, q) == 0.0) continue;
        const double theta = (s(q, q) - s(p, p)) / (2.0 * s(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Index k = 0; k < n; ++k) {
          const double skp = s(k, p);
          const double skq = s(k, q);
          s(k, p) = c * skp - sn * skq;
          s(k, q) = sn * skp + c * skq;
        }
        for (Index k = 0; k < n; ++k) {
          const double spk = s(p, k);
          const double sqk = s(q, k);
          s(p, k) = c * spk - sn * sqk;
          s(q, k) = sn * spk + c * sqk;
        }
        for (Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return s(a, a) < s(b, b); });
  Vector values(n);
  Matrix vectors(n, n);
  for (Index k = 0; k < n; ++k) {
    values(k) = s(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return {values, vectors};
}

/// Lower Cholesky factor by the textbook column recurrence.
inline Matrix cholesky(const Matrix& b) {
  const Index n = b.rows();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double d = b(j, j);
    for (Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0) throw std::runtime_error("oracle::cholesky: not positive definite");
    l(j, j) = std::sqrt(d);
    for (Index i = j + 1; i < n; ++i) {
      double sum = b(i, j);
      for (Index k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      l(i, j) = sum / l(j, j);
    }
  }
  return l;
}

/// Solves L x = rhs column by column (forward substitution).
inline Matrix forward_solve(const Matrix& l, const Matrix& rhs) {
  Matrix x = rhs;
  for (Index c = 0; c < rhs.cols(); ++c) {
    for (Index i = 0; i < l.rows(); ++i) {
      double sum = rhs(i, c);
      for (Index k = 0; k < i; ++k) sum -= l(i, k) * x(k, c);
      x(i, c) = sum / l(i, i);
    }
  }
  return x;
}

/// Solves L^T x = rhs (back substitution on the transpose).
inline Matrix backward_solve_transpose(const Matrix& l, const Matrix& rhs) {
  Matrix x = rhs;
  const Index n = l.rows();
  for (Index c = 0; c < rhs.cols(); ++c) {
    for (Index i = n - 1; i >= 0; --i) {
      double sum = rhs(i, c);
      for (Index k = i + 1; k < n; ++k) sum -= l(k, i) * x(k, c);
      x(i, c) = sum / l(i, i);
    }
  }
  return x;
}

/// Full generalized symmetric-definite eigensolve by Cholesky reduction and
/// Jacobi, B-normalized; ascending values.
inline std::pair<Vector, Matrix> generalized_eigen(const Matrix& a, const Matrix& b) {
  const Matrix l = cholesky(b);
  const Matrix half = forward_solve(l, a);                      // L^{-1} A
  Matrix reduced = forward_solve(l, Matrix(half.transpose()));  // L^{-1} A L^{-T}
  reduced = 0.5 * (reduced + reduced.transpose()).eval();
  auto [values, y] = jacobi_eigen(reduced);
  Matrix v = backward_solve_transpose(l, y);
  for (Index j = 0; j < v.cols(); ++j) {
    v.col(j) /= std::sqrt(v.col(j).dot(b * v.col(j)));
  }
  return {values, v};
}

/// Random anchor representations: institution i gets an r x dims[i] Gaussian block.
inline dca::core::IntermediateBundle random_bundle(const std::vector<Index>& dims, Index rows,
                                                   std::uint64_t seed) {
  std::vector<Matrix> anchors;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    anchors.push_back(gaussian(rows, dims[i], seed * 1000 + i));
  }
  return dca::core::IntermediateBundle::from_anchors(std::move(anchors));
}

/// Largest singular value via power iteration on m^T m.
inline double spectral_norm(const Matrix& m) {
  const Matrix g = m.transpose() * m;
  Vector x = Vector::Ones(g.cols());
  double value = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Vector y = g * x;
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    y /= norm;
    if (std::abs(norm - value) <= 1e-15 * norm) {
      value = norm;
      break;
    }
    value = norm;
    x = y;
  }
  return std::sqrt(value);
}

/// Minimum over global sign of ||a - s b||_inf.
inline double sign_aligned_distance(const Vector& a, const Vector& b) {
  return std::min((a - b).cwiseAbs().maxCoeff(), (a + b).cwiseAbs().maxCoeff());
}

}  // namespace oracle
