#include "dca/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dca/errors.hpp"
#include "dca/random.hpp"

namespace dca::linalg {

namespace {

constexpr double kAsymmetryTolerance = 1e-8;
constexpr double kPivotFloor = 1e-14;

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " + shape(m));
  }
}

Matrix symmetrized(const Matrix& s, const char* what) {
  const double scale = s.norm();
  const double asym = (s - s.transpose()).norm();
  if (asym > kAsymmetryTolerance * scale) {
    throw AsymmetryError(std::string(what) + ": matrix is not symmetric (||s - s^T|| = " +
                         std::to_string(asym) + ", ||s|| = " + std::to_string(scale) + ")");
  }
  return 0.5 * (s + s.transpose());
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (m.rows() < 1 || m.cols() < 1) {
    throw DimensionError(std::string(what) + ": empty matrix " + shape(m));
  }
  if (!m.allFinite()) {
    throw NonFiniteError(std::string(what) + ": matrix has NaN or Inf entries");
  }
}

Vector fix_column_signs(Matrix& vectors) {
  Vector signs = Vector::Ones(vectors.cols());
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index pivot = 0;
    double best = -1.0;
    for (Index i = 0; i < vectors.rows(); ++i) {
      const double mag = std::abs(vectors(i, j));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    if (vectors.rows() > 0 && vectors(pivot, j) < 0.0) {
      vectors.col(j) = -vectors.col(j);
      signs(j) = -1.0;
    }
  }
  return signs;
}

QrResult qr_thin(const Matrix& m) {
  require_finite(m, "qr_thin");
  if (m.rows() < m.cols()) {
    throw DimensionError("qr_thin: needs rows >= cols, got " + shape(m));
  }
  const Index cols = m.cols();
  Eigen::HouseholderQR<Matrix> qr(m);
  QrResult out;
  out.q = qr.householderQ() * Matrix::Identity(m.rows(), cols);
  out.r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Index k = 0; k < cols; ++k) {
    if (out.r(k, k) < 0.0) {
      out.r.row(k) = -out.r.row(k);
      out.q.col(k) = -out.q.col(k);
    }
  }
  return out;
}

SvdResult svd_thin(const Matrix& m) {
  require_finite(m, "svd_thin");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdResult out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
  const Vector signs = fix_column_signs(out.v);
  out.u = out.u * signs.asDiagonal();
  return out;
}

SvdResult randomized_svd(const Matrix& m, Index k, Index oversample, int power_iters,
                         std::uint64_t seed) {
  require_finite(m, "randomized_svd");
  const Index rank_cap = std::min(m.rows(), m.cols());
  if (k < 1 || k > rank_cap) {
    throw DimensionError("randomized_svd: target rank " + std::to_string(k) +
                         " outside [1, " + std::to_string(rank_cap) + "]");
  }
  if (oversample < 0 || power_iters < 0) {
    throw DimensionError("randomized_svd: oversample and power_iters must be nonnegative");
  }
  const Index width = std::min(k + oversample, rank_cap);

  Rng rng(seed);
  const Matrix probe = rng.normal_matrix(m.cols(), width);
  Matrix basis = qr_thin(m * probe).q;
  for (int it = 0; it < power_iters; ++it) {
    const Matrix co_basis = qr_thin(m.transpose() * basis).q;
    basis = qr_thin(m * co_basis).q;
  }

  const SvdResult small = svd_thin(basis.transpose() * m);
  SvdResult out;
  out.u = basis * small.u.leftCols(k);
  out.sigma = small.sigma.head(k);
  out.v = small.v.leftCols(k);
  return out;
}

EigPairs sym_eig(const Matrix& s) {
  require_finite(s, "sym_eig");
  require_square(s, "sym_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(s, "sym_eig"));
  if (eig.info() != Eigen::Success) {
    throw Error("sym_eig: eigensolver did not converge");
  }
  EigPairs out{eig.eigenvalues(), eig.eigenvectors()};
  fix_column_signs(out.vectors);
  return out;
}

EigPairs gen_eig_sym(const Matrix& a, const Matrix& b, Index k, double ridge) {
  require_finite(a, "gen_eig_sym(a)");
  require_finite(b, "gen_eig_sym(b)");
  require_square(a, "gen_eig_sym(a)");
  require_square(b, "gen_eig_sym(b)");
  const Index n = a.rows();
  if (b.rows() != n) {
    throw DimensionError("gen_eig_sym: a is " + shape(a) + " but b is " + shape(b));
  }
  if (k < 1 || k > n) {
    throw DimensionError("gen_eig_sym: k = " + std::to_string(k) + " outside [1, " +
                         std::to_string(n) + "]");
  }
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
    throw DimensionError("gen_eig_sym: ridge must be finite and nonnegative");
  }

  const Matrix sym_a = symmetrized(a, "gen_eig_sym(a)");
  Matrix shifted_b = symmetrized(b, "gen_eig_sym(b)");
  shifted_b.diagonal().array() += ridge;

  Eigen::LLT<Matrix> chol(shifted_b);
  if (chol.info() != Eigen::Success) {
    throw DefinitenessError("gen_eig_sym: Cholesky factorization of b + ridge*I failed");
  }
  const Matrix lower = chol.matrixL();
  const double diag_max = shifted_b.diagonal().maxCoeff();
  if (lower.diagonal().array().square().minCoeff() <= kPivotFloor * diag_max) {
    throw DefinitenessError("gen_eig_sym: b + ridge*I is numerically singular");
  }

  // C = L^{-1} A L^{-T}; A symmetric so (L^{-1} A)^T = A L^{-T}.
  const auto tri = lower.triangularView<Eigen::Lower>();
  const Matrix half = tri.solve(sym_a);
  Matrix reduced = tri.solve(half.transpose());
  reduced = 0.5 * (reduced + reduced.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(reduced);
  if (eig.info() != Eigen::Success) {
    throw Error("gen_eig_sym: eigensolver did not converge");
  }

  EigPairs out;
  out.values = eig.eigenvalues().head(k);
  out.vectors = tri.transpose().solve(eig.eigenvectors().leftCols(k));
  for (Index j = 0; j < k; ++j) {
    const double scale = out.vectors.col(j).dot(shifted_b * out.vectors.col(j));
    out.vectors.col(j) /= std::sqrt(scale);
  }
  fix_column_signs(out.vectors);
  return out;
}

RegularizedEig gen_eig_sym_regularized(const Matrix& a, const Matrix& b, Index k) {
  try {
    return {gen_eig_sym(a, b, k, 0.0), 0.0};
  } catch (const DefinitenessError&) {
  }
  const double mean_diag = b.trace() / static_cast<double>(b.rows());
  double ridge = 1e-10 * (mean_diag > 0.0 ? mean_diag : 1.0);
  for (int attempt = 0; attempt < 4; ++attempt, ridge *= 10.0) {
    try {
      return {gen_eig_sym(a, b, k, ridge), ridge};
    } catch (const DefinitenessError&) {
    }
  }
  throw DefinitenessError("gen_eig_sym: b stays indefinite after ridge escalation up to " +
                          std::to_string(ridge / 10.0));
}

Matrix pseudo_inverse(const Matrix& m, double rcond) {
  require_finite(m, "pseudo_inverse");
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  if (sigma.size() == 0 || sigma(0) == 0.0) {
    return out;
  }
  const double cutoff = rcond * sigma(0);
  for (Index j = 0; j < sigma.size(); ++j) {
    if (sigma(j) > cutoff) {
      out.noalias() += (svd.matrixV().col(j) / sigma(j)) * svd.matrixU().col(j).transpose();
    }
  }
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) {
    return 0.0;
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace dca::linalg
