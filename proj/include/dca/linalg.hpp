#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace dca::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Eigenpairs sorted by ascending value; column k of `vectors` pairs with values[k].
struct EigPairs {
  Vector values;
  Matrix vectors;
};

/// Thin SVD: m = u * diag(sigma) * v^T with sigma descending.
struct SvdResult {
  Matrix u;
  Vector sigma;
  Matrix v;
};

struct QrResult {
  Matrix q;
  Matrix r;
};

inline constexpr double kDefaultRcond = 1e-12;

/// Throws NonFiniteError if any entry is NaN or Inf, DimensionError if the matrix is empty.
void require_finite(const Matrix& m, const char* what);

/// Thin Householder QR with a nonnegative diagonal in r. Requires rows >= cols.
QrResult qr_thin(const Matrix& m);

/// Full thin SVD. Singular vectors are sign-normalized so that the
/// largest-magnitude entry of each column of v is positive.
SvdResult svd_thin(const Matrix& m);

/// Rank-k randomized SVD (Gaussian range finder, `power_iters` rounds of
/// re-orthonormalized subspace iteration). Deterministic for a given seed.
SvdResult randomized_svd(const Matrix& m, Index k, Index oversample, int power_iters,
                         std::uint64_t seed);

/// Eigendecomposition of a symmetric matrix. Inputs whose asymmetry exceeds
/// 1e-8 * ||s||_F are rejected; the rest are symmetrized before solving.
///
/// With repeated eigenvalues the returned basis of each eigenspace is
/// orthonormal but otherwise arbitrary.
EigPairs sym_eig(const Matrix& s);

/// The k smallest eigenpairs of a v = lambda (b + ridge I) v.
///
/// Reduced to a standard symmetric problem through the Cholesky factor
/// L L^T = b + ridge I, solved, and back-transformed. Eigenvectors satisfy
/// v^T (b + ridge I) v = 1. Throws DefinitenessError when the factorization
/// fails or a pivot collapses below 1e-14 of the largest diagonal entry.
EigPairs gen_eig_sym(const Matrix& a, const Matrix& b, Index k, double ridge = 0.0);

/// gen_eig_sym with automatic regularization: tries ridge 0, then
/// 1e-10 * trace(b) / n, escalating x10 up to three times.
struct RegularizedEig {
  EigPairs pairs;
  double ridge = 0.0;
};
RegularizedEig gen_eig_sym_regularized(const Matrix& a, const Matrix& b, Index k);

/// Moore-Penrose pseudo-inverse; singular values below rcond * sigma_max are dropped.
Matrix pseudo_inverse(const Matrix& m, double rcond = kDefaultRcond);

/// Flips each column so its largest-magnitude entry (first on ties) is positive.
/// Returns the applied signs.
Vector fix_column_signs(Matrix& vectors);

/// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace dca::linalg
