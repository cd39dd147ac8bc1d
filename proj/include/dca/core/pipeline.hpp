#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "dca/core/types.hpp"

namespace dca::core {

// ---------------------------------------------------------------------------
// Anchor data

/// r x m matrix of i.i.d. standard normals drawn from Rng(seed).
AnchorData generate_anchor(Index rows, Index cols, std::uint64_t seed);

// ---------------------------------------------------------------------------
// PCA abstraction

struct FixedDim {
  Index dim = 1;
};

/// Keep the largest number of leading components whose cumulative explained
/// ratio stays strictly below `threshold`, never fewer than one.
struct ContributionThreshold {
  double threshold = 0.9;
};

using DimRule = std::variant<FixedDim, ContributionThreshold>;

struct AbstractionMap {
  Vector mean;             // length m
  Matrix components;       // m x m~, orthonormal columns
  Vector explained_ratio;  // length m~, non-increasing

  Index input_dim() const { return components.rows(); }
  Index output_dim() const { return components.cols(); }
};

/// Number of components the threshold rule selects from a full
/// explained-ratio spectrum (sorted descending).
Index threshold_dim(const Vector& explained_ratio, double threshold);

AbstractionMap fit_abstraction(const Matrix& x, const DimRule& rule);

/// (x - mean) * components.
Matrix apply_abstraction(const AbstractionMap& map, const Matrix& x);

// ---------------------------------------------------------------------------
// Generalized eigenvalue formulation

struct GepMatrices {
  Matrix a;
  Matrix b;
};

/// A has diagonal blocks 2(N-1) X~_i^T X~_i and off-diagonal blocks
/// -2 X~_i^T X~_i'; B is block diagonal with blocks X~_i^T X~_i.
GepMatrices build_gep_matrices(const IntermediateBundle& bundle);

/// Splits each stacked vector (column of `vectors`) into per-institution
/// blocks of the given sizes: column j of G_i is block i of column j.
std::vector<Matrix> split_blocks(const Matrix& vectors, const std::vector<Index>& dims);

/// Default m^: the smallest intermediate dimension across institutions.
Index default_collab_dim(const IntermediateBundle& bundle);

/// Second half of solve_collab_gep, given prebuilt A and B.
CollaborativeMaps solve_gep_system(const GepMatrices& system, const std::vector<Index>& dims,
                                   Index collab_dim, std::optional<double> ridge);

/// The m^ smallest generalized eigenpairs of (A, B), B-normalized.
/// Without an explicit ridge, B is regularized only if its Cholesky fails.
CollaborativeMaps solve_collab_gep(const IntermediateBundle& bundle, Index collab_dim,
                                   std::optional<double> ridge = std::nullopt);

/// sum_i sum_i' || X~_i^anc g_ij - X~_i'^anc g_i'j ||^2, evaluated term by term.
double objective_value(const IntermediateBundle& bundle, const CollaborativeMaps& maps, Index j);

// ---------------------------------------------------------------------------
// QR + SVD reduction

/// Thin QR of every anchor block plus W_Q = [Q_1 ... Q_N].
struct QrSystem {
  Matrix stacked_q;
  std::vector<Matrix> triangular;
};

QrSystem build_qr_system(const IntermediateBundle& bundle);

CollaborativeMaps solve_qr_system(const IntermediateBundle& bundle, const QrSystem& system,
                                  Index collab_dim, const SvdVariant& variant);

/// Same eigenpairs as solve_collab_gep, computed from the SVD of W_Q:
/// lambda_j = 2N - 2 sigma_j^2 and v_j = blockdiag(R_i)^{-1} v'_j.
CollaborativeMaps solve_collab_qr_svd(const IntermediateBundle& bundle, Index collab_dim,
                                      const SvdVariant& variant = SvdVariant::exact());

// ---------------------------------------------------------------------------
// Minimal perturbation baseline

CollaborativeMaps solve_minperturb_system(const IntermediateBundle& bundle,
                                          const Matrix& stacked, Index collab_dim,
                                          const SvdVariant& variant);

/// G_i = pinv(X~_i^anc) U_m^ with U_m^ the leading left singular vectors of
/// the concatenated anchor representations.
CollaborativeMaps solve_collab_minperturb(const IntermediateBundle& bundle, Index collab_dim,
                                          const SvdVariant& variant = SvdVariant::exact());

// ---------------------------------------------------------------------------
// Weighting and transform

/// w_j = exp(-(lambda_j - lambda_1) / (lambda_m^ - lambda_1)); all ones when
/// the spread is below 1e-12.
Vector weight_vector(const Vector& eigenvalues);

CollaborativeData transform_collab(const IntermediateBundle& bundle,
                                   const CollaborativeMaps& maps,
                                   const std::optional<Vector>& weights = std::nullopt);

}  // namespace dca::core
