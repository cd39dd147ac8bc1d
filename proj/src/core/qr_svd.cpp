#include <algorithm>
#include <cmath>
#include <string>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"

namespace dca::core {

namespace {

constexpr double kTriangularRcond = 1e-12;

}  // namespace

QrSystem build_qr_system(const IntermediateBundle& bundle) {
  if (bundle.size() < 1) {
    throw DimensionError("solve_collab_qr_svd: bundle has no institutions");
  }
  const Index rows = bundle.anchor_rows();
  QrSystem out;
  out.stacked_q.resize(rows, bundle.total_dim());
  out.triangular.reserve(static_cast<std::size_t>(bundle.size()));

  Index offset = 0;
  for (Index i = 0; i < bundle.size(); ++i) {
    const Matrix& anchor = bundle.anchor(i);
    if (rows < anchor.cols()) {
      throw DimensionError("solve_collab_qr_svd: institution " + std::to_string(i) + " has " +
                           std::to_string(anchor.cols()) + " intermediate dimensions but only " +
                           std::to_string(rows) + " anchor rows");
    }
    linalg::QrResult qr = linalg::qr_thin(anchor);
    const Vector diag = qr.r.diagonal().cwiseAbs();
    if (diag.minCoeff() <= kTriangularRcond * diag.maxCoeff()) {
      throw RankError("solve_collab_qr_svd: anchor representation of institution " +
                      std::to_string(i) +
                      " is rank deficient (R is singular); use the gep solver, which "
                      "regularizes B");
    }
    out.stacked_q.middleCols(offset, anchor.cols()) = qr.q;
    out.triangular.push_back(std::move(qr.r));
    offset += anchor.cols();
  }
  return out;
}

CollaborativeMaps solve_qr_system(const IntermediateBundle& bundle, const QrSystem& system,
                                  Index collab_dim, const SvdVariant& variant) {
  const Index count = bundle.size();
  const Index limit = std::min(system.stacked_q.rows(), system.stacked_q.cols());
  if (collab_dim < 1 || collab_dim > limit) {
    throw DimensionError("solve_collab_qr_svd: collaborative dimension " +
                         std::to_string(collab_dim) + " outside [1, min(r, sum m~_i) = " +
                         std::to_string(limit) + "]");
  }

  const linalg::SvdResult svd =
      variant.randomized
          ? linalg::randomized_svd(system.stacked_q, collab_dim, variant.oversample,
                                   variant.power_iters, variant.seed)
          : linalg::svd_thin(system.stacked_q);

  // Largest sigma gives the smallest lambda, so descending sigma is ascending lambda.
  CollaborativeMaps out;
  out.method = Method::qr_svd;
  out.eigenvalues = (2.0 * static_cast<double>(count)) -
                    2.0 * svd.sigma.head(collab_dim).array().square();

  Matrix vectors = svd.v.leftCols(collab_dim);
  Index offset = 0;
  for (const Matrix& r : system.triangular) {
    vectors.middleRows(offset, r.rows()) =
        r.triangularView<Eigen::Upper>().solve(vectors.middleRows(offset, r.rows()));
    offset += r.rows();
  }

  // Renormalize against B = blockdiag(X~_i^T X~_i) using the anchors directly.
  for (Index j = 0; j < collab_dim; ++j) {
    double norm_sq = 0.0;
    offset = 0;
    for (Index i = 0; i < count; ++i) {
      const Index dim = bundle.dim(i);
      norm_sq += (bundle.anchor(i) * vectors.col(j).segment(offset, dim)).squaredNorm();
      offset += dim;
    }
    vectors.col(j) /= std::sqrt(norm_sq);
  }
  linalg::fix_column_signs(vectors);

  out.maps = split_blocks(vectors, bundle.dims());
  return out;
}

CollaborativeMaps solve_collab_qr_svd(const IntermediateBundle& bundle, Index collab_dim,
                                      const SvdVariant& variant) {
  return solve_qr_system(bundle, build_qr_system(bundle), collab_dim, variant);
}

}  // namespace dca::core
