#include <algorithm>
#include <string>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"

namespace dca::core {

namespace {

// Directions whose variance falls below this fraction of the leading one are
// treated as absent.
constexpr double kRankTolerance = 1e-12;

}  // namespace

Index threshold_dim(const Vector& explained_ratio, double threshold) {
  Index dim = 0;
  double cumulative = 0.0;
  for (Index k = 0; k < explained_ratio.size(); ++k) {
    cumulative += explained_ratio(k);
    if (!(cumulative < threshold)) {
      break;
    }
    dim = k + 1;
  }
  return std::max<Index>(dim, 1);
}

AbstractionMap fit_abstraction(const Matrix& x, const DimRule& rule) {
  linalg::require_finite(x, "fit_abstraction");
  if (x.rows() < 2) {
    throw DimensionError("fit_abstraction: need at least 2 rows, got " +
                         std::to_string(x.rows()));
  }

  const Vector mean = x.colwise().mean().transpose();
  const Matrix centered = x.rowwise() - mean.transpose();
  const linalg::SvdResult svd = linalg::svd_thin(centered);

  const Vector variance = svd.sigma.array().square();
  const double total = variance.sum();
  Index rank = 0;
  while (rank < variance.size() && variance(rank) > kRankTolerance * variance(0)) {
    ++rank;
  }
  if (total <= 0.0 || rank == 0) {
    throw DimensionError("fit_abstraction: data has no variance");
  }
  const Vector ratios = variance.head(rank) / total;

  Index dim = 0;
  if (const auto* fixed = std::get_if<FixedDim>(&rule)) {
    const Index cap = std::min<Index>(x.rows() - 1, x.cols());
    if (fixed->dim < 1 || fixed->dim > cap || fixed->dim > rank) {
      throw DimensionError("fit_abstraction: requested dimension " + std::to_string(fixed->dim) +
                           " exceeds available rank " + std::to_string(std::min(cap, rank)));
    }
    dim = fixed->dim;
  } else {
    const double threshold = std::get<ContributionThreshold>(rule).threshold;
    if (!(threshold > 0.0 && threshold <= 1.0)) {
      throw DimensionError("fit_abstraction: contribution threshold must lie in (0, 1]");
    }
    dim = std::min(threshold_dim(ratios, threshold), rank);
  }

  return {mean, svd.v.leftCols(dim), ratios.head(dim)};
}

Matrix apply_abstraction(const AbstractionMap& map, const Matrix& x) {
  if (x.cols() != map.input_dim()) {
    throw DimensionError("apply_abstraction: expected " + std::to_string(map.input_dim()) +
                         " columns, got " + std::to_string(x.cols()));
  }
  return (x.rowwise() - map.mean.transpose()) * map.components;
}

}  // namespace dca::core
