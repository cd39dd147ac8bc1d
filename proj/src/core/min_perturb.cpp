#include <algorithm>
#include <string>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"

namespace dca::core {

CollaborativeMaps solve_minperturb_system(const IntermediateBundle& bundle,
                                          const Matrix& stacked, Index collab_dim,
                                          const SvdVariant& variant) {
  const Index limit = std::min(stacked.rows(), stacked.cols());
  if (collab_dim < 1 || collab_dim > limit) {
    throw DimensionError("solve_collab_minperturb: collaborative dimension " +
                         std::to_string(collab_dim) + " outside [1, min(r, sum m~_i) = " +
                         std::to_string(limit) + "]");
  }
  const linalg::SvdResult svd =
      variant.randomized ? linalg::randomized_svd(stacked, collab_dim, variant.oversample,
                                                  variant.power_iters, variant.seed)
                         : linalg::svd_thin(stacked);
  if (svd.sigma(collab_dim - 1) <= linalg::kDefaultRcond * svd.sigma(0)) {
    throw DimensionError("solve_collab_minperturb: collaborative dimension " +
                         std::to_string(collab_dim) +
                         " exceeds the rank of the concatenated anchor representations");
  }
  const Matrix target = svd.u.leftCols(collab_dim);

  CollaborativeMaps out;
  out.method = Method::min_perturb;
  out.maps.reserve(static_cast<std::size_t>(bundle.size()));
  for (Index i = 0; i < bundle.size(); ++i) {
    out.maps.push_back(linalg::pseudo_inverse(bundle.anchor(i)) * target);
  }
  return out;
}

CollaborativeMaps solve_collab_minperturb(const IntermediateBundle& bundle, Index collab_dim,
                                          const SvdVariant& variant) {
  if (bundle.size() < 1) {
    throw DimensionError("solve_collab_minperturb: bundle has no institutions");
  }
  return solve_minperturb_system(bundle, bundle.stacked_anchors(), collab_dim, variant);
}

}  // namespace dca::core
