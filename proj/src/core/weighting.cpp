#include <cmath>
#include <string>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"

namespace dca::core {

Vector weight_vector(const Vector& eigenvalues) {
  const Index count = eigenvalues.size();
  if (count == 0) {
    return {};
  }
  const double first = eigenvalues(0);
  const double spread = eigenvalues(count - 1) - first;
  if (std::abs(spread) <= 1e-12) {
    return Vector::Ones(count);
  }
  Vector out(count);
  for (Index j = 0; j < count; ++j) {
    out(j) = std::exp(-(eigenvalues(j) - first) / spread);
  }
  return out;
}

CollaborativeData transform_collab(const IntermediateBundle& bundle,
                                   const CollaborativeMaps& maps,
                                   const std::optional<Vector>& weights) {
  if (static_cast<Index>(maps.maps.size()) != bundle.size()) {
    throw DimensionError("transform_collab: " + std::to_string(bundle.size()) +
                         " institutions but " + std::to_string(maps.maps.size()) + " maps");
  }
  const Index collab_dim = maps.collab_dim();
  if (weights && weights->size() != collab_dim) {
    throw DimensionError("transform_collab: " + std::to_string(weights->size()) +
                         " weights for " + std::to_string(collab_dim) + " features");
  }
  CollaborativeData out;
  out.applied_weights = weights;
  out.representations.reserve(maps.maps.size());
  for (Index i = 0; i < bundle.size(); ++i) {
    const Matrix& map = maps.maps[static_cast<std::size_t>(i)];
    if (bundle.data(i).cols() != map.rows() || map.cols() != collab_dim) {
      throw DimensionError("transform_collab: map " + std::to_string(i) + " is " +
                           std::to_string(map.rows()) + "x" + std::to_string(map.cols()) +
                           " but data has " + std::to_string(bundle.data(i).cols()) +
                           " columns");
    }
    Matrix rep = bundle.data(i) * map;
    if (weights) {
      rep = rep * weights->asDiagonal();
    }
    out.representations.push_back(std::move(rep));
  }
  return out;
}

}  // namespace dca::core
