#include <algorithm>
#include <string>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"

namespace dca::core {

namespace {

void require_institutions(const IntermediateBundle& bundle, const char* what) {
  if (bundle.size() < 1) {
    throw DimensionError(std::string(what) + ": bundle has no institutions");
  }
  for (Index i = 0; i < bundle.size(); ++i) {
    linalg::require_finite(bundle.anchor(i), what);
  }
}

}  // namespace

GepMatrices build_gep_matrices(const IntermediateBundle& bundle) {
  require_institutions(bundle, "build_gep_matrices");
  const Index count = bundle.size();
  const Index total = bundle.total_dim();
  const double diag_factor = 2.0 * static_cast<double>(count - 1);

  GepMatrices out{Matrix::Zero(total, total), Matrix::Zero(total, total)};
  Index row = 0;
  for (Index i = 0; i < count; ++i) {
    const Matrix& left = bundle.anchor(i);
    Index col = 0;
    for (Index k = 0; k < count; ++k) {
      const Matrix& right = bundle.anchor(k);
      const Matrix gram = left.transpose() * right;
      if (i == k) {
        out.a.block(row, col, left.cols(), right.cols()) = diag_factor * gram;
        out.b.block(row, col, left.cols(), right.cols()) = gram;
      } else {
        out.a.block(row, col, left.cols(), right.cols()) = -2.0 * gram;
      }
      col += right.cols();
    }
    row += left.cols();
  }
  return out;
}

std::vector<Matrix> split_blocks(const Matrix& vectors, const std::vector<Index>& dims) {
  std::vector<Matrix> out;
  out.reserve(dims.size());
  Index offset = 0;
  for (const Index dim : dims) {
    out.emplace_back(vectors.middleRows(offset, dim));
    offset += dim;
  }
  if (offset != vectors.rows()) {
    throw DimensionError("split_blocks: block sizes sum to " + std::to_string(offset) +
                         " but vectors have " + std::to_string(vectors.rows()) + " rows");
  }
  return out;
}

Index default_collab_dim(const IntermediateBundle& bundle) {
  const std::vector<Index> dims = bundle.dims();
  if (dims.empty()) {
    throw DimensionError("default_collab_dim: bundle has no institutions");
  }
  return *std::min_element(dims.begin(), dims.end());
}

CollaborativeMaps solve_gep_system(const GepMatrices& system, const std::vector<Index>& dims,
                                   Index collab_dim, std::optional<double> ridge) {
  const Index total = system.a.rows();
  if (collab_dim < 1 || collab_dim > total) {
    throw DimensionError("solve_collab_gep: collaborative dimension " +
                         std::to_string(collab_dim) + " outside [1, " + std::to_string(total) +
                         "]");
  }
  linalg::RegularizedEig solved;
  if (ridge) {
    solved = {linalg::gen_eig_sym(system.a, system.b, collab_dim, *ridge), *ridge};
  } else {
    solved = linalg::gen_eig_sym_regularized(system.a, system.b, collab_dim);
  }

  CollaborativeMaps out;
  out.maps = split_blocks(solved.pairs.vectors, dims);
  out.eigenvalues = solved.pairs.values;
  out.method = Method::gep;
  out.ridge = solved.ridge;
  return out;
}

CollaborativeMaps solve_collab_gep(const IntermediateBundle& bundle, Index collab_dim,
                                   std::optional<double> ridge) {
  return solve_gep_system(build_gep_matrices(bundle), bundle.dims(), collab_dim, ridge);
}

double objective_value(const IntermediateBundle& bundle, const CollaborativeMaps& maps,
                       Index j) {
  if (static_cast<Index>(maps.maps.size()) != bundle.size()) {
    throw DimensionError("objective_value: bundle and maps disagree on institution count");
  }
  if (j < 0 || j >= maps.collab_dim()) {
    throw DimensionError("objective_value: column " + std::to_string(j) + " outside [0, " +
                         std::to_string(maps.collab_dim()) + ")");
  }
  std::vector<Vector> projected;
  projected.reserve(maps.maps.size());
  for (Index i = 0; i < bundle.size(); ++i) {
    projected.emplace_back(bundle.anchor(i) * maps.maps[static_cast<std::size_t>(i)].col(j));
  }
  double total = 0.0;
  for (const Vector& left : projected) {
    for (const Vector& right : projected) {
      total += (left - right).squaredNorm();
    }
  }
  return total;
}

}  // namespace dca::core
