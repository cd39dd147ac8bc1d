#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dca/linalg.hpp"

namespace dca::core {

using linalg::Index;
using linalg::Matrix;
using linalg::Vector;

/// One institution's private rows and integer class labels.
struct InstitutionData {
  Matrix features;          // n_i x m
  std::vector<int> labels;  // n_i entries in [0, num_classes)
  int num_classes = 0;

  /// Throws DimensionError/DataError when rows and labels disagree.
  void validate() const;
  /// n_i x num_classes indicator matrix.
  Matrix one_hot() const;
};

/// Shared dummy rows every institution abstracts.
struct AnchorData {
  Matrix matrix;  // r x m
  std::uint64_t seed = 0;
};

/// Per-institution intermediate representations: f_i applied to the
/// institution's own rows and to the shared anchor.
///
/// This is the only view of institution data that solvers and downstream
/// models receive; raw features never enter it.
class IntermediateBundle {
 public:
  IntermediateBundle() = default;

  /// Bundle holding only anchor representations (data blocks left empty).
  static IntermediateBundle from_anchors(std::vector<Matrix> anchors);

  /// Appends institution i = size(). `data` may have zero rows.
  void add(Matrix data, Matrix anchor);

  /// Same anchors, different data blocks (e.g. held-out rows).
  IntermediateBundle with_data(std::vector<Matrix> data) const;

  Index size() const { return static_cast<Index>(anchors_.size()); }
  const Matrix& data(Index i) const { return data_.at(static_cast<std::size_t>(i)); }
  const Matrix& anchor(Index i) const { return anchors_.at(static_cast<std::size_t>(i)); }
  Index dim(Index i) const { return anchor(i).cols(); }
  std::vector<Index> dims() const;
  Index total_dim() const;
  Index anchor_rows() const;
  /// W = [X~_1^anc ... X~_N^anc].
  Matrix stacked_anchors() const;

 private:
  std::vector<Matrix> data_;
  std::vector<Matrix> anchors_;
};

enum class Method { min_perturb, gep, qr_svd };

std::string_view method_name(Method method);

/// Per-institution collaborative maps G_i (m~_i x m^) and the eigenvalues
/// lambda_1 <= ... <= lambda_m^ behind them (empty for min_perturb).
struct CollaborativeMaps {
  std::vector<Matrix> maps;
  Vector eigenvalues;
  Method method = Method::gep;
  /// Ridge added to B by the generalized eigensolver (gep only).
  double ridge = 0.0;

  Index collab_dim() const { return maps.empty() ? 0 : maps.front().cols(); }
  /// v_j: column j of every G_i stacked vertically.
  Vector stacked_column(Index j) const;
};

/// X^_i = X~_i G_i for every institution, optionally column-weighted.
struct CollaborativeData {
  std::vector<Matrix> representations;
  std::optional<Vector> applied_weights;
};

/// Exact SVD or seeded randomized range finder.
struct SvdVariant {
  bool randomized = false;
  std::uint64_t seed = 0;
  Index oversample = 10;
  int power_iters = 2;

  static SvdVariant exact() { return {}; }
  static SvdVariant random(std::uint64_t seed, Index oversample = 10, int power_iters = 2) {
    return {true, seed, oversample, power_iters};
  }
};

}  // namespace dca::core
