#include "dca/core/types.hpp"

#include <string>

#include "dca/errors.hpp"

namespace dca::core {

void InstitutionData::validate() const {
  if (features.rows() < 1) {
    throw DimensionError("InstitutionData: no rows");
  }
  if (static_cast<Index>(labels.size()) != features.rows()) {
    throw DimensionError("InstitutionData: " + std::to_string(features.rows()) + " rows but " +
                         std::to_string(labels.size()) + " labels");
  }
  for (const int label : labels) {
    if (label < 0 || label >= num_classes) {
      throw DataError("InstitutionData: label " + std::to_string(label) + " outside [0, " +
                      std::to_string(num_classes) + ")");
    }
  }
}

Matrix InstitutionData::one_hot() const {
  Matrix out = Matrix::Zero(static_cast<Index>(labels.size()), num_classes);
  for (std::size_t d = 0; d < labels.size(); ++d) {
    out(static_cast<Index>(d), labels[d]) = 1.0;
  }
  return out;
}

IntermediateBundle IntermediateBundle::from_anchors(std::vector<Matrix> anchors) {
  IntermediateBundle bundle;
  for (Matrix& anchor : anchors) {
    const Index cols = anchor.cols();
    bundle.add(Matrix(0, cols), std::move(anchor));
  }
  return bundle;
}

void IntermediateBundle::add(Matrix data, Matrix anchor) {
  if (anchor.rows() < 1 || anchor.cols() < 1) {
    throw DimensionError("IntermediateBundle: empty anchor representation");
  }
  if (data.cols() != anchor.cols()) {
    throw DimensionError("IntermediateBundle: data has " + std::to_string(data.cols()) +
                         " columns but anchor has " + std::to_string(anchor.cols()));
  }
  if (!anchors_.empty() && anchor.rows() != anchors_.front().rows()) {
    throw DimensionError("IntermediateBundle: anchor representations disagree on row count (" +
                         std::to_string(anchors_.front().rows()) + " vs " +
                         std::to_string(anchor.rows()) + ")");
  }
  data_.push_back(std::move(data));
  anchors_.push_back(std::move(anchor));
}

IntermediateBundle IntermediateBundle::with_data(std::vector<Matrix> data) const {
  if (data.size() != anchors_.size()) {
    throw DimensionError("IntermediateBundle::with_data: expected " +
                         std::to_string(anchors_.size()) + " blocks, got " +
                         std::to_string(data.size()));
  }
  IntermediateBundle out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.add(std::move(data[i]), anchors_[i]);
  }
  return out;
}

std::vector<Index> IntermediateBundle::dims() const {
  std::vector<Index> out;
  out.reserve(anchors_.size());
  for (const Matrix& anchor : anchors_) {
    out.push_back(anchor.cols());
  }
  return out;
}

Index IntermediateBundle::total_dim() const {
  Index total = 0;
  for (const Matrix& anchor : anchors_) {
    total += anchor.cols();
  }
  return total;
}

Index IntermediateBundle::anchor_rows() const {
  return anchors_.empty() ? 0 : anchors_.front().rows();
}

Matrix IntermediateBundle::stacked_anchors() const {
  Matrix out(anchor_rows(), total_dim());
  Index offset = 0;
  for (const Matrix& anchor : anchors_) {
    out.middleCols(offset, anchor.cols()) = anchor;
    offset += anchor.cols();
  }
  return out;
}

std::string_view method_name(Method method) {
  switch (method) {
    case Method::min_perturb:
      return "min_perturb";
    case Method::gep:
      return "gep";
    case Method::qr_svd:
      return "qr_svd";
  }
  return "unknown";
}

Vector CollaborativeMaps::stacked_column(Index j) const {
  Index total = 0;
  for (const Matrix& g : maps) {
    total += g.rows();
  }
  Vector out(total);
  Index offset = 0;
  for (const Matrix& g : maps) {
    out.segment(offset, g.rows()) = g.col(j);
    offset += g.rows();
  }
  return out;
}

}  // namespace dca::core
