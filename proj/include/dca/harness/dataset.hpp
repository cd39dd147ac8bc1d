#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dca/linalg.hpp"

namespace dca::harness {

using linalg::Index;
using linalg::Matrix;

struct Dataset {
  Matrix features;                      // rows x m
  std::vector<int> labels;              // codes in [0, class_names.size())
  std::vector<std::string> class_names; // code -> original label text

  Index rows() const { return features.rows(); }
  Index dims() const { return features.cols(); }
  int num_classes() const { return static_cast<int>(class_names.size()); }
};

/// Reads a headered CSV; `label_column` holds class labels (any text),
/// every other column must be numeric. Labels are coded 0..c-1 in order of
/// first appearance. Errors carry the offending line number.
Dataset load_csv(const std::string& path, const std::string& label_column);
Dataset parse_dataset_csv(std::string_view text, const std::string& label_column);

/// Feature columns are named x0..x{m-1}; the label column comes last.
std::string dataset_to_csv(const Dataset& data, const std::string& label_column);

/// Gaussian blobs: class means are `separation` times i.i.d. standard normal
/// vectors, rows are mean + spread * N(0, I). Row d belongs to class d mod classes.
struct SyntheticSpec {
  int classes = 3;
  Index dims = 20;
  Index rows = 1000;
  double spread = 1.0;
  double separation = 1.0;
  std::uint64_t seed = 0;
};

Dataset make_synthetic(const SyntheticSpec& spec);

/// `count` disjoint index sets of `per_set` rows each, drawn without
/// replacement from 0..total-1 by a seeded Fisher-Yates shuffle.
std::vector<std::vector<Index>> partition(Index total, Index count, Index per_set,
                                          std::uint64_t seed);

/// Rows of `m` at the given indices, in order.
Matrix select_rows(const Matrix& m, const std::vector<Index>& rows);
std::vector<int> select_labels(const std::vector<int>& labels, const std::vector<Index>& rows);

}  // namespace dca::harness
