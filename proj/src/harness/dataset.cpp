#include "dca/harness/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_map>

#include "dca/errors.hpp"
#include "dca/harness/csv.hpp"
#include "dca/random.hpp"

namespace dca::harness {

Dataset parse_dataset_csv(std::string_view text, const std::string& label_column) {
  const std::vector<CsvRow> rows = parse_csv(text);
  if (rows.empty()) {
    throw DataError("dataset: missing header row");
  }
  const std::vector<std::string>& header = rows.front().fields;
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    throw DataError("dataset: label column '" + label_column + "' not found in header");
  }
  const auto label_pos = static_cast<std::size_t>(label_it - header.begin());
  if (rows.size() == 1) {
    throw DataError("dataset: no data rows");
  }
  if (header.size() < 2) {
    throw DataError("dataset: no feature columns");
  }

  Dataset out;
  const auto data_rows = static_cast<Index>(rows.size() - 1);
  out.features.resize(data_rows, static_cast<Index>(header.size() - 1));
  out.labels.reserve(rows.size() - 1);
  std::unordered_map<std::string, int> codes;

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const CsvRow& row = rows[r];
    if (row.fields.size() != header.size()) {
      throw DataError("dataset line " + std::to_string(row.line) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(row.fields.size()));
    }
    Index col = 0;
    for (std::size_t f = 0; f < row.fields.size(); ++f) {
      if (f == label_pos) {
        continue;
      }
      double value = 0.0;
      if (!parse_double(row.fields[f], value)) {
        throw DataError("dataset line " + std::to_string(row.line) + ": non-numeric value '" +
                        row.fields[f] + "' in column '" + header[f] + "'");
      }
      out.features(static_cast<Index>(r - 1), col++) = value;
    }
    const std::string& label = row.fields[label_pos];
    auto [it, inserted] = codes.emplace(label, static_cast<int>(out.class_names.size()));
    if (inserted) {
      out.class_names.push_back(label);
    }
    out.labels.push_back(it->second);
  }
  return out;
}

Dataset load_csv(const std::string& path, const std::string& label_column) {
  return parse_dataset_csv(read_file(path), label_column);
}

std::string dataset_to_csv(const Dataset& data, const std::string& label_column) {
  std::string out;
  for (Index j = 0; j < data.dims(); ++j) {
    out += "x" + std::to_string(j) + ",";
  }
  out += csv_escape(label_column) + "\n";
  for (Index i = 0; i < data.rows(); ++i) {
    for (Index j = 0; j < data.dims(); ++j) {
      out += format_double(data.features(i, j));
      out += ',';
    }
    out += csv_escape(data.class_names.at(static_cast<std::size_t>(data.labels[static_cast<std::size_t>(i)])));
    out += '\n';
  }
  return out;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  if (spec.classes < 2) {
    throw DataError("make_synthetic: need at least 2 classes");
  }
  if (spec.dims < 1 || spec.rows < 1) {
    throw DataError("make_synthetic: dims and rows must be positive");
  }
  Rng rng(spec.seed);
  const Matrix means = spec.separation * rng.normal_matrix(spec.classes, spec.dims);

  Dataset out;
  out.features.resize(spec.rows, spec.dims);
  out.labels.resize(static_cast<std::size_t>(spec.rows));
  for (Index i = 0; i < spec.rows; ++i) {
    const int label = static_cast<int>(i % spec.classes);
    out.labels[static_cast<std::size_t>(i)] = label;
    for (Index j = 0; j < spec.dims; ++j) {
      out.features(i, j) = means(label, j) + spec.spread * rng.normal();
    }
  }
  for (int c = 0; c < spec.classes; ++c) {
    out.class_names.push_back("c" + std::to_string(c));
  }
  return out;
}

std::vector<std::vector<Index>> partition(Index total, Index count, Index per_set,
                                          std::uint64_t seed) {
  if (count < 1 || per_set < 1) {
    throw DataError("partition: institution count and rows per institution must be positive");
  }
  if (count * per_set > total) {
    throw DataError("partition: " + std::to_string(count) + " x " + std::to_string(per_set) +
                    " rows requested but only " + std::to_string(total) + " available");
  }
  std::vector<Index> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  // Fisher-Yates, only as far as the rows actually handed out.
  const auto needed = static_cast<std::size_t>(count * per_set);
  for (std::size_t i = 0; i < needed; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(order.size() - i));
    std::swap(order[i], order[j]);
  }
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(count));
  for (std::size_t s = 0; s < out.size(); ++s) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(s * static_cast<std::size_t>(per_set));
    out[s].assign(first, first + per_set);
  }
  return out;
}

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Index>(i)) = m.row(rows[i]);
  }
  return out;
}

std::vector<int> select_labels(const std::vector<int>& labels, const std::vector<Index>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const Index r : rows) {
    out.push_back(labels.at(static_cast<std::size_t>(r)));
  }
  return out;
}

}  // namespace dca::harness
