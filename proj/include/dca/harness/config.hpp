#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dca/harness/dataset.hpp"

namespace dca::harness {

/// Analysis modes a run can compare.
enum class AnalysisMethod {
  individual,
  centralized,
  dca_min_perturb,
  dca_gep,
  dca_gep_weighted,
  dca_qr_svd,
  dca_qr_randsvd,
  dca_min_perturb_rand,
};

std::string method_key(AnalysisMethod method);
std::optional<AnalysisMethod> parse_method(std::string_view key);
bool is_collaborative(AnalysisMethod method);

enum class Classifier { ridge, centroid };
enum class DimRuleScope { per_institution, institution_one };

using KeyValues = std::vector<std::pair<std::string, std::string>>;

struct ExperimentConfig {
  // Data source: a CSV path, or synthetic blobs when `dataset == "synthetic"`.
  std::string dataset = "synthetic";
  std::string label_column = "label";
  SyntheticSpec synthetic;
  /// Seed for synthetic data; falls back to master_seed when unset.
  std::optional<std::uint64_t> synthetic_seed;

  std::vector<Index> institutions{20};
  Index rows_per_institution = 50;
  std::vector<double> anchor_multipliers{9.0};

  std::optional<double> contribution_threshold = 0.9;
  std::optional<Index> intermediate_dim;
  DimRuleScope dim_scope = DimRuleScope::per_institution;
  std::optional<Index> collab_dim;

  std::vector<AnalysisMethod> methods;
  Classifier classifier = Classifier::ridge;
  double ridge_penalty = 1.0;

  std::vector<std::uint64_t> distribution_seeds{1, 2, 3, 4, 5};
  Index holdout_repetitions = 10;
  double holdout_ratio = 0.5;
  std::uint64_t master_seed = 0;

  Index rsvd_oversample = 10;
  int rsvd_power_iters = 2;
  int timing_repeats = 3;

  /// Anchor rows for a multiplier: round(multiplier * m), at least 1.
  static Index anchor_rows(double multiplier, Index dims);

  /// `synthetic` with its seed resolved.
  SyntheticSpec synthetic_spec() const;

  /// Checks cross-field invariants; throws ConfigError.
  void validate() const;

  /// Every key with its canonical value, in documentation order.
  KeyValues echo() const;
};

/// Parses `key = value` lines. '#' starts a comment, blank lines are ignored,
/// lists are comma separated. Unknown or repeated keys are errors.
ExperimentConfig parse_config(std::string_view text);

/// parse_config on a file; a relative `dataset` path is resolved against the
/// directory holding the config file.
ExperimentConfig load_config(const std::string& path);

}  // namespace dca::harness
