#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dca/harness/config.hpp"

namespace dca::harness {

inline constexpr int kSchemaVersion = 1;

enum class Mode { accuracy, timing };

/// One (grid point, method, distribution seed, repetition) outcome.
/// Fields that do not apply to the mode hold NaN / empty.
struct RunRecord {
  std::string method;
  Index institutions = 0;
  Index anchor_rows = 0;
  std::uint64_t distribution_seed = 0;
  Index repetition = 0;
  bool ok = true;
  std::string message;
  double accuracy = 0.0;
  double build_ms = 0.0;
  double solve_ms = 0.0;
  double estimate_ms = 0.0;
  std::vector<Index> intermediate_dims;
  Index collab_dim = 0;
};

struct Aggregate {
  std::string method;
  Index institutions = 0;
  Index anchor_rows = 0;
  std::string metric;
  Index count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

struct ExperimentResult {
  int schema_version = kSchemaVersion;
  Mode mode = Mode::accuracy;
  KeyValues config;
  KeyValues metadata;
  std::vector<RunRecord> records;
  std::vector<Aggregate> aggregates;

  bool all_failed() const;
};

std::string mode_name(Mode mode);

/// Loads the configured dataset (CSV or synthetic). Throws DataError.
Dataset load_dataset(const ExperimentConfig& config);

/// Holdout accuracy protocol. Records are independent and may run on
/// `threads` workers; output order is (institutions, anchor multiplier,
/// method, seed, repetition) whatever the completion order.
ExperimentResult run_accuracy_experiment(const ExperimentConfig& config, const Dataset& data,
                                         int threads = 1);
ExperimentResult run_accuracy_experiment(const ExperimentConfig& config, int threads = 1);

/// Wall-clock timing of collaborative-function estimation only (matrix build
/// plus solve), median of `timing_repeats` runs per record. Always sequential.
ExperimentResult run_timing_experiment(const ExperimentConfig& config, const Dataset& data);
ExperimentResult run_timing_experiment(const ExperimentConfig& config);

/// Records of a single accuracy trial, one per configured method.
std::vector<RunRecord> run_accuracy_trial(const ExperimentConfig& config, const Dataset& data,
                                          Index institutions, double anchor_multiplier,
                                          std::uint64_t distribution_seed, Index repetition);

/// Mean and sample standard deviation of `metric` per (method, grid point)
/// over successful records, in first-appearance order.
std::vector<Aggregate> aggregate_records(const std::vector<RunRecord>& records, Mode mode);

}  // namespace dca::harness
