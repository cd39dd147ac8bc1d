#include "dca/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <thread>
#include <tuple>

#include "dca/core/pipeline.hpp"
#include "dca/errors.hpp"
#include "dca/models.hpp"
#include "dca/random.hpp"

namespace dca::harness {

namespace {

using core::CollaborativeMaps;
using core::IntermediateBundle;
using linalg::Vector;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One institution's rows after the holdout split.
struct Holdout {
  Matrix train_x;
  std::vector<int> train_y;
  Matrix test_x;
  std::vector<int> test_y;
};

/// Intermediate representations of every institution's train and test rows
/// plus labels: everything the collaborative analysis is allowed to see.
struct SharedView {
  IntermediateBundle train;
  IntermediateBundle test;
  std::vector<std::vector<int>> train_labels;
  std::vector<std::vector<int>> test_labels;
};

std::vector<std::vector<Index>> institution_rows(const ExperimentConfig& config,
                                                 const Dataset& data, Index institutions,
                                                 std::uint64_t distribution_seed) {
  return partition(data.rows(), institutions, config.rows_per_institution,
                   derive_seed(config.master_seed, {stream_id("partition"), distribution_seed}));
}

std::vector<Holdout> holdout_split(const ExperimentConfig& config, const Dataset& data,
                                   const std::vector<std::vector<Index>>& rows,
                                   std::uint64_t distribution_seed, Index repetition) {
  std::vector<Holdout> out;
  out.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto n = static_cast<Index>(rows[i].size());
    const auto test_count =
        static_cast<Index>(std::llround(config.holdout_ratio * static_cast<double>(n)));
    const auto order = partition(n, 1, n,
                                 derive_seed(config.master_seed,
                                             {stream_id("holdout"), distribution_seed,
                                              static_cast<std::uint64_t>(repetition), i}))
                           .front();
    std::vector<Index> test_rows;
    std::vector<Index> train_rows;
    for (Index k = 0; k < n; ++k) {
      const Index row = rows[i][static_cast<std::size_t>(order[static_cast<std::size_t>(k)])];
      (k < test_count ? test_rows : train_rows).push_back(row);
    }
    out.push_back({select_rows(data.features, train_rows), select_labels(data.labels, train_rows),
                   select_rows(data.features, test_rows), select_labels(data.labels, test_rows)});
  }
  return out;
}

/// Fits the configured classifier on (x, y) and returns the mean accuracy
/// over the test blocks.
double fit_and_score(const ExperimentConfig& config, int num_classes, const Matrix& train_x,
                     const std::vector<int>& train_y, const std::vector<Matrix>& test_x,
                     const std::vector<std::vector<int>>& test_y) {
  double total = 0.0;
  if (config.classifier == Classifier::ridge) {
    const auto model =
        models::ridge_fit(train_x, models::one_hot(train_y, num_classes), config.ridge_penalty);
    for (std::size_t i = 0; i < test_x.size(); ++i) {
      total += models::accuracy(models::ridge_predict(model, test_x[i]), test_y[i]);
    }
  } else {
    const auto model = models::centroid_fit(train_x, train_y, num_classes);
    for (std::size_t i = 0; i < test_x.size(); ++i) {
      total += models::accuracy(models::centroid_predict(model, test_x[i]), test_y[i]);
    }
  }
  return total / static_cast<double>(test_x.size());
}

Matrix stack_rows(const std::vector<Matrix>& blocks) {
  Index rows = 0;
  for (const Matrix& block : blocks) {
    rows += block.rows();
  }
  Matrix out(rows, blocks.empty() ? 0 : blocks.front().cols());
  Index offset = 0;
  for (const Matrix& block : blocks) {
    out.middleRows(offset, block.rows()) = block;
    offset += block.rows();
  }
  return out;
}

std::vector<int> concat_labels(const std::vector<std::vector<int>>& parts) {
  std::vector<int> out;
  for (const auto& part : parts) {
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

/// One abstraction map per institution, fitted on that institution's rows.
std::vector<core::AbstractionMap> fit_abstractions(const ExperimentConfig& config,
                                                   const std::vector<Matrix>& fit_rows) {
  std::vector<core::AbstractionMap> maps;
  maps.reserve(fit_rows.size());
  if (config.intermediate_dim) {
    for (const Matrix& rows : fit_rows) {
      maps.push_back(core::fit_abstraction(rows, core::FixedDim{*config.intermediate_dim}));
    }
    return maps;
  }
  const core::ContributionThreshold rule{*config.contribution_threshold};
  if (config.dim_scope == DimRuleScope::per_institution) {
    for (const Matrix& rows : fit_rows) {
      maps.push_back(core::fit_abstraction(rows, rule));
    }
    return maps;
  }
  // The threshold is evaluated on institution 1 and its dimension reused everywhere.
  maps.push_back(core::fit_abstraction(fit_rows.front(), rule));
  const core::FixedDim fixed{maps.front().output_dim()};
  for (std::size_t i = 1; i < fit_rows.size(); ++i) {
    maps.push_back(core::fit_abstraction(fit_rows[i], fixed));
  }
  return maps;
}

core::SvdVariant svd_variant(const ExperimentConfig& config, AnalysisMethod method,
                             std::uint64_t distribution_seed, Index repetition) {
  if (method != AnalysisMethod::dca_qr_randsvd && method != AnalysisMethod::dca_min_perturb_rand) {
    return core::SvdVariant::exact();
  }
  const std::uint64_t seed =
      derive_seed(config.master_seed, {stream_id("rsvd"), distribution_seed,
                                       static_cast<std::uint64_t>(repetition)});
  return core::SvdVariant::random(seed, config.rsvd_oversample, config.rsvd_power_iters);
}

Index resolve_collab_dim(const ExperimentConfig& config, const IntermediateBundle& bundle) {
  return config.collab_dim.value_or(core::default_collab_dim(bundle));
}

/// Build and solve phases kept separate so timing can report each.
struct Estimate {
  CollaborativeMaps maps;
  std::optional<Vector> weights;
  double build_ms = 0.0;
  double solve_ms = 0.0;
};

double elapsed_ms(std::chrono::steady_clock::time_point from,
                  std::chrono::steady_clock::time_point to) {
  return std::chrono::duration<double, std::milli>(to - from).count();
}

Estimate estimate_maps(AnalysisMethod method, const IntermediateBundle& bundle, Index collab_dim,
                       const core::SvdVariant& variant) {
  using Clock = std::chrono::steady_clock;
  Estimate out;
  const auto start = Clock::now();
  switch (method) {
    case AnalysisMethod::dca_gep:
    case AnalysisMethod::dca_gep_weighted: {
      const core::GepMatrices system = core::build_gep_matrices(bundle);
      const auto built = Clock::now();
      out.maps = core::solve_gep_system(system, bundle.dims(), collab_dim, std::nullopt);
      if (method == AnalysisMethod::dca_gep_weighted) {
        out.weights = core::weight_vector(out.maps.eigenvalues);
      }
      const auto solved = Clock::now();
      out.build_ms = elapsed_ms(start, built);
      out.solve_ms = elapsed_ms(built, solved);
      break;
    }
    case AnalysisMethod::dca_qr_svd:
    case AnalysisMethod::dca_qr_randsvd: {
      const core::QrSystem system = core::build_qr_system(bundle);
      const auto built = Clock::now();
      out.maps = core::solve_qr_system(bundle, system, collab_dim, variant);
      const auto solved = Clock::now();
      out.build_ms = elapsed_ms(start, built);
      out.solve_ms = elapsed_ms(built, solved);
      break;
    }
    case AnalysisMethod::dca_min_perturb:
    case AnalysisMethod::dca_min_perturb_rand: {
      const Matrix stacked = bundle.stacked_anchors();
      const auto built = Clock::now();
      out.maps = core::solve_minperturb_system(bundle, stacked, collab_dim, variant);
      const auto solved = Clock::now();
      out.build_ms = elapsed_ms(start, built);
      out.solve_ms = elapsed_ms(built, solved);
      break;
    }
    default:
      throw ConfigError("method '" + method_key(method) +
                        "' does not estimate a collaborative function");
  }
  return out;
}

/// Collaborative analysis on intermediate representations only.
double collaborative_accuracy(const ExperimentConfig& config, int num_classes,
                              AnalysisMethod method, const SharedView& view, Index collab_dim,
                              const core::SvdVariant& variant) {
  const Estimate estimate = estimate_maps(method, view.train, collab_dim, variant);
  const core::CollaborativeData train =
      core::transform_collab(view.train, estimate.maps, estimate.weights);
  const core::CollaborativeData test =
      core::transform_collab(view.test, estimate.maps, estimate.weights);
  return fit_and_score(config, num_classes, stack_rows(train.representations),
                       concat_labels(view.train_labels), test.representations, view.test_labels);
}

RunRecord base_record(AnalysisMethod method, Index institutions, Index anchor_rows,
                      std::uint64_t distribution_seed, Index repetition) {
  RunRecord record;
  record.method = method_key(method);
  record.institutions = institutions;
  record.anchor_rows = anchor_rows;
  record.distribution_seed = distribution_seed;
  record.repetition = repetition;
  record.accuracy = kNaN;
  record.build_ms = kNaN;
  record.solve_ms = kNaN;
  record.estimate_ms = kNaN;
  return record;
}

void check_capacity(const ExperimentConfig& config, const Dataset& data) {
  for (const Index count : config.institutions) {
    if (count * config.rows_per_institution > data.rows()) {
      throw ConfigError("config: " + std::to_string(count) + " institutions x " +
                        std::to_string(config.rows_per_institution) + " rows exceeds the " +
                        std::to_string(data.rows()) + " dataset rows");
    }
  }
}

KeyValues metadata(const ExperimentConfig& config, Mode mode) {
  KeyValues out;
  out.emplace_back("generator", std::string(kGeneratorName));
  out.emplace_back("seed_derivation", "splitmix64(master_seed, stream, distribution_seed, repetition)");
  out.emplace_back("linalg", "Eigen " + std::to_string(EIGEN_WORLD_VERSION) + "." +
                                 std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION));
  out.emplace_back("dim_rule", config.intermediate_dim ? "fixed"
                               : config.dim_scope == DimRuleScope::per_institution
                                   ? "per_institution"
                                   : "institution_one");
  if (mode == Mode::accuracy) {
    out.emplace_back("abstraction_fit", "training_rows");
    out.emplace_back("weighting_applied", "train_and_test");
    out.emplace_back("test_accuracy", "mean_over_institutions");
  } else {
    out.emplace_back("abstraction_fit", "all_institution_rows");
    out.emplace_back("timing_statistic", "median_of_" + std::to_string(config.timing_repeats));
    out.emplace_back("timing_clock", "steady_clock");
  }
  return out;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace

bool ExperimentResult::all_failed() const {
  return !records.empty() &&
         std::none_of(records.begin(), records.end(), [](const RunRecord& r) { return r.ok; });
}

std::string mode_name(Mode mode) {
  return mode == Mode::accuracy ? "accuracy" : "timing";
}

Dataset load_dataset(const ExperimentConfig& config) {
  if (config.dataset == "synthetic") {
    return make_synthetic(config.synthetic_spec());
  }
  return load_csv(config.dataset, config.label_column);
}

std::vector<RunRecord> run_accuracy_trial(const ExperimentConfig& config, const Dataset& data,
                                          Index institutions, double anchor_multiplier,
                                          std::uint64_t distribution_seed, Index repetition) {
  const Index anchor_rows = ExperimentConfig::anchor_rows(anchor_multiplier, data.dims());
  const int num_classes = data.num_classes();
  std::vector<RunRecord> records;
  records.reserve(config.methods.size());
  for (const AnalysisMethod method : config.methods) {
    records.push_back(base_record(method, institutions, anchor_rows, distribution_seed, repetition));
  }

  std::vector<Holdout> splits;
  try {
    splits = holdout_split(config, data,
                           institution_rows(config, data, institutions, distribution_seed),
                           distribution_seed, repetition);
  } catch (const std::exception& e) {
    for (RunRecord& record : records) {
      record.ok = false;
      record.message = e.what();
    }
    return records;
  }

  // Raw rows end here: collaborative methods only receive this view.
  std::optional<SharedView> view;
  std::string view_error;
  const bool needs_view = std::any_of(config.methods.begin(), config.methods.end(), is_collaborative);
  if (needs_view) {
    try {
      std::vector<Matrix> fit_rows;
      for (const Holdout& split : splits) {
        fit_rows.push_back(split.train_x);
      }
      const auto maps = fit_abstractions(config, fit_rows);
      const core::AnchorData anchor = core::generate_anchor(
          anchor_rows, data.dims(),
          derive_seed(config.master_seed, {stream_id("anchor"), distribution_seed,
                                           static_cast<std::uint64_t>(repetition)}));
      SharedView built;
      std::vector<Matrix> test_blocks;
      for (std::size_t i = 0; i < splits.size(); ++i) {
        built.train.add(core::apply_abstraction(maps[i], splits[i].train_x),
                        core::apply_abstraction(maps[i], anchor.matrix));
        test_blocks.push_back(core::apply_abstraction(maps[i], splits[i].test_x));
        built.train_labels.push_back(splits[i].train_y);
        built.test_labels.push_back(splits[i].test_y);
      }
      built.test = built.train.with_data(std::move(test_blocks));
      view = std::move(built);
    } catch (const std::exception& e) {
      view_error = std::string("abstraction: ") + e.what();
    }
  }

  for (std::size_t k = 0; k < config.methods.size(); ++k) {
    const AnalysisMethod method = config.methods[k];
    RunRecord& record = records[k];
    try {
      switch (method) {
        case AnalysisMethod::individual: {
          double total = 0.0;
          for (const Holdout& split : splits) {
            total += fit_and_score(config, num_classes, split.train_x, split.train_y,
                                   {split.test_x}, {split.test_y});
          }
          record.accuracy = total / static_cast<double>(splits.size());
          break;
        }
        case AnalysisMethod::centralized: {
          std::vector<Matrix> train_blocks;
          std::vector<std::vector<int>> train_labels;
          std::vector<Matrix> test_blocks;
          std::vector<std::vector<int>> test_labels;
          for (const Holdout& split : splits) {
            train_blocks.push_back(split.train_x);
            train_labels.push_back(split.train_y);
            test_blocks.push_back(split.test_x);
            test_labels.push_back(split.test_y);
          }
          record.accuracy = fit_and_score(config, num_classes, stack_rows(train_blocks),
                                          concat_labels(train_labels), test_blocks, test_labels);
          break;
        }
        default: {
          if (!view) {
            throw Error(view_error);
          }
          record.intermediate_dims = view->train.dims();
          record.collab_dim = resolve_collab_dim(config, view->train);
          record.accuracy =
              collaborative_accuracy(config, num_classes, method, *view, record.collab_dim,
                                     svd_variant(config, method, distribution_seed, repetition));
          break;
        }
      }
    } catch (const std::exception& e) {
      record.ok = false;
      record.accuracy = kNaN;
      record.message = e.what();
    }
  }
  return records;
}

ExperimentResult run_accuracy_experiment(const ExperimentConfig& config, const Dataset& data,
                                         int threads) {
  config.validate();
  check_capacity(config, data);

  struct Trial {
    Index institutions;
    double multiplier;
    std::uint64_t seed;
    Index repetition;
  };
  std::vector<Trial> trials;
  for (const Index count : config.institutions) {
    for (const double multiplier : config.anchor_multipliers) {
      for (const std::uint64_t seed : config.distribution_seeds) {
        for (Index rep = 0; rep < config.holdout_repetitions; ++rep) {
          trials.push_back({count, multiplier, seed, rep});
        }
      }
    }
  }

  std::vector<std::vector<RunRecord>> outcomes(trials.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < trials.size(); t = next++) {
      const Trial& trial = trials[t];
      outcomes[t] = run_accuracy_trial(config, data, trial.institutions, trial.multiplier,
                                       trial.seed, trial.repetition);
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(trials.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(worker);
    }
  }

  // Reorder trial-major outcomes into (grid point, method, seed, repetition).
  ExperimentResult result;
  result.mode = Mode::accuracy;
  result.config = config.echo();
  result.metadata = metadata(config, Mode::accuracy);
  const std::size_t per_grid = config.distribution_seeds.size() *
                               static_cast<std::size_t>(config.holdout_repetitions);
  for (std::size_t base = 0; base < trials.size(); base += per_grid) {
    for (std::size_t k = 0; k < config.methods.size(); ++k) {
      for (std::size_t t = base; t < base + per_grid; ++t) {
        result.records.push_back(outcomes[t][k]);
      }
    }
  }
  result.aggregates = aggregate_records(result.records, Mode::accuracy);
  return result;
}

ExperimentResult run_accuracy_experiment(const ExperimentConfig& config, int threads) {
  return run_accuracy_experiment(config, load_dataset(config), threads);
}

ExperimentResult run_timing_experiment(const ExperimentConfig& config, const Dataset& data) {
  config.validate();
  check_capacity(config, data);
  for (const AnalysisMethod method : config.methods) {
    if (!is_collaborative(method)) {
      throw ConfigError("timing: method '" + method_key(method) +
                        "' does not estimate a collaborative function");
    }
  }

  ExperimentResult result;
  result.mode = Mode::timing;
  result.config = config.echo();
  result.metadata = metadata(config, Mode::timing);

  for (const Index count : config.institutions) {
    for (const double multiplier : config.anchor_multipliers) {
      const Index anchor_rows = ExperimentConfig::anchor_rows(multiplier, data.dims());
      std::vector<std::vector<RunRecord>> per_seed;
      for (const std::uint64_t seed : config.distribution_seeds) {
        std::vector<RunRecord> records;
        for (const AnalysisMethod method : config.methods) {
          records.push_back(base_record(method, count, anchor_rows, seed, 0));
        }
        try {
          const auto rows = institution_rows(config, data, count, seed);
          std::vector<Matrix> fit_rows;
          for (const auto& block : rows) {
            fit_rows.push_back(select_rows(data.features, block));
          }
          const auto maps = fit_abstractions(config, fit_rows);
          const core::AnchorData anchor = core::generate_anchor(
              anchor_rows, data.dims(),
              derive_seed(config.master_seed, {stream_id("anchor"), seed, 0}));
          IntermediateBundle bundle;
          for (std::size_t i = 0; i < fit_rows.size(); ++i) {
            bundle.add(Matrix(0, maps[i].output_dim()),
                       core::apply_abstraction(maps[i], anchor.matrix));
          }
          fit_rows.clear();

          for (std::size_t k = 0; k < config.methods.size(); ++k) {
            RunRecord& record = records[k];
            try {
              record.intermediate_dims = bundle.dims();
              record.collab_dim = resolve_collab_dim(config, bundle);
              const core::SvdVariant variant = svd_variant(config, config.methods[k], seed, 0);
              std::vector<double> build;
              std::vector<double> solve;
              std::vector<double> total;
              for (int rep = 0; rep < config.timing_repeats; ++rep) {
                const Estimate estimate =
                    estimate_maps(config.methods[k], bundle, record.collab_dim, variant);
                build.push_back(estimate.build_ms);
                solve.push_back(estimate.solve_ms);
                total.push_back(estimate.build_ms + estimate.solve_ms);
              }
              record.build_ms = median(build);
              record.solve_ms = median(solve);
              record.estimate_ms = median(total);
            } catch (const std::exception& e) {
              record.ok = false;
              record.message = e.what();
              record.build_ms = record.solve_ms = record.estimate_ms = kNaN;
            }
          }
        } catch (const std::exception& e) {
          for (RunRecord& record : records) {
            record.ok = false;
            record.message = std::string("abstraction: ") + e.what();
          }
        }
        per_seed.push_back(std::move(records));
      }
      for (std::size_t k = 0; k < config.methods.size(); ++k) {
        for (const auto& records : per_seed) {
          result.records.push_back(records[k]);
        }
      }
    }
  }
  result.aggregates = aggregate_records(result.records, Mode::timing);
  return result;
}

ExperimentResult run_timing_experiment(const ExperimentConfig& config) {
  return run_timing_experiment(config, load_dataset(config));
}

std::vector<Aggregate> aggregate_records(const std::vector<RunRecord>& records, Mode mode) {
  using Key = std::tuple<std::string, Index, Index>;
  std::vector<Key> order;
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const RunRecord& record : records) {
    const Key key{record.method, record.institutions, record.anchor_rows};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) {
      order.push_back(key);
    }
    if (record.ok) {
      it->second.push_back(&record);
    }
  }

  const std::vector<std::pair<std::string, double RunRecord::*>> metrics =
      mode == Mode::accuracy
          ? std::vector<std::pair<std::string, double RunRecord::*>>{{"accuracy",
                                                                      &RunRecord::accuracy}}
          : std::vector<std::pair<std::string, double RunRecord::*>>{
                {"build_ms", &RunRecord::build_ms},
                {"solve_ms", &RunRecord::solve_ms},
                {"estimate_ms", &RunRecord::estimate_ms}};

  std::vector<Aggregate> out;
  for (const Key& key : order) {
    const auto& members = groups.at(key);
    for (const auto& [name, field] : metrics) {
      Aggregate agg;
      agg.method = std::get<0>(key);
      agg.institutions = std::get<1>(key);
      agg.anchor_rows = std::get<2>(key);
      agg.metric = name;
      agg.count = static_cast<Index>(members.size());
      if (members.empty()) {
        agg.mean = kNaN;
        agg.stddev = kNaN;
      } else {
        double sum = 0.0;
        for (const RunRecord* r : members) {
          sum += r->*field;
        }
        agg.mean = sum / static_cast<double>(members.size());
        double sq = 0.0;
        for (const RunRecord* r : members) {
          sq += (r->*field - agg.mean) * (r->*field - agg.mean);
        }
        agg.stddev =
            members.size() > 1 ? std::sqrt(sq / static_cast<double>(members.size() - 1)) : 0.0;
      }
      out.push_back(std::move(agg));
    }
  }
  return out;
}

}  // namespace dca::harness
