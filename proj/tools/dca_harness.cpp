#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dca/errors.hpp"
#include "dca/harness/config.hpp"
#include "dca/harness/csv.hpp"
#include "dca/harness/dataset.hpp"
#include "dca/harness/experiment.hpp"
#include "dca/harness/results.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kDataError = 2, kSolverError = 3 };

struct Options {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

void write_output(const Options& options, const std::string& text) {
  if (options.out_path.empty() || options.out_path == "-") {
    std::cout << text;
  } else {
    dca::harness::write_file(options.out_path, text);
  }
}

dca::harness::ExperimentConfig load(const Options& options) {
  dca::harness::ExperimentConfig config = dca::harness::load_config(options.config_path);
  if (options.seed) {
    config.master_seed = *options.seed;
  }
  return config;
}

int run(const std::string& command, const Options& options) {
  using namespace dca::harness;
  const ExperimentConfig config = load(options);

  if (command == "synth") {
    if (config.dataset != "synthetic") {
      throw dca::ConfigError("synth: config must set dataset = synthetic");
    }
    write_output(options, dataset_to_csv(make_synthetic(config.synthetic_spec()),
                                         config.label_column));
    return kOk;
  }

  const Format format = options.format == "jsonl" ? Format::jsonl : Format::csv;
  const Dataset data = load_dataset(config);
  const ExperimentResult result = command == "accuracy"
                                      ? run_accuracy_experiment(config, data, options.threads)
                                      : run_timing_experiment(config, data);
  write_output(options, format_results(result, format));

  std::size_t failed = 0;
  for (const RunRecord& record : result.records) {
    if (!record.ok) {
      ++failed;
      std::cerr << "record failed: " << record.method << " seed=" << record.distribution_seed
                << " rep=" << record.repetition << ": " << record.message << "\n";
    }
  }
  if (result.all_failed()) {
    std::cerr << "error: all " << result.records.size() << " records failed\n";
    return kSolverError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data collaboration analysis experiment harness"};
  app.require_subcommand(1);

  Options options;
  auto add_common = [&options](CLI::App* sub, bool experiment) {
    sub->add_option("--config", options.config_path, "Key-value config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", options.out_path, "Output path (default: stdout)");
    sub->add_option("--seed", options.seed, "Override master_seed");
    if (experiment) {
      sub->add_option("--format", options.format, "Result format")
          ->check(CLI::IsMember({"csv", "jsonl"}));
      sub->add_option("--threads", options.threads, "Worker threads (accuracy mode)")
          ->check(CLI::PositiveNumber);
    }
  };
  add_common(app.add_subcommand("accuracy", "Run the holdout accuracy experiment"), true);
  add_common(app.add_subcommand("timing", "Time collaborative-function estimation"), true);
  add_common(app.add_subcommand("synth", "Write the configured synthetic dataset as CSV"), false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, options);
  } catch (const dca::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const dca::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolverError;
  }
}
