#include "dca/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "dca/errors.hpp"
#include "dca/harness/csv.hpp"

namespace dca::harness {

namespace {

constexpr std::pair<AnalysisMethod, std::string_view> kMethodKeys[] = {
    {AnalysisMethod::individual, "individual"},
    {AnalysisMethod::centralized, "centralized"},
    {AnalysisMethod::dca_min_perturb, "dca_min_perturb"},
    {AnalysisMethod::dca_gep, "dca_gep"},
    {AnalysisMethod::dca_gep_weighted, "dca_gep_weighted"},
    {AnalysisMethod::dca_qr_svd, "dca_qr_svd"},
    {AnalysisMethod::dca_qr_randsvd, "dca_qr_randsvd"},
    {AnalysisMethod::dca_min_perturb_rand, "dca_min_perturb_rand"},
};

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = value.find(',', start);
    out.push_back(trim(std::string_view(value).substr(start, comma - start)));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  if (out.size() == 1 && out.front().empty()) {
    out.clear();
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("config key '" + key + "': invalid value '" + value + "' (expected " +
                    expected + ")");
}

std::uint64_t to_u64(const std::string& key, const std::string& text) {
  std::uint64_t out = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), out);
  if (text.empty() || result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    bad_value(key, text, "a nonnegative integer");
  }
  return out;
}

Index to_count(const std::string& key, const std::string& text) {
  const std::uint64_t value = to_u64(key, text);
  if (value < 1 || value > (std::uint64_t{1} << 40)) {
    bad_value(key, text, "a positive integer");
  }
  return static_cast<Index>(value);
}

double to_real(const std::string& key, const std::string& text) {
  double out = 0.0;
  if (!parse_double(text, out)) {
    bad_value(key, text, "a finite real number");
  }
  return out;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out += (i ? "," : "") + parts[i];
  }
  return out;
}

template <typename T, typename F>
std::string join_mapped(const std::vector<T>& values, F&& f) {
  std::vector<std::string> parts;
  parts.reserve(values.size());
  for (const T& v : values) {
    parts.push_back(f(v));
  }
  return join(parts);
}

}  // namespace

std::string method_key(AnalysisMethod method) {
  for (const auto& [value, key] : kMethodKeys) {
    if (value == method) {
      return std::string(key);
    }
  }
  return "unknown";
}

std::optional<AnalysisMethod> parse_method(std::string_view key) {
  for (const auto& [value, name] : kMethodKeys) {
    if (name == key) {
      return value;
    }
  }
  return std::nullopt;
}

bool is_collaborative(AnalysisMethod method) {
  return method != AnalysisMethod::individual && method != AnalysisMethod::centralized;
}

Index ExperimentConfig::anchor_rows(double multiplier, Index dims) {
  return std::max<Index>(1, static_cast<Index>(std::llround(multiplier * static_cast<double>(dims))));
}

SyntheticSpec ExperimentConfig::synthetic_spec() const {
  SyntheticSpec spec = synthetic;
  spec.seed = synthetic_seed.value_or(master_seed);
  return spec;
}

void ExperimentConfig::validate() const {
  if (contribution_threshold.has_value() == intermediate_dim.has_value()) {
    throw ConfigError("config: set exactly one of contribution_threshold and intermediate_dim");
  }
  if (contribution_threshold && !(*contribution_threshold > 0.0 && *contribution_threshold <= 1.0)) {
    throw ConfigError("config: contribution_threshold must lie in (0, 1]");
  }
  if (institutions.empty() || anchor_multipliers.empty() || distribution_seeds.empty()) {
    throw ConfigError("config: institutions, anchor_multiplier and distribution_seeds need at least one value");
  }
  for (const double multiplier : anchor_multipliers) {
    if (!(multiplier > 0.0)) {
      throw ConfigError("config: anchor_multiplier values must be positive");
    }
  }
  if (!(holdout_ratio > 0.0 && holdout_ratio < 1.0)) {
    throw ConfigError("config: holdout_ratio must lie in (0, 1)");
  }
  const auto test_rows = static_cast<Index>(std::llround(holdout_ratio * static_cast<double>(rows_per_institution)));
  if (test_rows < 1 || rows_per_institution - test_rows < 2) {
    throw ConfigError("config: rows_per_institution = " + std::to_string(rows_per_institution) +
                      " leaves fewer than 1 test row or 2 training rows");
  }
  if (!(ridge_penalty > 0.0)) {
    throw ConfigError("config: ridge_penalty must be positive");
  }
  if (synthetic.classes < 2) {
    throw ConfigError("config: synthetic.classes must be at least 2");
  }
  if (!(synthetic.spread >= 0.0) || !(synthetic.separation >= 0.0)) {
    throw ConfigError("config: synthetic.spread and synthetic.separation must be nonnegative");
  }
  std::set<AnalysisMethod> seen;
  for (const AnalysisMethod method : methods) {
    if (!seen.insert(method).second) {
      throw ConfigError("config: method '" + method_key(method) + "' listed twice");
    }
  }
  std::set<std::uint64_t> seeds(distribution_seeds.begin(), distribution_seeds.end());
  if (seeds.size() != distribution_seeds.size()) {
    throw ConfigError("config: distribution_seeds contains duplicates");
  }
  if (timing_repeats < 1) {
    throw ConfigError("config: timing_repeats must be positive");
  }
}

KeyValues ExperimentConfig::echo() const {
  KeyValues out;
  out.emplace_back("dataset", dataset);
  out.emplace_back("label_column", label_column);
  if (dataset == "synthetic") {
    out.emplace_back("synthetic.classes", std::to_string(synthetic.classes));
    out.emplace_back("synthetic.dims", std::to_string(synthetic.dims));
    out.emplace_back("synthetic.rows", std::to_string(synthetic.rows));
    out.emplace_back("synthetic.spread", format_double(synthetic.spread));
    out.emplace_back("synthetic.separation", format_double(synthetic.separation));
    out.emplace_back("synthetic.seed", std::to_string(synthetic_spec().seed));
  }
  out.emplace_back("institutions",
                   join_mapped(institutions, [](Index v) { return std::to_string(v); }));
  out.emplace_back("rows_per_institution", std::to_string(rows_per_institution));
  out.emplace_back("anchor_multiplier",
                   join_mapped(anchor_multipliers, [](double v) { return format_double(v); }));
  if (contribution_threshold) {
    out.emplace_back("contribution_threshold", format_double(*contribution_threshold));
  } else {
    out.emplace_back("intermediate_dim", std::to_string(*intermediate_dim));
  }
  out.emplace_back("dim_rule", dim_scope == DimRuleScope::per_institution ? "per_institution"
                                                                           : "institution_one");
  out.emplace_back("collab_dim", collab_dim ? std::to_string(*collab_dim) : "auto");
  out.emplace_back("methods", join_mapped(methods, method_key));
  out.emplace_back("classifier", classifier == Classifier::ridge ? "ridge" : "centroid");
  out.emplace_back("ridge_penalty", format_double(ridge_penalty));
  out.emplace_back("distribution_seeds", join_mapped(distribution_seeds, [](std::uint64_t v) {
                     return std::to_string(v);
                   }));
  out.emplace_back("holdout_repetitions", std::to_string(holdout_repetitions));
  out.emplace_back("holdout_ratio", format_double(holdout_ratio));
  out.emplace_back("master_seed", std::to_string(master_seed));
  out.emplace_back("rsvd_oversample", std::to_string(rsvd_oversample));
  out.emplace_back("rsvd_power_iters", std::to_string(rsvd_power_iters));
  out.emplace_back("timing_repeats", std::to_string(timing_repeats));
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig config;
  bool threshold_set = false;
  bool dim_set = false;
  std::set<std::string> seen;

  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter, std::less<>> setters = {
      {"dataset", [&](const std::string&, const std::string& v) { config.dataset = v; }},
      {"label_column", [&](const std::string&, const std::string& v) { config.label_column = v; }},
      {"synthetic.classes",
       [&](const std::string& k, const std::string& v) {
         config.synthetic.classes = static_cast<int>(to_count(k, v));
       }},
      {"synthetic.dims",
       [&](const std::string& k, const std::string& v) { config.synthetic.dims = to_count(k, v); }},
      {"synthetic.rows",
       [&](const std::string& k, const std::string& v) { config.synthetic.rows = to_count(k, v); }},
      {"synthetic.spread",
       [&](const std::string& k, const std::string& v) { config.synthetic.spread = to_real(k, v); }},
      {"synthetic.separation",
       [&](const std::string& k, const std::string& v) {
         config.synthetic.separation = to_real(k, v);
       }},
      {"synthetic.seed",
       [&](const std::string& k, const std::string& v) {
         config.synthetic_seed = to_u64(k, v);
       }},
      {"institutions",
       [&](const std::string& k, const std::string& v) {
         config.institutions.clear();
         for (const std::string& item : split_list(v)) {
           config.institutions.push_back(to_count(k, item));
         }
       }},
      {"rows_per_institution",
       [&](const std::string& k, const std::string& v) {
         config.rows_per_institution = to_count(k, v);
       }},
      {"anchor_multiplier",
       [&](const std::string& k, const std::string& v) {
         config.anchor_multipliers.clear();
         for (const std::string& item : split_list(v)) {
           config.anchor_multipliers.push_back(to_real(k, item));
         }
       }},
      {"contribution_threshold",
       [&](const std::string& k, const std::string& v) {
         config.contribution_threshold = to_real(k, v);
         threshold_set = true;
       }},
      {"intermediate_dim",
       [&](const std::string& k, const std::string& v) {
         config.intermediate_dim = to_count(k, v);
         dim_set = true;
       }},
      {"dim_rule",
       [&](const std::string& k, const std::string& v) {
         if (v == "per_institution") {
           config.dim_scope = DimRuleScope::per_institution;
         } else if (v == "institution_one") {
           config.dim_scope = DimRuleScope::institution_one;
         } else {
           bad_value(k, v, "per_institution or institution_one");
         }
       }},
      {"collab_dim",
       [&](const std::string& k, const std::string& v) {
         if (v == "auto") {
           config.collab_dim.reset();
         } else {
           config.collab_dim = to_count(k, v);
         }
       }},
      {"methods",
       [&](const std::string& k, const std::string& v) {
         config.methods.clear();
         for (const std::string& item : split_list(v)) {
           const auto method = parse_method(item);
           if (!method) {
             bad_value(k, item, "a known analysis method");
           }
           config.methods.push_back(*method);
         }
       }},
      {"classifier",
       [&](const std::string& k, const std::string& v) {
         if (v == "ridge") {
           config.classifier = Classifier::ridge;
         } else if (v == "centroid") {
           config.classifier = Classifier::centroid;
         } else {
           bad_value(k, v, "ridge or centroid");
         }
       }},
      {"ridge_penalty",
       [&](const std::string& k, const std::string& v) { config.ridge_penalty = to_real(k, v); }},
      {"distribution_seeds",
       [&](const std::string& k, const std::string& v) {
         config.distribution_seeds.clear();
         for (const std::string& item : split_list(v)) {
           config.distribution_seeds.push_back(to_u64(k, item));
         }
       }},
      {"holdout_repetitions",
       [&](const std::string& k, const std::string& v) {
         config.holdout_repetitions = to_count(k, v);
       }},
      {"holdout_ratio",
       [&](const std::string& k, const std::string& v) { config.holdout_ratio = to_real(k, v); }},
      {"master_seed",
       [&](const std::string& k, const std::string& v) { config.master_seed = to_u64(k, v); }},
      {"rsvd_oversample",
       [&](const std::string& k, const std::string& v) {
         config.rsvd_oversample = static_cast<Index>(to_u64(k, v));
       }},
      {"rsvd_power_iters",
       [&](const std::string& k, const std::string& v) {
         config.rsvd_power_iters = static_cast<int>(to_u64(k, v));
       }},
      {"timing_repeats",
       [&](const std::string& k, const std::string& v) {
         config.timing_repeats = static_cast<int>(to_count(k, v));
       }},
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    const std::string content = trim(line);
    if (content.empty()) {
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(line_no) + ": key '" + key +
                        "' set twice");
    }
    it->second(key, value);
  }

  if (dim_set && !threshold_set) {
    config.contribution_threshold.reset();
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  ExperimentConfig config = parse_config(text);
  if (config.dataset != "synthetic") {
    const std::filesystem::path data_path(config.dataset);
    if (data_path.is_relative()) {
      config.dataset =
          (std::filesystem::path(path).parent_path() / data_path).lexically_normal().string();
    }
  }
  return config;
}

}  // namespace dca::harness
