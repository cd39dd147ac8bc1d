#include "dca/harness/results.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "dca/errors.hpp"
#include "dca/harness/csv.hpp"

namespace dca::harness {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr const char* kColumns[] = {
    "kind",        "method",    "institutions", "anchor_rows",       "distribution_seed",
    "repetition",  "status",    "accuracy",     "build_ms",          "solve_ms",
    "estimate_ms", "intermediate_dims", "collab_dim", "metric",       "count",
    "mean",        "stddev",    "message"};
constexpr std::size_t kColumnCount = sizeof(kColumns) / sizeof(kColumns[0]);

std::string csv_number(double value) {
  return std::isnan(value) ? std::string() : format_double(value);
}

ordered_json json_number(double value) {
  return std::isnan(value) ? ordered_json(nullptr) : ordered_json(value);
}

double from_json_number(const ordered_json& value) {
  return value.is_null() ? kNaN : value.get<double>();
}

std::string join_dims(const std::vector<Index>& dims) {
  std::string out;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    out += (i ? ";" : "") + std::to_string(dims[i]);
  }
  return out;
}

std::vector<Index> split_dims(const std::string& text) {
  std::vector<Index> out;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    out.push_back(std::stoll(text.substr(start, end - start)));
    start = end + 1;
  }
  return out;
}

Mode parse_mode(const std::string& text) {
  if (text == "accuracy") {
    return Mode::accuracy;
  }
  if (text == "timing") {
    return Mode::timing;
  }
  throw DataError("results: unknown mode '" + text + "'");
}

double csv_to_number(const std::string& text) {
  if (text.empty()) {
    return kNaN;
  }
  double out = 0.0;
  if (!parse_double(text, out)) {
    throw DataError("results: bad number '" + text + "'");
  }
  return out;
}

std::string format_csv(const ExperimentResult& result) {
  std::string out;
  out += "# schema_version=" + std::to_string(result.schema_version) + "\n";
  out += "# mode=" + mode_name(result.mode) + "\n";
  for (const auto& [key, value] : result.config) {
    out += "# config." + key + "=" + value + "\n";
  }
  for (const auto& [key, value] : result.metadata) {
    out += "# meta." + key + "=" + value + "\n";
  }
  for (std::size_t c = 0; c < kColumnCount; ++c) {
    out += (c ? "," : "") + std::string(kColumns[c]);
  }
  out += '\n';

  for (const RunRecord& r : result.records) {
    const std::string fields[] = {"record",
                                  csv_escape(r.method),
                                  std::to_string(r.institutions),
                                  std::to_string(r.anchor_rows),
                                  std::to_string(r.distribution_seed),
                                  std::to_string(r.repetition),
                                  r.ok ? "ok" : "error",
                                  csv_number(r.accuracy),
                                  csv_number(r.build_ms),
                                  csv_number(r.solve_ms),
                                  csv_number(r.estimate_ms),
                                  join_dims(r.intermediate_dims),
                                  r.collab_dim ? std::to_string(r.collab_dim) : std::string(),
                                  "",
                                  "",
                                  "",
                                  "",
                                  csv_escape(r.message)};
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      out += (c ? "," : "") + fields[c];
    }
    out += '\n';
  }
  for (const Aggregate& a : result.aggregates) {
    const std::string fields[] = {"aggregate",
                                  csv_escape(a.method),
                                  std::to_string(a.institutions),
                                  std::to_string(a.anchor_rows),
                                  "", "", "", "", "", "", "", "", "",
                                  a.metric,
                                  std::to_string(a.count),
                                  csv_number(a.mean),
                                  csv_number(a.stddev),
                                  ""};
    for (std::size_t c = 0; c < kColumnCount; ++c) {
      out += (c ? "," : "") + fields[c];
    }
    out += '\n';
  }
  return out;
}

std::string format_jsonl(const ExperimentResult& result) {
  std::string out;
  ordered_json header;
  header["type"] = "header";
  header["schema_version"] = result.schema_version;
  header["mode"] = mode_name(result.mode);
  header["config"] = ordered_json::object();
  for (const auto& [key, value] : result.config) {
    header["config"][key] = value;
  }
  header["metadata"] = ordered_json::object();
  for (const auto& [key, value] : result.metadata) {
    header["metadata"][key] = value;
  }
  out += header.dump() + "\n";

  for (const RunRecord& r : result.records) {
    ordered_json line;
    line["type"] = "record";
    line["method"] = r.method;
    line["institutions"] = r.institutions;
    line["anchor_rows"] = r.anchor_rows;
    line["distribution_seed"] = r.distribution_seed;
    line["repetition"] = r.repetition;
    line["status"] = r.ok ? "ok" : "error";
    line["accuracy"] = json_number(r.accuracy);
    line["build_ms"] = json_number(r.build_ms);
    line["solve_ms"] = json_number(r.solve_ms);
    line["estimate_ms"] = json_number(r.estimate_ms);
    line["intermediate_dims"] = r.intermediate_dims;
    line["collab_dim"] = r.collab_dim;
    line["message"] = r.message;
    out += line.dump() + "\n";
  }
  for (const Aggregate& a : result.aggregates) {
    ordered_json line;
    line["type"] = "aggregate";
    line["method"] = a.method;
    line["institutions"] = a.institutions;
    line["anchor_rows"] = a.anchor_rows;
    line["metric"] = a.metric;
    line["count"] = a.count;
    line["mean"] = json_number(a.mean);
    line["stddev"] = json_number(a.stddev);
    out += line.dump() + "\n";
  }
  return out;
}

ExperimentResult parse_csv_results(std::string_view text) {
  ExperimentResult result;
  bool have_schema = false;
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.rfind("# ", 0) != 0) {
      throw DataError("results: malformed preamble line '" + line + "'");
    }
    line.erase(0, 2);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("results: malformed preamble line '" + line + "'");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "schema_version") {
      result.schema_version = std::stoi(value);
      have_schema = true;
    } else if (key == "mode") {
      result.mode = parse_mode(value);
    } else if (key.rfind("config.", 0) == 0) {
      result.config.emplace_back(key.substr(7), value);
    } else if (key.rfind("meta.", 0) == 0) {
      result.metadata.emplace_back(key.substr(5), value);
    } else {
      throw DataError("results: unknown preamble key '" + key + "'");
    }
  }
  if (!have_schema) {
    throw DataError("results: missing schema_version");
  }

  const std::vector<CsvRow> rows = parse_csv(text.substr(std::min(pos, text.size())));
  if (rows.empty() || rows.front().fields.size() != kColumnCount) {
    throw DataError("results: missing or malformed header row");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    if (f.size() != kColumnCount) {
      throw DataError("results: row " + std::to_string(i) + " has " + std::to_string(f.size()) +
                      " fields");
    }
    if (f[0] == "record") {
      RunRecord r;
      r.method = f[1];
      r.institutions = std::stoll(f[2]);
      r.anchor_rows = std::stoll(f[3]);
      r.distribution_seed = std::stoull(f[4]);
      r.repetition = std::stoll(f[5]);
      r.ok = f[6] == "ok";
      r.accuracy = csv_to_number(f[7]);
      r.build_ms = csv_to_number(f[8]);
      r.solve_ms = csv_to_number(f[9]);
      r.estimate_ms = csv_to_number(f[10]);
      r.intermediate_dims = split_dims(f[11]);
      r.collab_dim = f[12].empty() ? 0 : std::stoll(f[12]);
      r.message = f[17];
      result.records.push_back(std::move(r));
    } else if (f[0] == "aggregate") {
      Aggregate a;
      a.method = f[1];
      a.institutions = std::stoll(f[2]);
      a.anchor_rows = std::stoll(f[3]);
      a.metric = f[13];
      a.count = std::stoll(f[14]);
      a.mean = csv_to_number(f[15]);
      a.stddev = csv_to_number(f[16]);
      result.aggregates.push_back(std::move(a));
    } else {
      throw DataError("results: unknown row kind '" + f[0] + "'");
    }
  }
  return result;
}

ExperimentResult parse_jsonl_results(std::string_view text) {
  ExperimentResult result;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) {
      continue;
    }
    const ordered_json j = ordered_json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      result.schema_version = j.at("schema_version").get<int>();
      result.mode = parse_mode(j.at("mode").get<std::string>());
      for (const auto& [key, value] : j.at("config").items()) {
        result.config.emplace_back(key, value.get<std::string>());
      }
      for (const auto& [key, value] : j.at("metadata").items()) {
        result.metadata.emplace_back(key, value.get<std::string>());
      }
      have_header = true;
    } else if (type == "record") {
      RunRecord r;
      r.method = j.at("method").get<std::string>();
      r.institutions = j.at("institutions").get<Index>();
      r.anchor_rows = j.at("anchor_rows").get<Index>();
      r.distribution_seed = j.at("distribution_seed").get<std::uint64_t>();
      r.repetition = j.at("repetition").get<Index>();
      r.ok = j.at("status").get<std::string>() == "ok";
      r.accuracy = from_json_number(j.at("accuracy"));
      r.build_ms = from_json_number(j.at("build_ms"));
      r.solve_ms = from_json_number(j.at("solve_ms"));
      r.estimate_ms = from_json_number(j.at("estimate_ms"));
      r.intermediate_dims = j.at("intermediate_dims").get<std::vector<Index>>();
      r.collab_dim = j.at("collab_dim").get<Index>();
      r.message = j.at("message").get<std::string>();
      result.records.push_back(std::move(r));
    } else if (type == "aggregate") {
      Aggregate a;
      a.method = j.at("method").get<std::string>();
      a.institutions = j.at("institutions").get<Index>();
      a.anchor_rows = j.at("anchor_rows").get<Index>();
      a.metric = j.at("metric").get<std::string>();
      a.count = j.at("count").get<Index>();
      a.mean = from_json_number(j.at("mean"));
      a.stddev = from_json_number(j.at("stddev"));
      result.aggregates.push_back(std::move(a));
    } else {
      throw DataError("results: unknown line type '" + type + "'");
    }
  }
  if (!have_header) {
    throw DataError("results: missing header line");
  }
  return result;
}

}  // namespace

std::string format_results(const ExperimentResult& result, Format format) {
  return format == Format::csv ? format_csv(result) : format_jsonl(result);
}

void emit_results(const ExperimentResult& result, Format format, const std::string& path) {
  write_file(path, format_results(result, format));
}

ExperimentResult parse_results(std::string_view text, Format format) {
  try {
    return format == Format::csv ? parse_csv_results(text) : parse_jsonl_results(text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("results: ") + e.what());
  } catch (const std::logic_error& e) {
    throw DataError(std::string("results: ") + e.what());
  }
}

}  // namespace dca::harness
