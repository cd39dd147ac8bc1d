#pragma once

#include <string>
#include <string_view>

#include "dca/harness/experiment.hpp"

namespace dca::harness {

enum class Format { csv, jsonl };

/// CSV: '#'-prefixed preamble (schema version, mode, config echo, metadata),
/// a fixed header row, then one row per record followed by one row per
/// aggregate. JSON lines: a header object, then record and aggregate objects.
std::string format_results(const ExperimentResult& result, Format format);
void emit_results(const ExperimentResult& result, Format format, const std::string& path);

/// Inverse of format_results. Throws DataError on malformed input.
ExperimentResult parse_results(std::string_view text, Format format);

}  // namespace dca::harness
