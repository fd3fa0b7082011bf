#pragma once

#include "collapse/harness/experiment.hpp"

#include <string>

namespace collapse::harness {

inline constexpr int kFormatVersion = 1;

std::string version_string();

/// Shortest round-trip decimal form; identical on every run.
std::string format_number(double v);

/// Structured document: version stamp, unit conversion block, config echo,
/// ensemble summary and per-trajectory records.
std::string serialize_tree(const ExperimentResult& result);

/// Comma-separated long-format observable series, one row per
/// (trajectory, sample time), preceded by '#' lines with the unit block.
std::string serialize_table(const ExperimentResult& result);

std::string serialize(const ExperimentResult& result, OutputFormat format);

/// Unit conversion block (CGS values of hbar, m0, r_C and derived scales).
nlohmann::json units_block();

}  // namespace collapse::harness
