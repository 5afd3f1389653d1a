#pragma once

#include <string>
#include <vector>

#include "pntk/experiments.hpp"

namespace pntk {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest decimal that round-trips to the same double; no locale.
std::string format_double(double value);

/// Parses a comma-separated list of decimals.
std::vector<double> parse_double_list(const std::string& text);

/// Fixed sweep schema: sweep_var,width,mean,std,mad,limit,n_samples.
std::string sweep_to_csv(const SweepResult& result);

std::string sha256_hex(const std::string& bytes);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

/// Rows of decimals; blank lines are skipped, a non-numeric first row is
/// treated as a header.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path);

}  // namespace pntk
