#pragma once

// Locale-independent numeric formatting and small file helpers. Result CSVs
// use shortest round-trip formatting; trace CSVs use fixed 9-significant-digit
// scientific notation for golden-file comparisons.

#include <string>
#include <vector>

#include "donn/transient.hpp"

namespace donn {

/// Shortest round-trip decimal representation (std::to_chars).
std::string fmt_shortest(double x);

/// Scientific notation with 9 significant digits, e.g. "1.00064000e-06".
std::string fmt_sci9(double x);

void ensure_dir(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// `time,<node-names...>` in seconds/volts, fmt_sci9 fields.
void write_trace_csv(const Trace& trace, const std::string& path);

/// Row-major matrix, n columns per line, fmt_shortest fields.
void write_matrix_csv(const std::vector<double>& values, int n, const std::string& path);

/// Minimal CSV splitter for our own files (no quoting in the schema).
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace donn
