#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tme {

/// Shortest-safe decimal form with 17 significant digits; parses back to
/// the identical double.
std::string format_double(double value);

/// Strict parse of a full token; throws std::runtime_error on trailing
/// garbage or an empty token.
double parse_double(std::string_view token);
long long parse_integer(std::string_view token);

/// Numeric CSV table with a single header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Writes `header` then each row with format_double. Throws
/// std::runtime_error when the file cannot be written.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace tme
