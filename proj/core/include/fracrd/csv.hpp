#pragma once

#include <filesystem>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace fracrd {

/// Shortest round-trip-exact decimal form (17 significant digits).
std::string format_full(double v);

/// Buffered CSV writer. Nothing touches the target path until commit(),
/// which writes a temporary file and renames it into place.
class CsvWriter {
 public:
  CsvWriter(std::filesystem::path path, const std::vector<std::string>& header);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) {
    row(std::span<const double>(values.begin(), values.size()));
  }
  /// Mixed row: a leading label column followed by numeric columns.
  void labeled_row(const std::string& label, std::span<const double> values);

  void commit();

 private:
  std::filesystem::path path_;
  std::string buffer_;
  size_t n_columns_;
  bool committed_ = false;
};

}  // namespace fracrd
