#include "fracrd/csv.hpp"

#include <cstdio>
#include <fstream>

#include "fracrd/errors.hpp"

namespace fracrd {

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::filesystem::path path, const std::vector<std::string>& header)
    : path_(std::move(path)), n_columns_(header.size()) {
  for (size_t i = 0; i < header.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += header[i];
  }
  buffer_ += '\n';
}

void CsvWriter::row(std::span<const double> values) {
  if (values.size() != n_columns_) throw PreconditionError("csv row width mismatch");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) buffer_ += ',';
    buffer_ += format_full(values[i]);
  }
  buffer_ += '\n';
}

void CsvWriter::labeled_row(const std::string& label, std::span<const double> values) {
  if (values.size() + 1 != n_columns_) throw PreconditionError("csv row width mismatch");
  buffer_ += label;
  for (double v : values) {
    buffer_ += ',';
    buffer_ += format_full(v);
  }
  buffer_ += '\n';
}

void CsvWriter::commit() {
  if (committed_) return;
  std::filesystem::create_directories(path_.parent_path());
  std::filesystem::path tmp = path_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + tmp.string());
    out << buffer_;
  }
  std::filesystem::rename(tmp, path_);
  committed_ = true;
}

}  // namespace fracrd
