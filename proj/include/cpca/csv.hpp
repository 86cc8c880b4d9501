#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpca/linalg.hpp"

namespace cpca {

/// Comma-separated reals, one point per row. Blank lines and lines starting
/// with '#' are skipped; `header` drops the first non-comment line.
struct CsvOptions {
  bool header = false;
};

/// Pulls one point at a time from a CSV stream, checking that every row has
/// the same number of cells. Errors name the 1-based line number.
class CsvRowReader {
 public:
  CsvRowReader(std::istream& in, CsvOptions options, std::string source = "<input>");

  /// Fills `row` and returns true, or returns false at end of input.
  bool next(std::vector<double>& row);

  /// Column count fixed by the first row (or by expect_columns).
  std::optional<std::size_t> columns() const { return columns_; }
  void expect_columns(std::size_t n) { columns_ = n; }

 private:
  std::istream& in_;
  CsvOptions options_;
  std::string source_;
  std::size_t line_ = 0;
  bool header_pending_;
  std::optional<std::size_t> columns_;
};

PointSet read_csv(std::istream& in, const CsvOptions& options = {},
                  const std::string& source = "<input>");
PointSet read_csv_file(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes with max_digits10 so a read back is exact.
void write_csv(std::ostream& out, const PointSet& points);

/// Writes to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

}  // namespace cpca
