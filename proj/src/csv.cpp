#include "cpca/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <system_error>

#include "cpca/error.hpp"

namespace cpca {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

CsvRowReader::CsvRowReader(std::istream& in, CsvOptions options, std::string source)
    : in_(in), options_(options), source_(std::move(source)), header_pending_(options.header) {}

bool CsvRowReader::next(std::vector<double>& row) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (header_pending_) {
      header_pending_ = false;
      continue;
    }

    row.clear();
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = body.find(',', pos);
      const std::string cell =
          trim(body.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
      char* end = nullptr;
      errno = 0;
      const double value = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(value)) {
        throw DataError(source_ + ":" + std::to_string(line_) + ": non-numeric cell '" + cell +
                        "'");
      }
      row.push_back(value);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }

    if (!columns_) {
      columns_ = row.size();
    } else if (row.size() != *columns_) {
      throw DataError(source_ + ":" + std::to_string(line_) + ": expected " +
                      std::to_string(*columns_) + " values, found " + std::to_string(row.size()));
    }
    return true;
  }
  if (in_.bad()) throw IoError(source_ + ": read failed");
  return false;
}

PointSet read_csv(std::istream& in, const CsvOptions& options, const std::string& source) {
  CsvRowReader reader(in, options, source);
  std::vector<std::vector<double>> rows;
  std::vector<double> row;
  while (reader.next(row)) rows.push_back(row);
  if (rows.empty()) throw DataError(source + ": empty dataset");
  return PointSet::from_rows(rows);
}

PointSet read_csv_file(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv(in, options, path.string());
}

void write_csv(std::ostream& out, const PointSet& points) {
  const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
  const Eigen::MatrixXd& x = points.coords();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j > 0) out << ',';
      out << x(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer) {
  std::filesystem::path temp = path;
  temp += ".tmp";
  {
    std::ofstream out(temp, std::ios::trunc);
    if (!out) throw IoError("cannot write " + temp.string());
    writer(out);
    out.flush();
    if (!out) throw IoError("failed writing " + temp.string());
  }
  std::error_code ec;
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw IoError("cannot replace " + path.string());
  }
}

}  // namespace cpca
