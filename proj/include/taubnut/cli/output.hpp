#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace taubnut::cli {

/// "%.17g"; non-finite values print as nan/inf/-inf.
std::string format_number(double v);

/// Empty field when the value is absent.
std::string format_cell(const std::optional<double>& v);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::optional<double>> cells);
  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::optional<double>>>& rows() const noexcept { return rows_; }

  void write_csv(std::ostream& os) const;
  /// Array of objects keyed by column; missing values become null.
  std::string to_json() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::optional<double>>> rows_;
};

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of `name` in the header; throws BadParams when absent.
  std::size_t column(const std::string& name) const;
};

/// Reads a table written by CsvTable::write_csv. Throws BadParams on I/O failure or ragged rows.
CsvData read_csv(const std::string& path);

}  // namespace taubnut::cli
