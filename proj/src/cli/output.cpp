#include "taubnut/cli/output.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "taubnut/errors.hpp"

namespace taubnut::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::optional<double>> cells) {
  if (cells.size() != header_.size()) throw BadParams("CsvTable: row width does not match header");
  rows_.push_back(std::move(cells));
}

void CsvTable::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << header_[i];
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_cell(row[i]);
    os << '\n';
  }
}

std::string CsvTable::to_json() const {
  // Values go through format_number so JSON and CSV agree digit for digit.
  std::string out = "[";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    out += r ? ",\n {" : "\n {";
    for (std::size_t i = 0; i < header_.size(); ++i) {
      out += (i ? ", " : "") + nlohmann::json(header_[i]).dump() + ": ";
      const auto& v = rows_[r][i];
      out += v && std::isfinite(*v) ? format_number(*v) : "null";
    }
    out += "}";
  }
  out += rows_.empty() ? "]" : "\n]";
  return out;
}

std::size_t CsvData::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw BadParams("CSV has no column '" + name + "'");
}

CsvData read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadParams("cannot open '" + path + "'");
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvData data;
  std::string line;
  if (!std::getline(in, line)) throw BadParams("'" + path + "' is empty");
  data.header = split(line);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != data.header.size()) throw BadParams("ragged row in '" + path + "'");
    data.rows.push_back(std::move(cells));
  }
  return data;
}

}  // namespace taubnut::cli
