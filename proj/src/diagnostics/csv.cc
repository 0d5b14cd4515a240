#include "mbrl/diagnostics/csv.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mbrl/core/number_format.h"

namespace mbrl::diagnostics {
namespace {

std::vector<std::string> SplitLine(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

void WriteCsv(const CsvTable& table, const std::filesystem::path& path) {
  if (static_cast<std::size_t>(table.rows.cols()) != table.header.size()) {
    throw std::invalid_argument("WriteCsv: header/column count mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < table.rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.rows.cols(); ++c) {
      out << (c ? "," : "") << FormatDouble(table.rows(r, c));
    }
    out << '\n';
  }
}

CsvTable ReadCsv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty");
  t.header = SplitLine(line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = SplitLine(line);
    if (cells.size() != t.header.size()) {
      throw std::runtime_error(path.string() + ": row has " +
                               std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(t.header.size()));
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(ParseDouble(c));
    rows.push_back(std::move(row));
  }
  t.rows.resize(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(t.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      t.rows(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return t;
}

}  // namespace mbrl::diagnostics
