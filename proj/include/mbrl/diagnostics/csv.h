#ifndef MBRL_DIAGNOSTICS_CSV_H_
#define MBRL_DIAGNOSTICS_CSV_H_

#include <filesystem>
#include <string>
#include <vector>

#include "mbrl/core/types.h"

namespace mbrl::diagnostics {

// Numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix rows;
};

void WriteCsv(const CsvTable& table, const std::filesystem::path& path);
CsvTable ReadCsv(const std::filesystem::path& path);

}  // namespace mbrl::diagnostics

#endif  // MBRL_DIAGNOSTICS_CSV_H_
