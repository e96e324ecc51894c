#pragma once

#include <string>
#include <vector>

#include "fbt/panel.hpp"

namespace fbt {

/// Wide panel CSV: header `date,<ticker>,...`, one row per month, empty
/// cells mean missing. Dates must be contiguous ISO year-months; a gap,
/// duplicate ticker, or malformed cell raises std::runtime_error naming
/// the file and row.
Panel read_wide_csv(const std::string& path);
void write_wide_csv(const std::string& path, const Panel& p);

/// Two-column CSV `date,<name>`; same date rules as the wide form.
Series read_series_csv(const std::string& path, const std::string& value_column);
void write_series_csv(const std::string& path, const Series& s,
                      const std::string& value_column);

/// Deterministic shortest round-trip formatting used by every writer.
std::string format_double(double v);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace fbt
