#include "fbt/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fbt {

namespace {

[[noreturn]] void fail(const std::string& path, size_t row, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(row) + ": " + what);
}

double parse_cell(const std::string& path, size_t row, const std::string& cell) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    fail(path, row, "malformed number '" + cell + "'");
  }
  return v;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

Panel read_wide_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");

  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "date") {
    fail(path, 1, "first header column must be 'date'");
  }

  std::vector<StockId> stocks;
  std::set<std::string> seen;
  for (size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) fail(path, 1, "empty ticker in header");
    if (!seen.insert(header[c]).second) {
      fail(path, 1, "duplicate ticker '" + header[c] + "'");
    }
    stocks.push_back(StockId{header[c]});
  }

  std::vector<MonthStamp> dates;
  std::vector<std::vector<std::string>> grid;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      fail(path, row, "expected " + std::to_string(header.size()) + " cells, got " +
                          std::to_string(cells.size()));
    }
    MonthStamp m{};
    try {
      m = MonthStamp::parse(cells[0]);
    } catch (const std::exception& e) {
      fail(path, row, e.what());
    }
    if (!dates.empty()) {
      if (m.index <= dates.back().index) {
        fail(path, row, "dates not strictly increasing at " + m.str());
      }
      if (m.index != dates.back().index + 1) {
        fail(path, row, "calendar gap between " + dates.back().str() + " and " + m.str());
      }
    }
    dates.push_back(m);
    grid.emplace_back(cells.begin() + 1, cells.end());
  }
  if (dates.empty()) fail(path, row, "no data rows");

  Panel p(dates.front(), stocks, static_cast<Index>(dates.size()));
  for (size_t r = 0; r < grid.size(); ++r) {
    for (size_t c = 0; c < grid[r].size(); ++c) {
      if (grid[r][c].empty()) continue;
      p.set(static_cast<Index>(r), static_cast<Index>(c),
            parse_cell(path, r + 2, grid[r][c]));
    }
  }
  return p;
}

void write_wide_csv(const std::string& path, const Panel& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "date";
  for (const StockId& id : p.stocks()) out << "," << id.ticker;
  out << "\n";
  for (Index r = 0; r < p.rows(); ++r) {
    out << p.date(r).str();
    for (Index c = 0; c < p.cols(); ++c) {
      out << ",";
      if (p.has(r, c)) out << format_double(p.value(r, c));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

Series read_series_csv(const std::string& path, const std::string& value_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");

  std::string line;
  if (!std::getline(in, line)) fail(path, 1, "empty file");
  auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "date" || header[1] != value_column) {
    fail(path, 1, "expected header 'date," + value_column + "'");
  }

  std::vector<MonthStamp> dates;
  std::vector<std::string> cells_raw;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 2) fail(path, row, "expected 2 cells");
    MonthStamp m{};
    try {
      m = MonthStamp::parse(cells[0]);
    } catch (const std::exception& e) {
      fail(path, row, e.what());
    }
    if (!dates.empty()) {
      if (m.index <= dates.back().index) {
        fail(path, row, "dates not strictly increasing at " + m.str());
      }
      if (m.index != dates.back().index + 1) {
        fail(path, row, "calendar gap between " + dates.back().str() + " and " + m.str());
      }
    }
    dates.push_back(m);
    cells_raw.push_back(cells[1]);
  }
  if (dates.empty()) fail(path, row, "no data rows");

  Series s(dates.front(), static_cast<Index>(dates.size()));
  for (size_t r = 0; r < cells_raw.size(); ++r) {
    if (cells_raw[r].empty()) continue;
    s.set(static_cast<Index>(r), parse_cell(path, r + 2, cells_raw[r]));
  }
  return s;
}

void write_series_csv(const std::string& path, const Series& s,
                      const std::string& value_column) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "date," << value_column << "\n";
  for (Index r = 0; r < s.size(); ++r) {
    out << s.date(r).str() << ",";
    if (s.has(r)) out << format_double(s.value(r));
    out << "\n";
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace fbt
