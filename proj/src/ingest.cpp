#include "fbt/ingest.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fbt/csv.hpp"

namespace fbt {

DatasetPaths DatasetPaths::in_dir(const std::string& dir) {
  DatasetPaths p;
  p.tri = dir + "/tri.csv";
  p.btp = dir + "/btp.csv";
  p.mv = dir + "/mv.csv";
  p.dy = dir + "/dy.csv";
  p.ey = dir + "/ey.csv";
  p.vol = dir + "/vol.csv";
  p.ncd = dir + "/ncd.csv";
  return p;
}

Panel log_returns(const Panel& tri) {
  Panel out(tri.start(), tri.stocks(), tri.rows());
  for (Index c = 0; c < tri.cols(); ++c) {
    for (Index r = 1; r < tri.rows(); ++r) {
      if (!tri.has(r, c) || !tri.has(r - 1, c)) continue;
      const double now = tri.value(r, c);
      const double prev = tri.value(r - 1, c);
      if (now <= 0.0 || prev <= 0.0) continue;  // zero-valued levels are missing
      out.set(r, c, std::log(now / prev));
    }
  }
  return out;
}

Panel momentum(const Panel& returns, int window, int skip) {
  if (window < 1) throw std::invalid_argument("momentum window must be >= 1");
  if (skip < 0) throw std::invalid_argument("momentum skip must be >= 0");
  Panel out(returns.start(), returns.stocks(), returns.rows());
  for (Index c = 0; c < returns.cols(); ++c) {
    for (Index r = 0; r < returns.rows(); ++r) {
      if (r - skip - window < 0) continue;
      double sum = 0.0;
      bool complete = true;
      for (int k = skip + 1; k <= skip + window; ++k) {
        if (!returns.has(r - k, c)) {
          complete = false;
          break;
        }
        sum += returns.value(r - k, c);
      }
      if (complete) out.set(r, c, sum);
    }
  }
  return out;
}

NcdIndex ncd_index(const Series& yields) {
  NcdIndex out{Series(yields.start(), yields.size()),
               Series(yields.start(), yields.size())};
  double level = 1.0;
  for (Index r = 0; r < yields.size(); ++r) {
    if (r > 0 && yields.has(r - 1)) {
      const double y = yields.value(r - 1);
      const double ret = std::log(1.0 + y / 4.0) / 3.0;
      out.ret.set(r, ret);
      level *= std::exp(ret);
    }
    out.level.set(r, level);
  }
  return out;
}

OverrideFile read_override_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path + ":1: empty file");
  auto header = split_csv_line(line);
  if (header != std::vector<std::string>{"ticker", "field", "date", "value"}) {
    throw std::runtime_error(path + ":1: expected header 'ticker,field,date,value'");
  }

  OverrideFile out;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != 4) {
      throw std::runtime_error(path + ":" + std::to_string(row) + ": expected 4 cells");
    }
    OverrideEntry e;
    e.stock = StockId{cells[0]};
    e.field = cells[1];
    try {
      e.date = MonthStamp::parse(cells[2]);
      size_t used = 0;
      e.value = std::stod(cells[3], &used);
      if (used != cells[3].size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception& e2) {
      throw std::runtime_error(path + ":" + std::to_string(row) + ": " + e2.what());
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

namespace {

// Yields outside [0, 1) cannot be NACQ quotes; demote them to missing.
Series sanitize_yields(const Series& raw) {
  Series out(raw.start(), raw.size());
  for (Index r = 0; r < raw.size(); ++r) {
    if (raw.has(r) && raw.value(r) >= 0.0 && raw.value(r) < 1.0) {
      out.set(r, raw.value(r));
    }
  }
  return out;
}

// Index levels must be strictly positive; zero or negative prices are
// treated as missing before return computation.
Panel sanitize_levels(const Panel& raw) {
  Panel out(raw.start(), raw.stocks(), raw.rows());
  for (Index r = 0; r < raw.rows(); ++r) {
    for (Index c = 0; c < raw.cols(); ++c) {
      if (raw.has(r, c) && raw.value(r, c) > 0.0) out.set(r, c, raw.value(r, c));
    }
  }
  return out;
}

void apply_overrides(RawDataset& raw, const OverrideFile& overrides) {
  for (const OverrideEntry& e : overrides.entries) {
    Panel* target = nullptr;
    if (e.field == "btp") target = &raw.btp;
    else if (e.field == "mv") target = &raw.mv;
    else if (e.field == "dy") target = &raw.dy;
    else if (e.field == "ey") target = &raw.ey;
    else if (e.field == "vol") target = &raw.vol;
    if (!target) {
      throw std::runtime_error("override references unknown field '" + e.field + "'");
    }
    const Index c = target->col_of(e.stock);
    if (c < 0) {
      throw std::runtime_error("override references unknown ticker '" +
                               e.stock.ticker + "' for field " + e.field);
    }
    const Index r = target->row_of(e.date);
    if (r < 0) {
      throw std::runtime_error("override date " + e.date.str() +
                               " outside data range for ticker " + e.stock.ticker);
    }
    target->set(r, c, e.value);
  }
}

Series align_series_to(const Series& s, MonthStamp start, Index n_dates) {
  Series out(start, n_dates);
  for (Index r = 0; r < n_dates; ++r) {
    Index src = s.row_of(start + static_cast<int>(r));
    if (src >= 0 && s.has(src)) out.set(r, s.value(src));
  }
  return out;
}

}  // namespace

Dataset assemble_dataset(RawDataset raw, const OverrideFile* overrides) {
  if (overrides) apply_overrides(raw, *overrides);

  raw.tri = sanitize_levels(raw.tri);
  raw.ncd_yield = sanitize_yields(raw.ncd_yield);

  auto aligned = align({raw.tri, raw.btp, raw.mv, raw.dy, raw.ey, raw.vol});
  raw.tri = std::move(aligned[0]);
  raw.btp = std::move(aligned[1]);
  raw.mv = std::move(aligned[2]);
  raw.dy = std::move(aligned[3]);
  raw.ey = std::move(aligned[4]);
  raw.vol = std::move(aligned[5]);
  raw.ncd_yield = align_series_to(raw.ncd_yield, raw.tri.start(), raw.tri.rows());

  Dataset out;
  out.returns = log_returns(raw.tri);

  CharacteristicSet cs;
  cs.panels["BTP"] = lag(raw.btp, kFundamentalLagMonths);
  cs.panels["MV"] = lag(raw.mv, kFundamentalLagMonths);
  cs.panels["DY"] = lag(raw.dy, kFundamentalLagMonths);
  cs.panels["EY"] = lag(raw.ey, kFundamentalLagMonths);
  cs.panels["VOL"] = raw.vol;
  cs.panels["MOML"] = momentum(out.returns, 12, 1);
  cs.panels["MOMS"] = momentum(out.returns, 3, 1);
  validate_axes(cs);

  out.characteristics = std::move(cs);
  out.raw = std::move(raw);
  return out;
}

Dataset load_dataset(const DatasetPaths& paths) {
  RawDataset raw;
  raw.tri = read_wide_csv(paths.tri);
  raw.btp = read_wide_csv(paths.btp);
  raw.mv = read_wide_csv(paths.mv);
  raw.dy = read_wide_csv(paths.dy);
  raw.ey = read_wide_csv(paths.ey);
  raw.vol = read_wide_csv(paths.vol);
  raw.ncd_yield = read_series_csv(paths.ncd, "yield");

  if (paths.overrides) {
    OverrideFile ov = read_override_csv(*paths.overrides);
    return assemble_dataset(std::move(raw), &ov);
  }
  return assemble_dataset(std::move(raw), nullptr);
}

}  // namespace fbt
