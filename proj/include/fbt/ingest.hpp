#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fbt/panel.hpp"

namespace fbt {

/// Raw monthly inputs as loaded (post-override, pre-lag). tri holds total
/// return index levels; ncd_yield holds quoted nominal annual yields
/// compounded quarterly, as fractions.
struct RawDataset {
  Panel tri;
  Panel btp;
  Panel mv;
  Panel dy;
  Panel ey;
  Panel vol;
  Series ncd_yield;
};

struct OverrideEntry {
  StockId stock;
  std::string field;  // btp | mv | dy | ey | vol
  MonthStamp date;
  double value = 0.0;
};

/// Long-form substitutions for stocks whose fundamentals come from a
/// primary listing elsewhere. Values are supplied pre-converted.
struct OverrideFile {
  std::vector<OverrideEntry> entries;
};

/// The assembled inputs every model consumes: aligned raw data, the
/// characteristic panels (fundamentals quarter-lagged, momentum derived),
/// and the log-return panel.
struct Dataset {
  RawDataset raw;
  CharacteristicSet characteristics;
  Panel returns;
};

struct DatasetPaths {
  std::string tri, btp, mv, dy, ey, vol, ncd;
  std::optional<std::string> overrides;

  /// Conventional file names under one directory.
  static DatasetPaths in_dir(const std::string& dir);
};

/// ln(level_t / level_{t-1}) where both levels are present and positive;
/// anything else (including zero-valued levels) is missing.
Panel log_returns(const Panel& tri);

/// Trailing sum of returns over `window` months ending `skip+1` months ago:
///   out(t) = sum of returns at t-skip-1 .. t-skip-window.
/// Missing if any summand is missing or out of range.
Panel momentum(const Panel& returns, int window, int skip);

struct NcdIndex {
  Series level;  // compounds from 1.0, carried flat over missing months
  Series ret;    // monthly log returns
};

/// Cash index from quoted NACQ discount yields. A 3-month NCD bought at
/// last month's quote accrues ln(1 + y/4) over the quarter; one third of
/// that is booked per month:  r_t = ln(1 + y_{t-1}/4) / 3.
NcdIndex ncd_index(const Series& yields);

OverrideFile read_override_csv(const std::string& path);

/// Full ingest on already-parsed raw panels: overrides, axis alignment,
/// quarter lag on fundamentals, returns and momentum characteristics.
Dataset assemble_dataset(RawDataset raw, const OverrideFile* overrides);

/// CSV-backed ingest per DatasetPaths.
Dataset load_dataset(const DatasetPaths& paths);

/// Months of lag applied to fundamental panels (reported quarterly, one
/// quarter late).
inline constexpr int kFundamentalLagMonths = 3;

}  // namespace fbt
