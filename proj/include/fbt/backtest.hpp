#pragma once

#include <map>
#include <string>
#include <vector>

#include "fbt/factors.hpp"
#include "fbt/panel.hpp"
#include "fbt/universe.hpp"

namespace fbt {

/// Extra-slot bin sizes for N names over Q bins: base floor(N/Q) plus the
/// remainder distributed symmetrically about the middle bin (odd Q) or the
/// middle pair (even Q), middle-out. For even Q an odd remainder cannot be
/// placed symmetrically; the unpairable slot goes to the lower middle bin.
std::vector<int> symmetric_bin_sizes(int n, int q);

/// Per-stock bin in 1..Q, or 0 when the value is missing. Bin 1 takes the
/// highest values; ties break by ticker ascending.
VectorXi symmetric_quantile(const VectorXd& values, const BoolVec& present,
                            const std::vector<StockId>& stocks, int q);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Realized behaviour of one model's quantile portfolios.
struct QuintileStats {
  std::string model;
  std::vector<Series> bin_log_returns;     // one per bin
  std::vector<double> ann_return_pct;      // 12 * mean monthly log return
  std::vector<double> ann_vol_pct;         // sqrt(12) * std of monthly log return
  std::vector<int> months;                 // non-empty months per bin
  LineFit return_line;                     // ann return vs bin index
  LineFit vol_line;                        // ann vol vs bin index
};

struct BacktestSpec {
  int quantiles = 5;
  Weighting weighting = Weighting::EqualWeighted;
};

/// Monthly quantile formation on expected returns inside the universe,
/// realized with that month's returns. Cap weighting, when selected, uses
/// MV at t-1 and needs the `mv` panel. Throws when a model never produces
/// a usable prediction month, naming the model.
std::map<std::string, QuintileStats> run_backtest(
    const std::map<std::string, Panel>& expected, const Panel& realized,
    const UniverseMask& mask, const BacktestSpec& spec, const Panel* mv = nullptr);

/// Per-date bin assignments for one expected-return panel (0 = unassigned).
/// Exposed for look-ahead and audit tests.
Eigen::MatrixXi quantile_assignments(const Panel& expected, const UniverseMask& mask,
                                     int q);

}  // namespace fbt
