#pragma once

#include "fbt/ingest.hpp"
#include "fbt/panel.hpp"
#include "fbt/universe.hpp"

namespace fbt {

enum class Weighting { CapWeighted, EqualWeighted };

struct SortSpec {
  double size_breakpoint = 50.0;        // percentile of MV splitting S from B
  double value_breakpoint_low = 30.0;   // BTP percentile below which L
  double value_breakpoint_high = 70.0;  // BTP percentile above which H
  Weighting weighting = Weighting::CapWeighted;
};

/// The six size x value intersection portfolios, as monthly simple returns.
/// An empty intersection leaves that month missing.
struct SixPortfolios {
  Series hs, ms, ls, hb, mb, lb;
};

/// Monthly factor returns. mkt and rfr are log returns; smb and hml are
/// spread simple returns (spreads of log returns are not portfolio returns).
struct FactorSeries {
  Series mkt, rfr, smb, hml;
};

/// Cumulative gross levels for charting, compounding (1 + simple return)
/// from 1.0 and carrying flat over missing months.
struct FactorLevels {
  Series mkt, rfr, smb, hml;
};

/// Linear-interpolation percentile of the sorted values, pct in [0, 100].
double percentile(std::vector<double> values, double pct);

/// Double sort inside the monthly universe. A stock participates only when
/// its BTP, MV and return are all present that month (listwise). Cap
/// weights use the same month's (quarter-lagged) MV, i.e. the size-sort
/// variable itself.
SixPortfolios six_portfolios(const Panel& returns, const Panel& btp, const Panel& mv,
                             const UniverseMask& mask, const SortSpec& spec);

/// (1/3)((HS+MS+LS) - (HB+MB+LB)); missing if any component is.
Series smb(const SixPortfolios& six);

/// (1/2)((HB+HS) - (LB+LS)); missing if any component is.
Series hml(const SixPortfolios& six);

FactorSeries build_factor_series(const Dataset& data, const UniverseMask& mask,
                                 const SortSpec& spec);

FactorLevels factor_levels(const FactorSeries& fs);

}  // namespace fbt
