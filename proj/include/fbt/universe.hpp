#pragma once

#include "fbt/panel.hpp"

namespace fbt {

struct UniverseSpec {
  int top_n = 250;
};

/// Monthly membership grid on the same axes as the defining MV panel.
struct UniverseMask {
  MonthStamp start{};
  std::vector<StockId> stocks;
  BoolGrid member;  // dates x stocks

  Index rows() const { return member.rows(); }
  Index cols() const { return member.cols(); }
  MonthStamp date(Index r) const { return start + static_cast<int>(r); }
  Index row_of(MonthStamp m) const {
    int r = m - start;
    return (r < 0 || r >= rows()) ? -1 : r;
  }
};

/// Largest top_n stocks each month by market value (already quarter-lagged),
/// ties broken by ticker ascending. Months with fewer valid stocks keep
/// all of them.
UniverseMask select_universe(const Panel& mv, const UniverseSpec& spec);

/// Synthetic cap-weighted market index over mask members, rebalanced
/// monthly with weights proportional to MV at t-1. Member log returns are
/// converted to simple returns for aggregation; the result is the log of
/// the gross portfolio return. Months with no weighted member are missing.
Series market_index(const Panel& returns, const Panel& mv, const UniverseMask& mask);

/// Missing out every cell outside the universe that month.
Panel apply_mask(const Panel& p, const UniverseMask& mask);

}  // namespace fbt
