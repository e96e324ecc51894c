#include "fbt/preprocess.hpp"

#include <cmath>
#include <stdexcept>

namespace fbt {

namespace {

struct RowStats {
  double mean = 0.0;
  double stdev = 0.0;  // sample (n-1)
  int count = 0;
};

RowStats row_stats(const Panel& p, Index r) {
  RowStats s;
  double sum = 0.0;
  for (Index c = 0; c < p.cols(); ++c) {
    if (p.has(r, c)) {
      sum += p.value(r, c);
      ++s.count;
    }
  }
  if (s.count == 0) return s;
  s.mean = sum / s.count;
  if (s.count >= 2) {
    double ss = 0.0;
    for (Index c = 0; c < p.cols(); ++c) {
      if (p.has(r, c)) {
        const double d = p.value(r, c) - s.mean;
        ss += d * d;
      }
    }
    s.stdev = std::sqrt(ss / (s.count - 1));
  }
  return s;
}

void check(const ZScorePolicy& policy) {
  if (policy.winsor_sigma <= 0.0) throw std::invalid_argument("winsor_sigma must be > 0");
  if (policy.min_count < 3) throw std::invalid_argument("min_count must be >= 3");
}

}  // namespace

Panel winsorize_cross_section(const Panel& p, const ZScorePolicy& policy) {
  check(policy);
  Panel out(p.start(), p.stocks(), p.rows());
  for (Index r = 0; r < p.rows(); ++r) {
    const RowStats s = row_stats(p, r);
    if (s.count < policy.min_count) continue;  // row stays all-missing
    const double lo = s.mean - policy.winsor_sigma * s.stdev;
    const double hi = s.mean + policy.winsor_sigma * s.stdev;
    for (Index c = 0; c < p.cols(); ++c) {
      if (!p.has(r, c)) continue;
      out.set(r, c, std::min(hi, std::max(lo, p.value(r, c))));
    }
  }
  return out;
}

Panel zscore_cross_section(const Panel& p, const ZScorePolicy& policy) {
  check(policy);
  Panel out(p.start(), p.stocks(), p.rows());
  for (Index r = 0; r < p.rows(); ++r) {
    const RowStats s = row_stats(p, r);
    if (s.count == 0) continue;
    for (Index c = 0; c < p.cols(); ++c) {
      if (!p.has(r, c)) continue;
      out.set(r, c, s.stdev > 0.0 ? (p.value(r, c) - s.mean) / s.stdev : 0.0);
    }
  }
  return out;
}

CharacteristicSet standardize(const CharacteristicSet& cs, const ZScorePolicy& policy) {
  CharacteristicSet out;
  for (const auto& [key, panel] : cs.panels) {
    out.panels[key] = zscore_cross_section(winsorize_cross_section(panel, policy), policy);
  }
  return out;
}

}  // namespace fbt
