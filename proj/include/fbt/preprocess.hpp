#pragma once

#include "fbt/panel.hpp"

namespace fbt {

struct ZScorePolicy {
  double winsor_sigma = 3.0;
  int min_count = 10;  // minimum valid observations per monthly cross-section
};

/// Per-month clip to mean +/- winsor_sigma standard deviations. Mean and
/// sample std come from the original row in a single pass; rows with fewer
/// than min_count valid cells become all-missing.
Panel winsorize_cross_section(const Panel& p, const ZScorePolicy& policy);

/// Per-month (x - mean) / sample std. A zero-spread row maps to all-zero
/// scores; missing propagates.
Panel zscore_cross_section(const Panel& p, const ZScorePolicy& policy);

/// Winsorize then z-score every panel in the set, in that order.
CharacteristicSet standardize(const CharacteristicSet& cs, const ZScorePolicy& policy);

}  // namespace fbt
