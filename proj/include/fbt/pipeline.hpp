#pragma once

#include <map>
#include <string>
#include <vector>

#include "fbt/backtest.hpp"
#include "fbt/config.hpp"
#include "fbt/ingest.hpp"
#include "fbt/models.hpp"

namespace fbt {

inline constexpr const char* kVersion = "0.1.0";

struct AptRun {
  AptSpec spec;
  RollingFit fit;
  Panel expected;
};

struct CbmRun {
  CbmSpec spec;
  CbmFit fit;
  SmoothedCbm smoothed;
  Panel expected;
};

struct PipelineResult {
  Dataset dataset;
  UniverseMask mask;
  FactorSeries factors;
  FactorLevels levels;
  Panel returns_universe;
  CharacteristicSet cs_z;  // universe-masked, standardized, plus "Mkt"
  std::vector<AptRun> apt;
  std::vector<CbmRun> cbm;
  Table1 table1;
  std::map<std::string, QuintileStats> quintiles;
};

/// ingest -> universe -> factors -> preprocessing -> models -> backtest.
/// Any stage failure is rethrown with the stage name prefixed. The config
/// must already have passed validate(); run_pipeline checks and throws on
/// error diagnostics before doing any work.
PipelineResult run_pipeline(const RunConfig& config);

/// The post-ingest stages on an already-assembled dataset.
PipelineResult run_pipeline_on(Dataset dataset, const RunConfig& config);

/// Median payoffs of the 14-model reporting suite over the given universe.
Table1 table1_suite(Dataset dataset, const UniverseSpec& universe,
                    const ZScorePolicy& policy = {}, int smoothing_window = 12);

/// run_pipeline plus the report bundle under config.output_dir:
/// factors.csv, factor_levels.csv, payoffs_<model>.csv, table1.csv,
/// quintiles.csv, quintile_returns.csv, quintiles_fit.json,
/// run_manifest.json. Partially written bundles are removed on failure.
std::vector<std::string> run_and_write(const RunConfig& config);

}  // namespace fbt
