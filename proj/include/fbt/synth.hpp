#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbt/ingest.hpp"
#include "fbt/panel.hpp"
#include "fbt/preprocess.hpp"

namespace fbt {

enum class SynthMode { CbmPlanted, AptPlanted, Null };

/// delta(t) = constant + amplitude * sin(2*pi*t / period_months), t counted
/// from the sample start.
struct PayoffShape {
  double constant = 0.0;
  double amplitude = 0.0;
  double period_months = 60.0;

  double at(int t) const;
};

struct FactorPathSpec {
  double mean = 0.0;
  double sigma = 0.06;
};

struct SynthSpec {
  int n_stocks = 100;
  int n_months = 120;
  uint64_t seed = 1;
  SynthMode mode = SynthMode::Null;
  MonthStamp start = MonthStamp{1994 * 12};  // 1994-01

  /// cbm mode: payoff paths per characteristic. Only directly generated
  /// characteristics (BTP, MV, DY, EY, VOL) can carry a planted payoff;
  /// the momentum keys are derived from returns and are rejected.
  std::map<std::string, PayoffShape> payoffs;
  PayoffShape alpha;  // cross-section intercept path (cbm mode)

  /// apt mode: per-stock loadings drawn uniformly from [beta_lo, beta_hi]
  /// for each factor, returns generated from the recorded factor paths.
  double beta_lo = -0.5;
  double beta_hi = 1.5;
  FactorPathSpec mkt{0.008, 0.07};
  FactorPathSpec smb{0.002, 0.07};
  FactorPathSpec hml{0.002, 0.07};
  double apt_alpha_sigma = 0.0;

  /// cbm mode only: additionally expose every stock to a common market
  /// path through a planted per-stock beta in [beta_lo, beta_hi]. Off by
  /// default because it makes the cross-section noiseless only
  /// conditionally on the market draw (noiseless recovery tests rely on
  /// the plain mode).
  bool market_overlay = false;

  double noise_sigma = 0.02;   // monthly idiosyncratic return noise
  double char_rho = 0.95;      // AR(1) persistence of characteristics
  double missing_rate = 0.0;   // iid missing probability per raw cell
  double size_premium = 0.0;   // monthly return boost for below-median MV
  double ncd_yield = 0.08;     // constant quoted NACQ yield

  /// Universe used when planting through the standardizer; 0 means all
  /// stocks. Must match the universe the estimation run will use for the
  /// planted relation to hold exactly.
  int universe_top_n = 0;
  ZScorePolicy policy;
};

struct GroundTruth {
  // cbm mode
  std::vector<std::string> payoff_keys;
  MatrixXd delta;  // months x keys, monthly return per z-unit
  VectorXd alpha;  // months

  // apt mode
  std::vector<std::string> factor_keys;  // mkt, smb, hml
  MatrixXd factor_paths;                 // months x keys
  VectorXd stock_alpha;                  // per stock
  MatrixXd stock_beta;                   // stocks x keys
  Series rfr;                            // cash log return, complete
};

struct SynthResult {
  Dataset dataset;  // exactly what load_dataset would produce
  GroundTruth truth;
};

/// Deterministic generation from the seed (fixed xoshiro256++ draw order,
/// independent of platform). In cbm mode returns are built from the same
/// masked, quarter-lagged, winsorized, z-scored characteristic values the
/// estimation pipeline will see, so noiseless recovery is exact.
SynthResult generate(const SynthSpec& spec);

/// Raw panels in the ingest CSV formats; load_dataset on the directory
/// reproduces the generated dataset bit for bit.
void write_dataset_csvs(const RawDataset& raw, const std::string& dir);

}  // namespace fbt
