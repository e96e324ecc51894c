#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbt/backtest.hpp"
#include "fbt/models.hpp"
#include "fbt/preprocess.hpp"
#include "fbt/synth.hpp"
#include "fbt/universe.hpp"

namespace fbt {

/// One declarative file drives a whole run; flags only override the config
/// path, output directory, and seed.
struct RunConfig {
  std::optional<std::string> data_dir;       // CSV dataset directory
  std::optional<std::string> overrides_csv;  // long-form override file
  std::optional<SynthSpec> synth;            // or generate the dataset

  UniverseSpec universe;
  SortSpec sort;
  ZScorePolicy zscore;

  std::vector<AptSpec> apt_models;  // default: CAPM and FF3
  std::vector<CbmSpec> cbm_models;  // default: the 14-model suite
  int smoothing_window = 12;
  int market_loading_window = kMarketLoadingWindow;

  BacktestSpec backtest;
  uint64_t seed = 42;
  std::string output_dir = "out";
};

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
};

RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& config);

SynthSpec synth_spec_from_json(const nlohmann::json& doc);

/// Static checks only: existence of inputs, model sanity, window-vs-history
/// comparisons. Never mutates state or touches outputs.
std::vector<Diagnostic> validate(const RunConfig& config);

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags) {
    if (d.severity == Diagnostic::Severity::Error) return true;
  }
  return false;
}

}  // namespace fbt
