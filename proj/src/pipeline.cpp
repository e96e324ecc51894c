#include "fbt/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fbt/report.hpp"
#include "fbt/synth.hpp"

namespace fbt {

namespace {

[[noreturn]] void stage_fail(const std::string& stage, const std::exception& e) {
  throw std::runtime_error("stage " + stage + ": " + e.what());
}

bool any_model_needs(const std::vector<CbmSpec>& models, const std::string& key) {
  for (const auto& m : models) {
    if (std::find(m.keys.begin(), m.keys.end(), key) != m.keys.end()) return true;
  }
  return false;
}

std::string file_safe(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
  {
    const auto diags = validate(config);
    for (const auto& d : diags) {
      if (d.severity == Diagnostic::Severity::Error) {
        throw std::runtime_error("config: " + d.message);
      }
    }
  }

  Dataset dataset;
  try {
    if (config.synth) {
      SynthSpec spec = *config.synth;
      spec.seed = config.seed;
      spec.policy = config.zscore;
      if (spec.universe_top_n == 0) spec.universe_top_n = config.universe.top_n;
      dataset = generate(spec).dataset;
    } else {
      DatasetPaths paths = DatasetPaths::in_dir(*config.data_dir);
      paths.overrides = config.overrides_csv;
      dataset = load_dataset(paths);
    }
  } catch (const std::exception& e) {
    stage_fail("ingest", e);
  }
  return run_pipeline_on(std::move(dataset), config);
}

namespace {
PipelineResult run_stages(Dataset dataset, const RunConfig& config, bool with_backtest);
}

PipelineResult run_pipeline_on(Dataset dataset, const RunConfig& config) {
  return run_stages(std::move(dataset), config, true);
}

namespace {

PipelineResult run_stages(Dataset dataset, const RunConfig& config, bool with_backtest) {
  PipelineResult res;
  res.dataset = std::move(dataset);

  try {
    res.mask = select_universe(res.dataset.characteristics.at("MV"), config.universe);
    res.returns_universe = apply_mask(res.dataset.returns, res.mask);
  } catch (const std::exception& e) {
    stage_fail("universe", e);
  }

  try {
    res.factors = build_factor_series(res.dataset, res.mask, config.sort);
    res.levels = factor_levels(res.factors);
  } catch (const std::exception& e) {
    stage_fail("factors", e);
  }

  try {
    CharacteristicSet masked;
    for (const auto& [key, panel] : res.dataset.characteristics.panels) {
      masked.panels[key] = apply_mask(panel, res.mask);
    }
    if (any_model_needs(config.cbm_models, "Mkt")) {
      masked.panels["Mkt"] = apply_mask(
          market_loading_panel(res.returns_universe, res.factors,
                               config.market_loading_window),
          res.mask);
    }
    res.cs_z = standardize(masked, config.zscore);
  } catch (const std::exception& e) {
    stage_fail("preprocess", e);
  }

  try {
    for (const auto& spec : config.apt_models) {
      AptRun run;
      run.spec = spec;
      run.fit = fit_apt(res.returns_universe, res.factors, spec);
      run.expected = predict_apt(run.fit, res.factors, spec.excess_returns);
      res.apt.push_back(std::move(run));
    }
    for (const auto& spec : config.cbm_models) {
      CbmRun run;
      run.spec = spec;
      run.fit = fit_cbm(res.returns_universe, res.cs_z, spec);
      run.smoothed = smooth_expectation(run.fit, spec.smoothing_window);
      run.expected = predict_cbm(run.smoothed, res.cs_z);
      res.table1.rows.push_back(table1_row(spec, run.fit));
      res.cbm.push_back(std::move(run));
    }
  } catch (const std::exception& e) {
    stage_fail("models", e);
  }

  if (with_backtest) {
    try {
      std::map<std::string, Panel> expected;
      for (const auto& run : res.apt) expected.emplace(run.spec.name, run.expected);
      for (const auto& run : res.cbm) expected.emplace(run.spec.name, run.expected);
      res.quintiles =
          run_backtest(expected, res.returns_universe, res.mask, config.backtest,
                       &res.dataset.characteristics.at("MV"));
    } catch (const std::exception& e) {
      stage_fail("backtest", e);
    }
  }

  return res;
}

}  // namespace

Table1 table1_suite(Dataset dataset, const UniverseSpec& universe,
                    const ZScorePolicy& policy, int smoothing_window) {
  RunConfig config;
  config.universe = universe;
  config.zscore = policy;
  config.smoothing_window = smoothing_window;
  config.cbm_models = table1_model_specs(smoothing_window);
  return run_stages(std::move(dataset), config, false).table1;
}

std::vector<std::string> run_and_write(const RunConfig& config) {
  namespace fs = std::filesystem;
  const PipelineResult res = run_pipeline(config);

  fs::create_directories(config.output_dir);
  std::vector<std::string> written;
  auto target = [&](const std::string& name) {
    written.push_back((fs::path(config.output_dir) / name).string());
    return written.back();
  };

  try {
    write_factors_csv(target("factors.csv"), res.factors);
    write_factor_levels_csv(target("factor_levels.csv"), res.levels);
    for (const auto& run : res.cbm) {
      write_payoffs_csv(target("payoffs_" + file_safe(run.spec.name) + ".csv"),
                        run.fit, run.smoothed);
    }
    write_table1_csv(target("table1.csv"), res.table1);
    write_quintiles_csv(target("quintiles.csv"), res.quintiles);
    write_quintile_returns_csv(target("quintile_returns.csv"), res.quintiles);
    write_quintile_fit_json(target("quintiles_fit.json"), res.quintiles);

    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = config.seed;
    manifest["config"] = config_to_json(config);
    const std::string manifest_path = target("run_manifest.json");
    std::ofstream out(manifest_path);
    if (!out) throw std::runtime_error(manifest_path + ": cannot open for writing");
    out << manifest.dump(2) << "\n";
    out.flush();
    if (!out) throw std::runtime_error(manifest_path + ": write failed");
  } catch (...) {
    for (const auto& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    throw;
  }
  return written;
}

}  // namespace fbt
