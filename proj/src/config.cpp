#include "fbt/config.hpp"

#include <filesystem>
#include <fstream>

namespace fbt {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) {
  throw std::runtime_error("config: " + what);
}

Weighting weighting_from_string(const std::string& s) {
  if (s == "cap" || s == "cap-weighted") return Weighting::CapWeighted;
  if (s == "equal" || s == "equal-weighted") return Weighting::EqualWeighted;
  bad("unknown weighting '" + s + "' (want cap|equal)");
}

std::string weighting_to_string(Weighting w) {
  return w == Weighting::CapWeighted ? "cap" : "equal";
}

SynthMode mode_from_string(const std::string& s) {
  if (s == "cbm") return SynthMode::CbmPlanted;
  if (s == "apt") return SynthMode::AptPlanted;
  if (s == "null") return SynthMode::Null;
  bad("unknown synth mode '" + s + "' (want cbm|apt|null)");
}

std::string mode_to_string(SynthMode m) {
  switch (m) {
    case SynthMode::CbmPlanted: return "cbm";
    case SynthMode::AptPlanted: return "apt";
    default: return "null";
  }
}

PayoffShape payoff_from_json(const json& doc) {
  PayoffShape p;
  p.constant = doc.value("constant", 0.0);
  p.amplitude = doc.value("amplitude", 0.0);
  p.period_months = doc.value("period", 60.0);
  return p;
}

json payoff_to_json(const PayoffShape& p) {
  return {{"constant", p.constant}, {"amplitude", p.amplitude},
          {"period", p.period_months}};
}

}  // namespace

SynthSpec synth_spec_from_json(const json& doc) {
  SynthSpec spec;
  spec.mode = mode_from_string(doc.value("mode", "null"));
  spec.n_stocks = doc.value("n_stocks", spec.n_stocks);
  spec.n_months = doc.value("n_months", spec.n_months);
  spec.seed = doc.value("seed", spec.seed);
  if (doc.contains("start")) spec.start = MonthStamp::parse(doc.at("start"));
  spec.noise_sigma = doc.value("noise_sigma", spec.noise_sigma);
  spec.char_rho = doc.value("char_rho", spec.char_rho);
  spec.missing_rate = doc.value("missing_rate", spec.missing_rate);
  spec.size_premium = doc.value("size_premium", spec.size_premium);
  spec.ncd_yield = doc.value("ncd_yield", spec.ncd_yield);
  spec.universe_top_n = doc.value("universe_top_n", spec.universe_top_n);
  spec.beta_lo = doc.value("beta_lo", spec.beta_lo);
  spec.beta_hi = doc.value("beta_hi", spec.beta_hi);
  spec.apt_alpha_sigma = doc.value("apt_alpha_sigma", spec.apt_alpha_sigma);
  spec.market_overlay = doc.value("market_overlay", spec.market_overlay);
  if (doc.contains("alpha")) spec.alpha = payoff_from_json(doc.at("alpha"));
  if (doc.contains("payoffs")) {
    for (const auto& [key, shape] : doc.at("payoffs").items()) {
      spec.payoffs[key] = payoff_from_json(shape);
    }
  }
  if (doc.contains("factors")) {
    const json& f = doc.at("factors");
    auto read = [&](const char* key, FactorPathSpec& out) {
      if (!f.contains(key)) return;
      out.mean = f.at(key).value("mean", out.mean);
      out.sigma = f.at(key).value("sigma", out.sigma);
    };
    read("mkt", spec.mkt);
    read("smb", spec.smb);
    read("hml", spec.hml);
  }
  return spec;
}

namespace {

json synth_spec_to_json(const SynthSpec& spec) {
  json doc;
  doc["mode"] = mode_to_string(spec.mode);
  doc["n_stocks"] = spec.n_stocks;
  doc["n_months"] = spec.n_months;
  doc["seed"] = spec.seed;
  doc["start"] = spec.start.str();
  doc["noise_sigma"] = spec.noise_sigma;
  doc["char_rho"] = spec.char_rho;
  doc["missing_rate"] = spec.missing_rate;
  doc["size_premium"] = spec.size_premium;
  doc["ncd_yield"] = spec.ncd_yield;
  doc["universe_top_n"] = spec.universe_top_n;
  doc["beta_lo"] = spec.beta_lo;
  doc["beta_hi"] = spec.beta_hi;
  doc["apt_alpha_sigma"] = spec.apt_alpha_sigma;
  doc["market_overlay"] = spec.market_overlay;
  doc["alpha"] = payoff_to_json(spec.alpha);
  json payoffs = json::object();
  for (const auto& [key, shape] : spec.payoffs) payoffs[key] = payoff_to_json(shape);
  doc["payoffs"] = payoffs;
  doc["factors"] = {{"mkt", {{"mean", spec.mkt.mean}, {"sigma", spec.mkt.sigma}}},
                    {"smb", {{"mean", spec.smb.mean}, {"sigma", spec.smb.sigma}}},
                    {"hml", {{"mean", spec.hml.mean}, {"sigma", spec.hml.sigma}}}};
  return doc;
}

std::vector<AptSpec> default_apt_models() {
  AptSpec capm;
  capm.name = "capm";
  capm.factor_keys = {"mkt_excess"};
  AptSpec ff3;
  ff3.name = "ff3";
  ff3.factor_keys = {"mkt_excess", "smb", "hml"};
  return {capm, ff3};
}

}  // namespace

RunConfig config_from_json(const json& doc) {
  RunConfig config;

  if (doc.contains("data")) {
    const json& d = doc.at("data");
    if (!d.contains("dir")) bad("data section needs 'dir'");
    config.data_dir = d.at("dir").get<std::string>();
    if (d.contains("overrides")) config.overrides_csv = d.at("overrides").get<std::string>();
  }
  if (doc.contains("synth")) config.synth = synth_spec_from_json(doc.at("synth"));

  if (doc.contains("universe")) {
    config.universe.top_n = doc.at("universe").value("top_n", config.universe.top_n);
  }
  if (doc.contains("sort")) {
    const json& s = doc.at("sort");
    config.sort.size_breakpoint = s.value("size_breakpoint", config.sort.size_breakpoint);
    if (s.contains("value_breakpoints")) {
      const auto bp = s.at("value_breakpoints").get<std::vector<double>>();
      if (bp.size() != 2) bad("sort.value_breakpoints wants two percentiles");
      config.sort.value_breakpoint_low = bp[0];
      config.sort.value_breakpoint_high = bp[1];
    }
    if (s.contains("weighting")) {
      config.sort.weighting = weighting_from_string(s.at("weighting"));
    }
  }
  if (doc.contains("zscore")) {
    const json& z = doc.at("zscore");
    config.zscore.winsor_sigma = z.value("winsor_sigma", config.zscore.winsor_sigma);
    config.zscore.min_count = z.value("min_count", config.zscore.min_count);
  }

  if (doc.contains("cbm")) {
    const json& c = doc.at("cbm");
    config.smoothing_window = c.value("smoothing_window", config.smoothing_window);
    config.market_loading_window =
        c.value("market_loading_window", config.market_loading_window);
  }

  if (doc.contains("apt_models")) {
    for (const json& m : doc.at("apt_models")) {
      AptSpec spec;
      spec.name = m.value("name", spec.name);
      if (m.contains("factors")) {
        spec.factor_keys = m.at("factors").get<std::vector<std::string>>();
      }
      spec.window = m.value("window", spec.window);
      spec.excess_returns = m.value("excess_returns", spec.excess_returns);
      config.apt_models.push_back(std::move(spec));
    }
  } else {
    config.apt_models = default_apt_models();
  }

  if (doc.contains("cbm_models") && doc.at("cbm_models").is_array()) {
    for (const json& m : doc.at("cbm_models")) {
      CbmSpec spec;
      spec.name = m.value("name", spec.name);
      if (m.contains("characteristics")) {
        spec.keys = m.at("characteristics").get<std::vector<std::string>>();
      }
      spec.smoothing_window = m.value("smoothing_window", config.smoothing_window);
      config.cbm_models.push_back(std::move(spec));
    }
  } else if (!doc.contains("cbm_models") ||
             doc.at("cbm_models").get<std::string>() == "table1") {
    config.cbm_models = table1_model_specs(config.smoothing_window);
  } else {
    bad("cbm_models must be an array or \"table1\"");
  }

  if (doc.contains("backtest")) {
    const json& b = doc.at("backtest");
    config.backtest.quantiles = b.value("quantiles", config.backtest.quantiles);
    if (b.contains("weighting")) {
      config.backtest.weighting = weighting_from_string(b.at("weighting"));
    }
  }

  config.seed = doc.value("seed", config.seed);
  config.output_dir = doc.value("output_dir", config.output_dir);
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const RunConfig& config) {
  json doc;
  if (config.data_dir) {
    doc["data"]["dir"] = *config.data_dir;
    if (config.overrides_csv) doc["data"]["overrides"] = *config.overrides_csv;
  }
  if (config.synth) doc["synth"] = synth_spec_to_json(*config.synth);
  doc["universe"] = {{"top_n", config.universe.top_n}};
  doc["sort"] = {{"size_breakpoint", config.sort.size_breakpoint},
                 {"value_breakpoints", {config.sort.value_breakpoint_low,
                                        config.sort.value_breakpoint_high}},
                 {"weighting", weighting_to_string(config.sort.weighting)}};
  doc["zscore"] = {{"winsor_sigma", config.zscore.winsor_sigma},
                   {"min_count", config.zscore.min_count}};
  doc["cbm"] = {{"smoothing_window", config.smoothing_window},
                {"market_loading_window", config.market_loading_window}};
  doc["apt_models"] = json::array();
  for (const auto& m : config.apt_models) {
    doc["apt_models"].push_back({{"name", m.name},
                                 {"factors", m.factor_keys},
                                 {"window", m.window},
                                 {"excess_returns", m.excess_returns}});
  }
  doc["cbm_models"] = json::array();
  for (const auto& m : config.cbm_models) {
    doc["cbm_models"].push_back({{"name", m.name},
                                 {"characteristics", m.keys},
                                 {"smoothing_window", m.smoothing_window}});
  }
  doc["backtest"] = {{"quantiles", config.backtest.quantiles},
                     {"weighting", weighting_to_string(config.backtest.weighting)}};
  doc["seed"] = config.seed;
  doc["output_dir"] = config.output_dir;
  return doc;
}

std::vector<Diagnostic> validate(const RunConfig& config) {
  std::vector<Diagnostic> diags;
  auto error = [&](const std::string& m) {
    diags.push_back({Diagnostic::Severity::Error, m});
  };
  auto warning = [&](const std::string& m) {
    diags.push_back({Diagnostic::Severity::Warning, m});
  };

  if (config.data_dir && config.synth) {
    error("choose one data source: 'data' or 'synth', not both");
  }
  if (!config.data_dir && !config.synth) {
    error("no data source: configure 'data.dir' or a 'synth' section");
  }

  int history = 0;
  if (config.data_dir) {
    namespace fs = std::filesystem;
    for (const char* name : {"tri.csv", "btp.csv", "mv.csv", "dy.csv", "ey.csv",
                             "vol.csv", "ncd.csv"}) {
      const fs::path p = fs::path(*config.data_dir) / name;
      if (!fs::exists(p)) error("missing input file " + p.string());
    }
    const fs::path tri = fs::path(*config.data_dir) / "tri.csv";
    if (fs::exists(tri)) {
      std::ifstream in(tri);
      std::string line;
      while (std::getline(in, line)) ++history;
      history = std::max(0, history - 1);  // header
    }
    if (config.overrides_csv && !fs::exists(*config.overrides_csv)) {
      error("missing override file " + *config.overrides_csv);
    }
  }
  if (config.synth) {
    history = config.synth->n_months;
    if (config.synth->n_stocks < 2) error("synth.n_stocks must be >= 2");
    if (config.synth->missing_rate < 0.0 || config.synth->missing_rate >= 0.5) {
      error("synth.missing_rate must lie in [0, 0.5)");
    }
  }

  if (config.apt_models.empty() && config.cbm_models.empty()) {
    error("no models configured");
  }

  for (const auto& m : config.apt_models) {
    if (m.factor_keys.empty()) error("apt model '" + m.name + "' has no factors");
    for (const auto& key : m.factor_keys) {
      if (key != "mkt_excess" && key != "mkt" && key != "smb" && key != "hml") {
        error("apt model '" + m.name + "': unknown factor key '" + key + "'");
      }
    }
    if (m.window < 12) error("apt model '" + m.name + "': window under 12 months");
    if (history > 0 && m.window >= history) {
      warning("apt model '" + m.name + "': insufficient history (window " +
              std::to_string(m.window) + " vs " + std::to_string(history) +
              " months of data)");
    }
  }
  for (const auto& m : config.cbm_models) {
    if (m.keys.empty()) error("cbm model '" + m.name + "' has no characteristics");
    for (const auto& key : m.keys) {
      if (!is_known_characteristic(key)) {
        error("cbm model '" + m.name + "': unknown characteristic key '" + key + "'");
      }
    }
  }

  if (config.universe.top_n < 2) error("universe.top_n must be >= 2");
  if (config.backtest.quantiles < 2) error("backtest.quantiles must be >= 2");
  if (config.zscore.winsor_sigma <= 0.0) error("zscore.winsor_sigma must be > 0");
  if (config.zscore.min_count < 3) error("zscore.min_count must be >= 3");
  if (config.smoothing_window < 1) error("cbm.smoothing_window must be >= 1");
  if (!(config.sort.value_breakpoint_low > 0.0 &&
        config.sort.value_breakpoint_low < config.sort.value_breakpoint_high &&
        config.sort.value_breakpoint_high < 100.0)) {
    error("sort.value_breakpoints must satisfy 0 < low < high < 100");
  }
  return diags;
}

}  // namespace fbt
