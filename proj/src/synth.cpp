#include "fbt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "fbt/csv.hpp"
#include "fbt/rng.hpp"
#include "fbt/universe.hpp"

namespace fbt {

double PayoffShape::at(int t) const {
  constexpr double two_pi = 6.283185307179586476925286766559;
  return constant + amplitude * std::sin(two_pi * static_cast<double>(t) / period_months);
}

namespace {

void validate(const SynthSpec& spec) {
  if (spec.n_stocks < 2 || spec.n_months < 2) {
    throw std::invalid_argument("synth needs at least 2 stocks and 2 months");
  }
  if (spec.noise_sigma < 0.0) throw std::invalid_argument("noise_sigma must be >= 0");
  if (spec.missing_rate < 0.0 || spec.missing_rate >= 0.5) {
    throw std::invalid_argument("missing_rate must lie in [0, 0.5)");
  }
  if (spec.char_rho < 0.0 || spec.char_rho >= 1.0) {
    throw std::invalid_argument("char_rho must lie in [0, 1)");
  }
  static const std::vector<std::string> plantable = {"BTP", "MV", "DY", "EY", "VOL"};
  for (const auto& [key, shape] : spec.payoffs) {
    if (std::find(plantable.begin(), plantable.end(), key) == plantable.end()) {
      throw std::invalid_argument("cannot plant payoff on derived characteristic '" +
                                  key + "'");
    }
  }
}

std::vector<StockId> make_tickers(int n) {
  std::vector<StockId> out;
  out.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "S%04d", i + 1);
    out.push_back(StockId{buf});
  }
  return out;
}

BoolGrid draw_missing(Rng& rng, Index T, Index n, double rate) {
  BoolGrid g(T, n);
  for (Index t = 0; t < T; ++t) {
    for (Index i = 0; i < n; ++i) g(t, i) = rng.uniform() < rate;
  }
  return g;
}

Panel grid_to_panel(MonthStamp start, const std::vector<StockId>& stocks,
                    const MatrixXd& values, const BoolGrid& missing) {
  Panel p(start, stocks, values.rows());
  for (Index t = 0; t < values.rows(); ++t) {
    for (Index i = 0; i < values.cols(); ++i) {
      if (!missing(t, i)) p.set(t, i, values(t, i));
    }
  }
  return p;
}

MatrixXd ar1_latent(Rng& rng, Index T, Index n, double rho) {
  MatrixXd z(T, n);
  for (Index i = 0; i < n; ++i) z(0, i) = rng.normal();
  const double shock = std::sqrt(1.0 - rho * rho);
  for (Index t = 1; t < T; ++t) {
    for (Index i = 0; i < n; ++i) z(t, i) = rho * z(t - 1, i) + shock * rng.normal();
  }
  return z;
}

}  // namespace

SynthResult generate(const SynthSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);

  const Index T = spec.n_months;
  const Index n = spec.n_stocks;
  const auto stocks = make_tickers(spec.n_stocks);

  // Fixed draw order: masks, market values, characteristic latents, apt
  // parameters, return noise. Masks are drawn even at rate 0 so the stream
  // layout does not depend on the rate.
  const BoolGrid miss_tri = draw_missing(rng, T, n, spec.missing_rate);
  const BoolGrid miss_btp = draw_missing(rng, T, n, spec.missing_rate);
  const BoolGrid miss_mv = draw_missing(rng, T, n, spec.missing_rate);
  const BoolGrid miss_dy = draw_missing(rng, T, n, spec.missing_rate);
  const BoolGrid miss_ey = draw_missing(rng, T, n, spec.missing_rate);
  const BoolGrid miss_vol = draw_missing(rng, T, n, spec.missing_rate);

  // Market value: persistent log-normal paths.
  MatrixXd mv_values(T, n);
  for (Index i = 0; i < n; ++i) mv_values(0, i) = rng.normal(6.0, 1.5);
  for (Index t = 1; t < T; ++t) {
    for (Index i = 0; i < n; ++i) {
      mv_values(t, i) = mv_values(t - 1, i) + rng.normal(0.0, 0.03);
    }
  }
  mv_values = mv_values.array().exp();

  const MatrixXd btp_values = ar1_latent(rng, T, n, spec.char_rho);
  const MatrixXd dy_values = ar1_latent(rng, T, n, spec.char_rho);
  const MatrixXd ey_values = ar1_latent(rng, T, n, spec.char_rho);
  const MatrixXd vol_values = ar1_latent(rng, T, n, spec.char_rho);

  GroundTruth truth;
  truth.factor_keys = {"mkt", "smb", "hml"};
  if (spec.mode == SynthMode::AptPlanted) {
    truth.stock_beta = MatrixXd(n, 3);
    truth.stock_alpha = VectorXd(n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < 3; ++j) {
        truth.stock_beta(i, j) = rng.uniform(spec.beta_lo, spec.beta_hi);
      }
    }
    for (Index i = 0; i < n; ++i) {
      truth.stock_alpha(i) =
          spec.apt_alpha_sigma > 0.0 ? rng.normal(0.0, spec.apt_alpha_sigma) : 0.0;
    }
    truth.factor_paths = MatrixXd(T, 3);
    const FactorPathSpec paths[3] = {spec.mkt, spec.smb, spec.hml};
    for (Index t = 0; t < T; ++t) {
      for (Index j = 0; j < 3; ++j) {
        truth.factor_paths(t, j) = rng.normal(paths[j].mean, paths[j].sigma);
      }
    }
  } else if (spec.mode == SynthMode::CbmPlanted && spec.market_overlay) {
    truth.factor_keys = {"mkt"};
    truth.stock_beta = MatrixXd(n, 1);
    for (Index i = 0; i < n; ++i) {
      truth.stock_beta(i, 0) = rng.uniform(spec.beta_lo, spec.beta_hi);
    }
    truth.factor_paths = MatrixXd(T, 1);
    for (Index t = 0; t < T; ++t) {
      truth.factor_paths(t, 0) = rng.normal(spec.mkt.mean, spec.mkt.sigma);
    }
  }

  MatrixXd noise(T, n);
  for (Index t = 0; t < T; ++t) {
    for (Index i = 0; i < n; ++i) noise(t, i) = rng.normal(0.0, spec.noise_sigma);
  }

  // Raw panels (everything except the return index, which needs returns).
  RawDataset raw;
  raw.btp = grid_to_panel(spec.start, stocks, btp_values, miss_btp);
  raw.mv = grid_to_panel(spec.start, stocks, mv_values, miss_mv);
  raw.dy = grid_to_panel(spec.start, stocks, dy_values, miss_dy);
  raw.ey = grid_to_panel(spec.start, stocks, ey_values, miss_ey);
  raw.vol = grid_to_panel(spec.start, stocks, vol_values, miss_vol);
  raw.ncd_yield = Series(spec.start, T);
  for (Index t = 0; t < T; ++t) raw.ncd_yield.set(t, spec.ncd_yield);

  const Series rfr_full = [&] {
    Series s(spec.start, T);
    const double r = std::log(1.0 + spec.ncd_yield / 4.0) / 3.0;
    for (Index t = 0; t < T; ++t) s.set(t, r);
    return s;
  }();
  truth.rfr = rfr_full;

  // The planted cbm relation runs through the exact estimation-side
  // transforms: quarter lag, universe mask, winsorize, z-score.
  const Panel lagged_mv = lag(raw.mv, kFundamentalLagMonths);
  UniverseSpec uspec{spec.universe_top_n > 0 ? spec.universe_top_n : spec.n_stocks};
  const UniverseMask mask = select_universe(lagged_mv, uspec);

  std::vector<Panel> theta;  // standardized planted characteristics
  if (spec.mode == SynthMode::CbmPlanted) {
    for (const auto& [key, shape] : spec.payoffs) {
      truth.payoff_keys.push_back(key);
      Panel raw_char;
      if (key == "BTP") raw_char = lag(raw.btp, kFundamentalLagMonths);
      else if (key == "MV") raw_char = lagged_mv;
      else if (key == "DY") raw_char = lag(raw.dy, kFundamentalLagMonths);
      else if (key == "EY") raw_char = lag(raw.ey, kFundamentalLagMonths);
      else raw_char = raw.vol;
      theta.push_back(zscore_cross_section(
          winsorize_cross_section(apply_mask(raw_char, mask), spec.policy),
          spec.policy));
    }
    const Index k = static_cast<Index>(truth.payoff_keys.size());
    truth.delta = MatrixXd::Zero(T, k);
    truth.alpha = VectorXd::Zero(T);
    for (Index t = 0; t < T; ++t) {
      truth.alpha(t) = spec.alpha.at(static_cast<int>(t));
      Index j = 0;
      for (const auto& [key, shape] : spec.payoffs) {
        truth.delta(t, j++) = shape.at(static_cast<int>(t));
      }
    }
  }

  // Below-median lagged market value marks the month's small stocks.
  BoolGrid small = BoolGrid::Constant(T, n, false);
  if (spec.size_premium != 0.0) {
    std::vector<double> valid;
    for (Index t = 0; t < T; ++t) {
      valid.clear();
      for (Index c = 0; c < n; ++c) {
        if (lagged_mv.has(t, c)) valid.push_back(lagged_mv.value(t, c));
      }
      if (valid.empty()) continue;
      std::sort(valid.begin(), valid.end());
      const double med = valid[valid.size() / 2];
      for (Index c = 0; c < n; ++c) {
        small(t, c) = lagged_mv.has(t, c) && lagged_mv.value(t, c) <= med;
      }
    }
  }

  MatrixXd returns(T, n);
  for (Index t = 0; t < T; ++t) {
    for (Index i = 0; i < n; ++i) {
      double r = noise(t, i);
      if (spec.mode == SynthMode::CbmPlanted) {
        r += truth.alpha(t);
        if (t > 0) {
          for (size_t j = 0; j < theta.size(); ++j) {
            if (theta[j].has(t - 1, i)) {
              r += truth.delta(t, static_cast<Index>(j)) * theta[j].value(t - 1, i);
            }
          }
        }
        if (spec.market_overlay) {
          r += truth.stock_beta(i, 0) * truth.factor_paths(t, 0);
        }
      } else if (spec.mode == SynthMode::AptPlanted) {
        const double rf = rfr_full.value(t);
        r += rf + truth.stock_alpha(i);
        r += truth.stock_beta(i, 0) * (truth.factor_paths(t, 0) - rf);
        r += truth.stock_beta(i, 1) * truth.factor_paths(t, 1);
        r += truth.stock_beta(i, 2) * truth.factor_paths(t, 2);
      }
      if (small(t, i)) r += spec.size_premium;
      returns(t, i) = r;
    }
  }

  // Total return index levels compound the generated returns.
  MatrixXd tri(T, n);
  for (Index i = 0; i < n; ++i) {
    tri(0, i) = 100.0;
    for (Index t = 1; t < T; ++t) tri(t, i) = tri(t - 1, i) * std::exp(returns(t, i));
  }
  raw.tri = grid_to_panel(spec.start, stocks, tri, miss_tri);

  SynthResult out;
  out.dataset = assemble_dataset(std::move(raw), nullptr);
  out.truth = std::move(truth);
  return out;
}

void write_dataset_csvs(const RawDataset& raw, const std::string& dir) {
  write_wide_csv(dir + "/tri.csv", raw.tri);
  write_wide_csv(dir + "/btp.csv", raw.btp);
  write_wide_csv(dir + "/mv.csv", raw.mv);
  write_wide_csv(dir + "/dy.csv", raw.dy);
  write_wide_csv(dir + "/ey.csv", raw.ey);
  write_wide_csv(dir + "/vol.csv", raw.vol);
  write_series_csv(dir + "/ncd.csv", raw.ncd_yield, "yield");
}

}  // namespace fbt
