#pragma once

#include <map>
#include <string>
#include <vector>

#include "fbt/factors.hpp"
#include "fbt/panel.hpp"
#include "fbt/regress.hpp"

namespace fbt {

/// Risk-factor model: per-stock trailing time-series regression of excess
/// returns on factor-mimicking portfolio returns.
struct AptSpec {
  std::string name = "FF3";
  std::vector<std::string> factor_keys = {"mkt_excess", "smb", "hml"};
  int window = 72;
  bool excess_returns = true;
};

/// Per-stock, per-date trailing estimates. The row at date t is fitted on
/// data strictly before t, so it is the information set for predicting t.
struct RollingFit {
  MonthStamp start{};
  std::vector<StockId> stocks;
  std::vector<std::string> factor_keys;
  MatrixXd alpha;              // dates x stocks
  std::vector<MatrixXd> beta;  // one dates-x-stocks grid per factor key
  BoolGrid ok;

  Index rows() const { return alpha.rows(); }
  Index cols() const { return alpha.cols(); }
  Index row_of(MonthStamp m) const {
    int r = m - start;
    return (r < 0 || r >= rows()) ? -1 : r;
  }
};

/// Characteristic-based model: monthly cross-sections of returns on lagged
/// z-scored characteristics.
struct CbmSpec {
  std::string name = "CBM";
  std::vector<std::string> keys = {"BTP", "MV"};
  int smoothing_window = 12;
};

/// Per-month cross-section estimates: intercept and payoff per z-unit of
/// each characteristic, in monthly return units.
struct CbmFit {
  MonthStamp start{};
  std::vector<std::string> keys;
  VectorXd alpha;      // per date
  MatrixXd delta;      // dates x keys
  VectorXi n_used;
  VectorXd condition;  // design condition estimate per month
  BoolVec ok;

  Index rows() const { return alpha.size(); }
  Index row_of(MonthStamp m) const {
    int r = m - start;
    return (r < 0 || r >= rows()) ? -1 : r;
  }
};

/// Trailing means of the cross-section estimates: the slowly-varying
/// expected intercept/payoffs used for prediction.
struct SmoothedCbm {
  MonthStamp start{};
  std::vector<std::string> keys;
  VectorXd alpha;
  MatrixXd delta;
  BoolVec ok;
};

Panel predictions_panel_like(const Panel& returns);

/// Rolling regression per stock; the factor design at month s holds the
/// contemporaneous factor realizations, with mkt_excess = mkt - rfr and,
/// for excess-return specs, the response R_i - rfr.
RollingFit fit_apt(const Panel& returns, const FactorSeries& factors,
                   const AptSpec& spec);

/// E_{t-1}[R_t] = alpha + sum_j beta_j * f_{j,t-1}, plus the t-1 cash rate
/// for excess-return specs so the forecast is a total return. Missing where
/// the fit is not ok or any factor realization at t-1 is absent.
Panel predict_apt(const RollingFit& fit, const FactorSeries& factors,
                  bool excess_returns);

/// Per-month cross-section of R_t on characteristics at t-1 with intercept.
CbmFit fit_cbm(const Panel& returns, const CharacteristicSet& cs_z,
               const CbmSpec& spec);

/// Trailing mean of the per-month estimates over [t-window, t-1], counting
/// only ok months and requiring at least ceil(window/2) of them.
SmoothedCbm smooth_expectation(const CbmFit& fit, int window);

/// E_{t-1}[R_t] = E[alpha] + sum_k E[delta_k] * theta_{k,t-1}.
Panel predict_cbm(const SmoothedCbm& smoothed, const CharacteristicSet& cs_z);

/// Trailing CAPM beta versus the synthetic market, usable as the "Mkt"
/// characteristic. The value at date t is estimated through t-1.
Panel market_loading_panel(const Panel& returns, const FactorSeries& factors,
                           int window);

inline constexpr int kMarketLoadingWindow = 36;

/// The 14 characteristic combinations of the reporting suite, in order.
std::vector<CbmSpec> table1_model_specs(int smoothing_window);

/// Fixed column order of the payoff report.
const std::vector<std::string>& table1_columns();

struct Table1Row {
  std::string model;
  bool has_alpha = false;
  double median_alpha_pct = 0.0;
  std::map<std::string, double> median_delta_pct;  // only fitted keys
};

struct Table1 {
  std::vector<Table1Row> rows;
};

/// Median over ok months of the fitted intercept and payoffs, in percent.
Table1Row table1_row(const CbmSpec& spec, const CbmFit& fit);

}  // namespace fbt
