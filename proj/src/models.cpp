#include "fbt/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fbt {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty set");
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Factor design on the returns date axis. Column j of `values` holds the
/// realization of factor_keys[j] at that row's date.
struct FactorDesign {
  MatrixXd values;
  BoolGrid present;
};

FactorDesign factor_design(const Panel& returns, const FactorSeries& factors,
                           const std::vector<std::string>& keys) {
  FactorDesign d;
  const Index T = returns.rows();
  const Index k = static_cast<Index>(keys.size());
  d.values = MatrixXd::Zero(T, k);
  d.present = BoolGrid::Constant(T, k, false);

  auto lookup = [](const Series& s, MonthStamp m, double& v) {
    const Index r = s.row_of(m);
    if (r < 0 || !s.has(r)) return false;
    v = s.value(r);
    return true;
  };

  for (Index r = 0; r < T; ++r) {
    const MonthStamp m = returns.date(r);
    for (Index j = 0; j < k; ++j) {
      const std::string& key = keys[static_cast<size_t>(j)];
      double v = 0.0;
      bool found = false;
      if (key == "mkt_excess") {
        double mkt = 0.0, rfr = 0.0;
        found = lookup(factors.mkt, m, mkt) && lookup(factors.rfr, m, rfr);
        v = mkt - rfr;
      } else if (key == "mkt") {
        found = lookup(factors.mkt, m, v);
      } else if (key == "smb") {
        found = lookup(factors.smb, m, v);
      } else if (key == "hml") {
        found = lookup(factors.hml, m, v);
      } else {
        throw std::invalid_argument("unknown factor key '" + key + "'");
      }
      if (found) {
        d.values(r, j) = v;
        d.present(r, j) = true;
      }
    }
  }
  return d;
}

}  // namespace

Panel predictions_panel_like(const Panel& returns) {
  return Panel(returns.start(), returns.stocks(), returns.rows());
}

RollingFit fit_apt(const Panel& returns, const FactorSeries& factors,
                   const AptSpec& spec) {
  if (spec.factor_keys.empty()) {
    throw std::invalid_argument("apt spec needs at least one factor");
  }

  const Index T = returns.rows();
  const Index n = returns.cols();
  const Index k = static_cast<Index>(spec.factor_keys.size());

  RollingFit fit;
  fit.start = returns.start();
  fit.stocks = returns.stocks();
  fit.factor_keys = spec.factor_keys;
  fit.alpha = MatrixXd::Zero(T, n);
  fit.beta.assign(static_cast<size_t>(k), MatrixXd::Zero(T, n));
  fit.ok = BoolGrid::Constant(T, n, false);

  const FactorDesign design = factor_design(returns, factors, spec.factor_keys);

  VectorXd y(T);
  BoolVec y_present(T);
  for (Index i = 0; i < n; ++i) {
    for (Index r = 0; r < T; ++r) {
      double v = returns.has(r, i) ? returns.value(r, i) : 0.0;
      bool present = returns.has(r, i);
      if (spec.excess_returns && present) {
        const Index fr = factors.rfr.row_of(returns.date(r));
        if (fr >= 0 && factors.rfr.has(fr)) {
          v -= factors.rfr.value(fr);
        } else {
          present = false;
        }
      }
      y(r) = present ? v : 0.0;
      y_present(r) = present;
    }

    const auto results =
        rolling_ols(y, y_present, design.values, design.present, spec.window);
    for (Index t = 0; t < T; ++t) {
      const OlsResult& res = results[static_cast<size_t>(t)];
      if (!res.ok) continue;
      fit.ok(t, i) = true;
      fit.alpha(t, i) = res.coefficients(0);
      for (Index j = 0; j < k; ++j) {
        fit.beta[static_cast<size_t>(j)](t, i) = res.coefficients(j + 1);
      }
    }
  }
  return fit;
}

Panel predict_apt(const RollingFit& fit, const FactorSeries& factors,
                  bool excess_returns) {
  Panel out(fit.start, fit.stocks, fit.rows());
  const Index k = static_cast<Index>(fit.factor_keys.size());

  for (Index t = 1; t < fit.rows(); ++t) {
    const MonthStamp prev = out.date(t) - 1;

    // Factor realizations dated t-1 drive the expectation for t.
    VectorXd f(k);
    bool f_ok = true;
    double rfr_prev = 0.0;
    {
      const Index rr = factors.rfr.row_of(prev);
      const bool have_rfr = rr >= 0 && factors.rfr.has(rr);
      if (have_rfr) rfr_prev = factors.rfr.value(rr);
      for (Index j = 0; j < k && f_ok; ++j) {
        const std::string& key = fit.factor_keys[static_cast<size_t>(j)];
        const Series* s = nullptr;
        bool excess = false;
        if (key == "mkt_excess") {
          s = &factors.mkt;
          excess = true;
        } else if (key == "mkt") {
          s = &factors.mkt;
        } else if (key == "smb") {
          s = &factors.smb;
        } else if (key == "hml") {
          s = &factors.hml;
        } else {
          throw std::invalid_argument("unknown factor key '" + key + "'");
        }
        const Index sr = s->row_of(prev);
        if (sr < 0 || !s->has(sr) || (excess && !have_rfr)) {
          f_ok = false;
        } else {
          f(j) = s->value(sr) - (excess ? rfr_prev : 0.0);
        }
      }
      if (excess_returns && !have_rfr) f_ok = false;
    }
    if (!f_ok) continue;

    for (Index i = 0; i < fit.cols(); ++i) {
      if (!fit.ok(t, i)) continue;
      double e = fit.alpha(t, i);
      for (Index j = 0; j < k; ++j) e += fit.beta[static_cast<size_t>(j)](t, i) * f(j);
      if (excess_returns) e += rfr_prev;
      out.set(t, i, e);
    }
  }
  return out;
}

CbmFit fit_cbm(const Panel& returns, const CharacteristicSet& cs_z,
               const CbmSpec& spec) {
  if (spec.keys.empty()) {
    throw std::invalid_argument("cbm spec needs at least one characteristic");
  }
  std::vector<const Panel*> chars;
  for (const std::string& key : spec.keys) {
    if (!cs_z.contains(key)) {
      throw std::invalid_argument("characteristic '" + key + "' not in set");
    }
    const Panel& p = cs_z.at(key);
    if (!p.same_axes(returns)) {
      throw std::invalid_argument("characteristic '" + key +
                                  "' axes differ from returns");
    }
    chars.push_back(&p);
  }

  const Index T = returns.rows();
  const Index n = returns.cols();
  const Index k = static_cast<Index>(spec.keys.size());

  CbmFit fit;
  fit.start = returns.start();
  fit.keys = spec.keys;
  fit.alpha = VectorXd::Zero(T);
  fit.delta = MatrixXd::Zero(T, k);
  fit.n_used = VectorXi::Zero(T);
  fit.condition = VectorXd::Zero(T);
  fit.ok = BoolVec::Constant(T, false);

  MatrixXd X(n, k);
  BoolGrid X_present(n, k);
  VectorXd y(n);
  BoolVec y_present(n);
  for (Index t = 1; t < T; ++t) {
    for (Index i = 0; i < n; ++i) {
      y(i) = returns.has(t, i) ? returns.value(t, i) : 0.0;
      y_present(i) = returns.has(t, i);
      for (Index j = 0; j < k; ++j) {
        const Panel& p = *chars[static_cast<size_t>(j)];
        X_present(i, j) = p.has(t - 1, i);
        X(i, j) = X_present(i, j) ? p.value(t - 1, i) : 0.0;
      }
    }
    const OlsResult res = ols(y, y_present, X, X_present);
    fit.n_used(t) = res.n_used;
    if (!res.ok) continue;
    fit.ok(t) = true;
    fit.alpha(t) = res.coefficients(0);
    for (Index j = 0; j < k; ++j) fit.delta(t, j) = res.coefficients(j + 1);
    fit.condition(t) = res.condition;
  }
  return fit;
}

SmoothedCbm smooth_expectation(const CbmFit& fit, int window) {
  if (window < 1) throw std::invalid_argument("smoothing window must be >= 1");

  const Index T = fit.rows();
  const Index k = static_cast<Index>(fit.keys.size());
  SmoothedCbm out;
  out.start = fit.start;
  out.keys = fit.keys;
  out.alpha = VectorXd::Zero(T);
  out.delta = MatrixXd::Zero(T, k);
  out.ok = BoolVec::Constant(T, false);

  const int need = (window + 1) / 2;
  for (Index t = 0; t < T; ++t) {
    const Index lo = std::max<Index>(0, t - window);
    int count = 0;
    double alpha_sum = 0.0;
    VectorXd delta_sum = VectorXd::Zero(k);
    for (Index s = lo; s < t; ++s) {
      if (!fit.ok(s)) continue;
      ++count;
      alpha_sum += fit.alpha(s);
      delta_sum += fit.delta.row(s).transpose();
    }
    if (count < need) continue;
    out.ok(t) = true;
    out.alpha(t) = alpha_sum / count;
    out.delta.row(t) = delta_sum.transpose() / count;
  }
  return out;
}

Panel predict_cbm(const SmoothedCbm& smoothed, const CharacteristicSet& cs_z) {
  std::vector<const Panel*> chars;
  for (const std::string& key : smoothed.keys) chars.push_back(&cs_z.at(key));

  const Panel& ref = *chars.front();
  Panel out(ref.start(), ref.stocks(), ref.rows());
  if (smoothed.start != ref.start() || smoothed.alpha.size() != ref.rows()) {
    throw std::invalid_argument("smoothed parameters and characteristics disagree");
  }

  const Index k = static_cast<Index>(chars.size());
  for (Index t = 1; t < out.rows(); ++t) {
    if (!smoothed.ok(t)) continue;
    for (Index i = 0; i < out.cols(); ++i) {
      double e = smoothed.alpha(t);
      bool complete = true;
      for (Index j = 0; j < k; ++j) {
        const Panel& p = *chars[static_cast<size_t>(j)];
        if (!p.has(t - 1, i)) {
          complete = false;
          break;
        }
        e += smoothed.delta(t, j) * p.value(t - 1, i);
      }
      if (complete) out.set(t, i, e);
    }
  }
  return out;
}

Panel market_loading_panel(const Panel& returns, const FactorSeries& factors,
                           int window) {
  AptSpec capm;
  capm.name = "capm_loading";
  capm.factor_keys = {"mkt_excess"};
  capm.window = window;
  capm.excess_returns = true;
  const RollingFit fit = fit_apt(returns, factors, capm);

  Panel out(returns.start(), returns.stocks(), returns.rows());
  for (Index t = 0; t < out.rows(); ++t) {
    for (Index i = 0; i < out.cols(); ++i) {
      if (fit.ok(t, i)) out.set(t, i, fit.beta[0](t, i));
    }
  }
  return out;
}

std::vector<CbmSpec> table1_model_specs(int smoothing_window) {
  const std::vector<std::vector<std::string>> key_sets = {
      {"BTP", "MV"},
      {"BTP", "MV", "Mkt"},
      {"BTP", "MV", "MOML"},
      {"BTP", "MV", "Mkt", "MOML"},
      {"BTP", "MV", "Mkt", "MOML"},
      {"BTP", "MV", "Mkt", "MOML", "MOMS"},
      {"BTP", "MV", "Mkt", "MOML", "MOMS", "VOL"},
      {"BTP", "MV", "Mkt", "VOL"},
      {"BTP", "MV", "Mkt", "MOML", "MOMS", "EY"},
      {"BTP", "MV", "EY"},
      {"BTP", "MV", "MOML", "MOMS", "EY", "DY"},
      {"BTP", "MV", "DY"},
      {"BTP", "MV", "Mkt", "MOML", "MOMS", "DY"},
      {"BTP", "MV", "Mkt", "MOML", "MOMS", "EY", "DY"},
  };
  std::vector<CbmSpec> specs;
  specs.reserve(key_sets.size());
  for (size_t i = 0; i < key_sets.size(); ++i) {
    CbmSpec s;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "cbm%02d", static_cast<int>(i) + 1);
    s.name = buf;
    s.keys = key_sets[i];
    s.smoothing_window = smoothing_window;
    specs.push_back(std::move(s));
  }
  return specs;
}

const std::vector<std::string>& table1_columns() {
  static const std::vector<std::string> cols = {"BTP", "MV",  "Mkt", "MOML",
                                                "MOMS", "EY", "DY",  "VOL"};
  return cols;
}

Table1Row table1_row(const CbmSpec& spec, const CbmFit& fit) {
  Table1Row row;
  row.model = spec.name;

  std::vector<double> alphas;
  for (Index t = 0; t < fit.rows(); ++t) {
    if (fit.ok(t)) alphas.push_back(fit.alpha(t));
  }
  if (alphas.empty()) return row;

  row.has_alpha = true;
  row.median_alpha_pct = 100.0 * median(alphas);
  for (Index j = 0; j < static_cast<Index>(fit.keys.size()); ++j) {
    std::vector<double> deltas;
    for (Index t = 0; t < fit.rows(); ++t) {
      if (fit.ok(t)) deltas.push_back(fit.delta(t, j));
    }
    row.median_delta_pct[fit.keys[static_cast<size_t>(j)]] = 100.0 * median(deltas);
  }
  return row;
}

}  // namespace fbt
