#include "fbt/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fbt {

std::vector<int> symmetric_bin_sizes(int n, int q) {
  if (q < 2) throw std::invalid_argument("quantile count must be >= 2");
  if (n < 0) throw std::invalid_argument("negative bin population");

  std::vector<int> sizes(static_cast<size_t>(q), n / q);
  int extra = n % q;

  if (q % 2 == 1) {
    const int mid = q / 2;  // 0-based middle
    if (extra % 2 == 1) {
      ++sizes[static_cast<size_t>(mid)];
      --extra;
    }
    for (int d = 1; extra > 0; ++d) {
      ++sizes[static_cast<size_t>(mid - d)];
      ++sizes[static_cast<size_t>(mid + d)];
      extra -= 2;
    }
  } else {
    const int lo = q / 2 - 1;  // lower of the middle pair, 0-based
    int d = 0;
    for (; extra >= 2; ++d) {
      ++sizes[static_cast<size_t>(lo - d)];
      ++sizes[static_cast<size_t>(lo + 1 + d)];
      extra -= 2;
    }
    // An odd remainder cannot be placed symmetrically; it takes the lower
    // member of the next middle-out pair.
    if (extra == 1) ++sizes[static_cast<size_t>(lo - d)];
  }
  return sizes;
}

VectorXi symmetric_quantile(const VectorXd& values, const BoolVec& present,
                            const std::vector<StockId>& stocks, int q) {
  const Index n = values.size();
  if (present.size() != n || static_cast<Index>(stocks.size()) != n) {
    throw std::invalid_argument("symmetric_quantile: axis lengths disagree");
  }

  std::vector<Index> order;
  for (Index i = 0; i < n; ++i) {
    if (present(i)) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (values(a) != values(b)) return values(a) > values(b);
    return stocks[static_cast<size_t>(a)].ticker < stocks[static_cast<size_t>(b)].ticker;
  });

  VectorXi bins = VectorXi::Zero(n);
  const auto sizes = symmetric_bin_sizes(static_cast<int>(order.size()), q);
  size_t next = 0;
  for (int b = 0; b < q; ++b) {
    for (int k = 0; k < sizes[static_cast<size_t>(b)]; ++k) {
      bins(order[next++]) = b + 1;
    }
  }
  return bins;
}

Eigen::MatrixXi quantile_assignments(const Panel& expected, const UniverseMask& mask,
                                     int q) {
  if (expected.start() != mask.start || expected.rows() != mask.rows() ||
      expected.stocks() != mask.stocks) {
    throw std::invalid_argument("quantile_assignments requires aligned axes");
  }
  Eigen::MatrixXi out = Eigen::MatrixXi::Zero(expected.rows(), expected.cols());
  VectorXd row(expected.cols());
  BoolVec row_present(expected.cols());
  for (Index t = 0; t < expected.rows(); ++t) {
    for (Index i = 0; i < expected.cols(); ++i) {
      row_present(i) = mask.member(t, i) && expected.has(t, i);
      row(i) = row_present(i) ? expected.value(t, i) : 0.0;
    }
    out.row(t) = symmetric_quantile(row, row_present, expected.stocks(), q).transpose();
  }
  return out;
}

namespace {

LineFit fit_line(const std::vector<double>& y) {
  // Least squares of y against bin index 1..Q.
  const double n = static_cast<double>(y.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t b = 0; b < y.size(); ++b) {
    const double x = static_cast<double>(b + 1);
    sx += x;
    sy += y[b];
    sxx += x * x;
    sxy += x * y[b];
  }
  LineFit f;
  const double denom = n * sxx - sx * sx;
  if (denom != 0.0) {
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
  }
  return f;
}

}  // namespace

std::map<std::string, QuintileStats> run_backtest(
    const std::map<std::string, Panel>& expected, const Panel& realized,
    const UniverseMask& mask, const BacktestSpec& spec, const Panel* mv) {
  if (spec.weighting == Weighting::CapWeighted && mv == nullptr) {
    throw std::invalid_argument("cap-weighted backtest needs the MV panel");
  }

  std::map<std::string, QuintileStats> out;
  for (const auto& [model, panel] : expected) {
    if (!panel.same_axes(realized)) {
      throw std::invalid_argument("expected returns for " + model +
                                  " not aligned with realized returns");
    }
    const Eigen::MatrixXi bins = quantile_assignments(panel, mask, spec.quantiles);

    QuintileStats stats;
    stats.model = model;
    stats.bin_log_returns.assign(static_cast<size_t>(spec.quantiles),
                                 Series(realized.start(), realized.rows()));

    bool any_month = false;
    for (Index t = 0; t < realized.rows(); ++t) {
      for (int b = 1; b <= spec.quantiles; ++b) {
        double weight_sum = 0.0;
        double portfolio = 0.0;
        for (Index i = 0; i < realized.cols(); ++i) {
          if (bins(t, i) != b || !realized.has(t, i)) continue;
          double w = 1.0;
          if (spec.weighting == Weighting::CapWeighted) {
            if (t == 0 || !mv->has(t - 1, i) || mv->value(t - 1, i) <= 0.0) continue;
            w = mv->value(t - 1, i);
          }
          weight_sum += w;
          portfolio += w * std::expm1(realized.value(t, i));
        }
        if (weight_sum > 0.0) {
          stats.bin_log_returns[static_cast<size_t>(b - 1)].set(
              t, std::log1p(portfolio / weight_sum));
          any_month = true;
        }
      }
    }
    if (!any_month) {
      throw std::runtime_error("model '" + model +
                               "' produced no usable prediction months");
    }

    for (int b = 0; b < spec.quantiles; ++b) {
      const Series& s = stats.bin_log_returns[static_cast<size_t>(b)];
      double sum = 0.0;
      int count = 0;
      for (Index t = 0; t < s.size(); ++t) {
        if (s.has(t)) {
          sum += s.value(t);
          ++count;
        }
      }
      const double mean = count > 0 ? sum / count : 0.0;
      double ss = 0.0;
      for (Index t = 0; t < s.size(); ++t) {
        if (s.has(t)) ss += (s.value(t) - mean) * (s.value(t) - mean);
      }
      const double stdev = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
      stats.months.push_back(count);
      stats.ann_return_pct.push_back(100.0 * 12.0 * mean);
      stats.ann_vol_pct.push_back(100.0 * std::sqrt(12.0) * stdev);
    }
    stats.return_line = fit_line(stats.ann_return_pct);
    stats.vol_line = fit_line(stats.ann_vol_pct);
    out.emplace(model, std::move(stats));
  }
  return out;
}

}  // namespace fbt
