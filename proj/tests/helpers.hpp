#pragma once

// Shared fixtures and independent oracles for the test suites. Everything
// here deliberately avoids the library's own solve/percentile/assignment
// code paths so the tests stay a second opinion.

#include <algorithm>
#include <cmath>
#include <vector>

#include "fbt/panel.hpp"
#include "fbt/rng.hpp"

namespace testutil {

using fbt::BoolGrid;
using fbt::BoolVec;
using fbt::Index;
using fbt::MatrixXd;
using fbt::MonthStamp;
using fbt::Panel;
using fbt::StockId;
using fbt::VectorXd;

inline MonthStamp ym(int year, int month) { return MonthStamp::from_ym(year, month); }

inline std::vector<StockId> tickers(std::initializer_list<const char*> names) {
  std::vector<StockId> out;
  for (const char* n : names) out.push_back(StockId{n});
  return out;
}

inline Panel make_panel(MonthStamp start, std::vector<StockId> stocks,
                        const std::vector<std::vector<double>>& rows) {
  Panel p(start, std::move(stocks), static_cast<Index>(rows.size()));
  for (size_t r = 0; r < rows.size(); ++r) {
    for (size_t c = 0; c < rows[r].size(); ++c) {
      p.set(static_cast<Index>(r), static_cast<Index>(c), rows[r][c]);
    }
  }
  return p;
}

inline Panel random_panel(MonthStamp start, int n_dates, int n_stocks, uint64_t seed,
                          double missing_rate = 0.0) {
  std::vector<StockId> stocks;
  for (int i = 0; i < n_stocks; ++i) {
    stocks.push_back(StockId{"T" + std::to_string(100 + i)});
  }
  Panel p(start, std::move(stocks), n_dates);
  fbt::Rng rng(seed);
  for (Index r = 0; r < p.rows(); ++r) {
    for (Index c = 0; c < p.cols(); ++c) {
      const double v = rng.normal();
      if (rng.uniform() >= missing_rate) p.set(r, c, v);
    }
  }
  return p;
}

/// Brute-force least squares through explicitly formed normal equations,
/// solved by Gauss-Jordan elimination with partial pivoting. Returns false
/// when a pivot collapses (rank deficiency).
inline bool normal_equations_solve(const MatrixXd& design, const VectorXd& response,
                                   VectorXd& out) {
  const Index p = design.cols();
  MatrixXd a = design.transpose() * design;
  VectorXd b = design.transpose() * response;

  const double scale = a.cwiseAbs().maxCoeff();
  for (Index col = 0; col < p; ++col) {
    Index pivot = col;
    for (Index r = col + 1; r < p; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (std::abs(a(pivot, col)) <= 1e-12 * std::max(scale, 1.0)) return false;
    a.row(col).swap(a.row(pivot));
    std::swap(b(col), b(pivot));
    const double d = a(col, col);
    a.row(col) /= d;
    b(col) /= d;
    for (Index r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      a.row(r) -= f * a.row(col);
      b(r) -= f * b(col);
    }
  }
  out = b;
  return true;
}

/// Listwise deletion + normal equations + the same degrees-of-freedom rule
/// the library documents (n >= p + min_surplus). Used as the independent
/// route in the OLS equivalence checks.
struct BruteOls {
  VectorXd coefficients;
  int n_used = 0;
  bool ok = false;
};

inline BruteOls brute_ols(const VectorXd& y, const BoolVec& y_present,
                          const MatrixXd& X, const BoolGrid& X_present,
                          bool intercept = true, int min_surplus = 8) {
  BruteOls out;
  std::vector<Index> rows;
  for (Index r = 0; r < y.size(); ++r) {
    if (!y_present(r)) continue;
    bool full = true;
    for (Index c = 0; c < X.cols(); ++c) {
      if (!X_present(r, c)) {
        full = false;
        break;
      }
    }
    if (full) rows.push_back(r);
  }
  out.n_used = static_cast<int>(rows.size());

  const Index p = X.cols() + (intercept ? 1 : 0);
  if (out.n_used < p + min_surplus || out.n_used < p) return out;

  MatrixXd design(out.n_used, p);
  VectorXd response(out.n_used);
  for (Index i = 0; i < out.n_used; ++i) {
    Index j = 0;
    if (intercept) design(i, j++) = 1.0;
    for (Index c = 0; c < X.cols(); ++c) design(i, j++) = X(rows[i], c);
    response(i) = y(rows[i]);
  }
  out.ok = normal_equations_solve(design, response, out.coefficients);
  return out;
}

/// Upper chi-square quantile via the Wilson-Hilferty cube approximation;
/// z is the standard-normal quantile of the target probability.
inline double chi2_quantile(int dof, double z) {
  const double n = static_cast<double>(dof);
  const double t = 1.0 - 2.0 / (9.0 * n) + z * std::sqrt(2.0 / (9.0 * n));
  return n * t * t * t;
}

inline double sample_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double sample_std(const std::vector<double>& v) {
  const double m = sample_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace testutil
