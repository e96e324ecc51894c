#pragma once

#include <vector>

#include "fbt/panel.hpp"

namespace fbt {

struct OlsOptions {
  bool intercept = true;
  /// Required observations beyond the design column count; below it the fit
  /// reports ok = false rather than an error.
  int min_surplus = 8;
};

struct OlsResult {
  VectorXd coefficients;  // intercept first when fitted with one
  VectorXd residuals;     // over the rows actually used, in row order
  std::vector<Index> rows_used;
  int n_used = 0;
  bool ok = false;
  /// Condition estimate of the design from the QR diagonal; large values
  /// flag the near-collinear characteristic pairs worth distrusting.
  double condition = 0.0;
};

/// Least squares with listwise deletion: any row with a missing response or
/// regressor is dropped before the solve. Uses a rank-revealing Householder
/// QR; rank deficiency or too few rows yields ok = false. Throws only on
/// dimension mismatch.
OlsResult ols(const VectorXd& y, const BoolVec& y_present, const MatrixXd& X,
              const BoolGrid& X_present, const OlsOptions& opts = {});

/// Trailing-window fits: the result at row t is estimated on rows
/// [t-window, t-1] only, so it is usable for forming expectations at t
/// without look-ahead. A window's fit additionally requires at least 75% of
/// `window` rows to survive deletion.
std::vector<OlsResult> rolling_ols(const VectorXd& y, const BoolVec& y_present,
                                   const MatrixXd& X, const BoolGrid& X_present,
                                   int window, const OlsOptions& opts = {});

/// Share of the nominal window that must survive listwise deletion.
inline constexpr double kRollingValidShare = 0.75;

}  // namespace fbt
