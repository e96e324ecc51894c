#include "fbt/regress.hpp"

#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fbt {

namespace {

OlsResult solve_rows(const VectorXd& y, const MatrixXd& X,
                     const std::vector<Index>& rows, bool intercept,
                     int min_surplus) {
  OlsResult out;
  out.rows_used = rows;
  out.n_used = static_cast<int>(rows.size());

  const Index p = X.cols() + (intercept ? 1 : 0);
  if (out.n_used < p + min_surplus || out.n_used < p) return out;

  MatrixXd design(out.n_used, p);
  VectorXd response(out.n_used);
  for (Index i = 0; i < out.n_used; ++i) {
    const Index r = rows[static_cast<size_t>(i)];
    Index j = 0;
    if (intercept) design(i, j++) = 1.0;
    for (Index c = 0; c < X.cols(); ++c) design(i, j++) = X(r, c);
    response(i) = y(r);
  }

  Eigen::ColPivHouseholderQR<MatrixXd> qr(design);
  if (qr.rank() < p) return out;

  out.coefficients = qr.solve(response);
  out.residuals = response - design * out.coefficients;
  const VectorXd diag = qr.matrixR().diagonal().cwiseAbs();
  const double dmin = diag.minCoeff();
  out.condition = dmin > 0.0 ? diag.maxCoeff() / dmin
                             : std::numeric_limits<double>::infinity();
  out.ok = true;
  return out;
}

}  // namespace

OlsResult ols(const VectorXd& y, const BoolVec& y_present, const MatrixXd& X,
              const BoolGrid& X_present, const OlsOptions& opts) {
  if (y.size() != y_present.size() || X.rows() != X_present.rows() ||
      X.cols() != X_present.cols() || y.size() != X.rows()) {
    throw std::invalid_argument("ols: response/design dimensions disagree");
  }

  std::vector<Index> rows;
  rows.reserve(static_cast<size_t>(y.size()));
  for (Index r = 0; r < y.size(); ++r) {
    if (!y_present(r)) continue;
    bool complete = true;
    for (Index c = 0; c < X.cols(); ++c) {
      if (!X_present(r, c)) {
        complete = false;
        break;
      }
    }
    if (complete) rows.push_back(r);
  }
  return solve_rows(y, X, rows, opts.intercept, opts.min_surplus);
}

std::vector<OlsResult> rolling_ols(const VectorXd& y, const BoolVec& y_present,
                                   const MatrixXd& X, const BoolGrid& X_present,
                                   int window, const OlsOptions& opts) {
  if (window < 1) throw std::invalid_argument("rolling_ols: window must be >= 1");
  if (y.size() != y_present.size() || X.rows() != X_present.rows() ||
      y.size() != X.rows()) {
    throw std::invalid_argument("rolling_ols: response/design dimensions disagree");
  }

  const int need = static_cast<int>(std::ceil(kRollingValidShare * window));
  std::vector<OlsResult> out(static_cast<size_t>(y.size()));
  std::vector<Index> rows;
  for (Index t = 0; t < y.size(); ++t) {
    rows.clear();
    const Index lo = std::max<Index>(0, t - window);
    for (Index r = lo; r < t; ++r) {
      if (!y_present(r)) continue;
      bool complete = true;
      for (Index c = 0; c < X.cols(); ++c) {
        if (!X_present(r, c)) {
          complete = false;
          break;
        }
      }
      if (complete) rows.push_back(r);
    }
    if (static_cast<int>(rows.size()) < need) {
      out[static_cast<size_t>(t)].n_used = static_cast<int>(rows.size());
      continue;
    }
    out[static_cast<size_t>(t)] = solve_rows(y, X, rows, opts.intercept, opts.min_surplus);
  }
  return out;
}

}  // namespace fbt
