#pragma once

#include <Eigen/Dense>

#include <compare>
#include <map>
#include <string>
#include <vector>

namespace fbt {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;
using BoolGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;
using BoolVec = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Calendar month with a total order. `index` counts months from January
/// of year 0, so stamps from different sources compare directly.
struct MonthStamp {
  int index = 0;

  static MonthStamp from_ym(int year, int month);
  static MonthStamp parse(const std::string& iso);  // "YYYY-MM"

  int year() const { return index / 12; }
  int month() const { return index % 12 + 1; }
  MonthStamp next() const { return MonthStamp{index + 1}; }
  std::string str() const;

  auto operator<=>(const MonthStamp&) const = default;
};

inline MonthStamp operator+(MonthStamp m, int k) { return MonthStamp{m.index + k}; }
inline MonthStamp operator-(MonthStamp m, int k) { return MonthStamp{m.index - k}; }
inline int operator-(MonthStamp a, MonthStamp b) { return a.index - b.index; }

struct StockId {
  std::string ticker;
  auto operator<=>(const StockId&) const = default;
};

/// Monthly date x stock grid with an explicit presence mask.
///
/// Dates are contiguous by construction (start month + row index). A cell
/// is either a finite value or missing; writing a non-finite value marks
/// the cell missing, so NaN/inf never leave a Panel. Missing cells store
/// 0.0 internally, which keeps whole-grid comparisons byte-stable.
class Panel {
 public:
  Panel() = default;
  Panel(MonthStamp start, std::vector<StockId> stocks, Index n_dates);
  Panel(MonthStamp start, std::vector<StockId> stocks, MatrixXd values,
        BoolGrid present);

  Index rows() const { return values_.rows(); }
  Index cols() const { return values_.cols(); }

  MonthStamp start() const { return start_; }
  MonthStamp date(Index r) const { return start_ + static_cast<int>(r); }
  MonthStamp end() const { return start_ + static_cast<int>(rows() - 1); }
  /// Row of a month, or -1 when outside the date range.
  Index row_of(MonthStamp m) const;

  const std::vector<StockId>& stocks() const { return stocks_; }
  const StockId& stock(Index c) const { return stocks_[static_cast<size_t>(c)]; }
  /// Column of a ticker, or -1 when absent.
  Index col_of(const StockId& id) const;

  bool has(Index r, Index c) const { return present_(r, c); }
  double value(Index r, Index c) const { return values_(r, c); }

  void set(Index r, Index c, double v);
  void clear(Index r, Index c);

  const MatrixXd& values() const { return values_; }
  const BoolGrid& present() const { return present_; }

  bool same_axes(const Panel& other) const;

  friend bool operator==(const Panel& a, const Panel& b);

 private:
  MonthStamp start_{};
  std::vector<StockId> stocks_;
  MatrixXd values_;
  BoolGrid present_;
};

/// Monthly time series with a presence mask; same cell conventions as Panel.
class Series {
 public:
  Series() = default;
  Series(MonthStamp start, Index n_dates);
  Series(MonthStamp start, VectorXd values, BoolVec present);

  Index size() const { return values_.size(); }
  MonthStamp start() const { return start_; }
  MonthStamp date(Index r) const { return start_ + static_cast<int>(r); }
  MonthStamp end() const { return start_ + static_cast<int>(size() - 1); }
  Index row_of(MonthStamp m) const;

  bool has(Index r) const { return present_(r); }
  double value(Index r) const { return values_(r); }

  void set(Index r, double v);
  void clear(Index r);

  const VectorXd& values() const { return values_; }
  const BoolVec& present() const { return present_; }

  friend bool operator==(const Series& a, const Series& b);

 private:
  MonthStamp start_{};
  VectorXd values_;
  BoolVec present_;
};

/// Named characteristic panels. All members must share identical axes;
/// validate_axes checks that after assembly.
struct CharacteristicSet {
  std::map<std::string, Panel> panels;

  bool contains(const std::string& key) const { return panels.count(key) > 0; }
  const Panel& at(const std::string& key) const { return panels.at(key); }
};

/// Characteristic keys the model layer understands. "Mkt" is the trailing
/// CAPM beta inserted by the model suite, not an ingested field.
const std::vector<std::string>& known_characteristics();
bool is_known_characteristic(const std::string& key);

void validate_axes(const CharacteristicSet& cs);

/// Restrict panels to the intersection of their date ranges and the union
/// of their stocks (first-seen column order). Absent stocks become missing
/// columns. Throws std::invalid_argument when no dates overlap.
std::vector<Panel> align(const std::vector<Panel>& panels);

/// Shift values forward in time by k months: out(t) = in(t-k). The first k
/// rows are missing; k >= rows yields an all-missing panel.
Panel lag(const Panel& p, int k);

}  // namespace fbt
