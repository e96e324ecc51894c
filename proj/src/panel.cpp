#include "fbt/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace fbt {

MonthStamp MonthStamp::from_ym(int year, int month) {
  if (month < 1 || month > 12) {
    throw std::invalid_argument("month out of range: " + std::to_string(month));
  }
  return MonthStamp{year * 12 + (month - 1)};
}

MonthStamp MonthStamp::parse(const std::string& iso) {
  // Expected form "YYYY-MM".
  int year = 0;
  int month = 0;
  char tail = '\0';
  if (std::sscanf(iso.c_str(), "%d-%d%c", &year, &month, &tail) != 2 ||
      iso.size() < 6 || month < 1 || month > 12) {
    throw std::invalid_argument("bad month stamp '" + iso + "' (want YYYY-MM)");
  }
  return from_ym(year, month);
}

std::string MonthStamp::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d", year(), month());
  return buf;
}

namespace {

void sanitize(MatrixXd& values, BoolGrid& present) {
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (!present(r, c) || !std::isfinite(values(r, c))) {
        present(r, c) = false;
        values(r, c) = 0.0;
      }
    }
  }
}

}  // namespace

Panel::Panel(MonthStamp start, std::vector<StockId> stocks, Index n_dates)
    : start_(start),
      stocks_(std::move(stocks)),
      values_(MatrixXd::Zero(n_dates, static_cast<Index>(stocks_.size()))),
      present_(BoolGrid::Constant(n_dates, static_cast<Index>(stocks_.size()), false)) {}

Panel::Panel(MonthStamp start, std::vector<StockId> stocks, MatrixXd values,
             BoolGrid present)
    : start_(start), stocks_(std::move(stocks)), values_(std::move(values)),
      present_(std::move(present)) {
  if (values_.rows() != present_.rows() || values_.cols() != present_.cols() ||
      values_.cols() != static_cast<Index>(stocks_.size())) {
    throw std::invalid_argument("panel grid dimensions disagree with axes");
  }
  sanitize(values_, present_);
}

Index Panel::row_of(MonthStamp m) const {
  int r = m - start_;
  if (r < 0 || r >= rows()) return -1;
  return r;
}

Index Panel::col_of(const StockId& id) const {
  auto it = std::find(stocks_.begin(), stocks_.end(), id);
  if (it == stocks_.end()) return -1;
  return static_cast<Index>(it - stocks_.begin());
}

void Panel::set(Index r, Index c, double v) {
  if (std::isfinite(v)) {
    values_(r, c) = v;
    present_(r, c) = true;
  } else {
    clear(r, c);
  }
}

void Panel::clear(Index r, Index c) {
  values_(r, c) = 0.0;
  present_(r, c) = false;
}

bool Panel::same_axes(const Panel& other) const {
  return start_ == other.start_ && rows() == other.rows() &&
         stocks_ == other.stocks_;
}

bool operator==(const Panel& a, const Panel& b) {
  return a.same_axes(b) && (a.present_ == b.present_).all() &&
         a.values_ == b.values_;
}

Series::Series(MonthStamp start, Index n_dates)
    : start_(start), values_(VectorXd::Zero(n_dates)),
      present_(BoolVec::Constant(n_dates, false)) {}

Series::Series(MonthStamp start, VectorXd values, BoolVec present)
    : start_(start), values_(std::move(values)), present_(std::move(present)) {
  if (values_.size() != present_.size()) {
    throw std::invalid_argument("series value/mask lengths disagree");
  }
  for (Index r = 0; r < values_.size(); ++r) {
    if (!present_(r) || !std::isfinite(values_(r))) {
      present_(r) = false;
      values_(r) = 0.0;
    }
  }
}

Index Series::row_of(MonthStamp m) const {
  int r = m - start_;
  if (r < 0 || r >= size()) return -1;
  return r;
}

void Series::set(Index r, double v) {
  if (std::isfinite(v)) {
    values_(r) = v;
    present_(r) = true;
  } else {
    clear(r);
  }
}

void Series::clear(Index r) {
  values_(r) = 0.0;
  present_(r) = false;
}

bool operator==(const Series& a, const Series& b) {
  return a.start_ == b.start_ && a.size() == b.size() &&
         (a.present_ == b.present_).all() && a.values_ == b.values_;
}

const std::vector<std::string>& known_characteristics() {
  static const std::vector<std::string> keys = {"BTP", "MV",  "DY",  "EY",
                                                "VOL", "MOML", "MOMS", "Mkt"};
  return keys;
}

bool is_known_characteristic(const std::string& key) {
  const auto& keys = known_characteristics();
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

void validate_axes(const CharacteristicSet& cs) {
  const Panel* first = nullptr;
  for (const auto& [key, panel] : cs.panels) {
    if (!first) {
      first = &panel;
    } else if (!first->same_axes(panel)) {
      throw std::invalid_argument("characteristic '" + key +
                                  "' does not share the set's axes");
    }
  }
}

std::vector<Panel> align(const std::vector<Panel>& panels) {
  if (panels.empty()) return {};

  MonthStamp start = panels.front().start();
  MonthStamp end = panels.front().end();
  for (const Panel& p : panels) {
    start = std::max(start, p.start());
    end = std::min(end, p.end());
  }
  if (panels.front().rows() == 0 || start > end) {
    throw std::invalid_argument("no overlapping dates");
  }

  // Union of stocks in first-seen order, so aligning already-aligned
  // panels is the identity.
  std::vector<StockId> stocks;
  for (const Panel& p : panels) {
    for (const StockId& id : p.stocks()) {
      if (std::find(stocks.begin(), stocks.end(), id) == stocks.end()) {
        stocks.push_back(id);
      }
    }
  }

  const Index n_dates = end - start + 1;
  std::vector<Panel> out;
  out.reserve(panels.size());
  for (const Panel& p : panels) {
    Panel q(start, stocks, n_dates);
    for (Index c = 0; c < q.cols(); ++c) {
      Index src_c = p.col_of(q.stock(c));
      if (src_c < 0) continue;
      for (Index r = 0; r < n_dates; ++r) {
        Index src_r = p.row_of(start + static_cast<int>(r));
        if (src_r >= 0 && p.has(src_r, src_c)) {
          q.set(r, c, p.value(src_r, src_c));
        }
      }
    }
    out.push_back(std::move(q));
  }
  return out;
}

Panel lag(const Panel& p, int k) {
  if (k < 0) throw std::invalid_argument("lag requires k >= 0");
  Panel out(p.start(), p.stocks(), p.rows());
  for (Index r = k; r < p.rows(); ++r) {
    for (Index c = 0; c < p.cols(); ++c) {
      if (p.has(r - k, c)) out.set(r, c, p.value(r - k, c));
    }
  }
  return out;
}

}  // namespace fbt
