#include "fbt/factors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fbt {

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  if (pct < 0.0 || pct > 100.0) throw std::invalid_argument("pct outside [0,100]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * pct / 100.0;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

namespace {

struct Member {
  Index col;
  double btp;
  double mv;
  double simple_ret;
};

struct Bucket {
  double weighted = 0.0;
  double weight = 0.0;

  void add(double simple_ret, double w) {
    weighted += w * simple_ret;
    weight += w;
  }
  bool empty() const { return weight <= 0.0; }
  double ret() const { return weighted / weight; }
};

}  // namespace

SixPortfolios six_portfolios(const Panel& returns, const Panel& btp, const Panel& mv,
                             const UniverseMask& mask, const SortSpec& spec) {
  if (!returns.same_axes(btp) || !returns.same_axes(mv) ||
      returns.start() != mask.start || returns.rows() != mask.rows() ||
      returns.stocks() != mask.stocks) {
    throw std::invalid_argument("six_portfolios requires aligned axes");
  }
  if (!(0.0 < spec.value_breakpoint_low &&
        spec.value_breakpoint_low < spec.value_breakpoint_high &&
        spec.value_breakpoint_high < 100.0)) {
    throw std::invalid_argument("value breakpoints must satisfy 0 < low < high < 100");
  }

  const Index n = returns.rows();
  SixPortfolios out{Series(returns.start(), n), Series(returns.start(), n),
                    Series(returns.start(), n), Series(returns.start(), n),
                    Series(returns.start(), n), Series(returns.start(), n)};

  std::vector<Member> members;
  std::vector<double> mvs, btps;
  for (Index r = 0; r < n; ++r) {
    members.clear();
    mvs.clear();
    btps.clear();
    for (Index c = 0; c < returns.cols(); ++c) {
      if (!mask.member(r, c) || !returns.has(r, c) || !btp.has(r, c) || !mv.has(r, c)) {
        continue;
      }
      members.push_back({c, btp.value(r, c), mv.value(r, c),
                         std::expm1(returns.value(r, c))});
      mvs.push_back(mv.value(r, c));
      btps.push_back(btp.value(r, c));
    }
    if (members.empty()) continue;

    const double size_cut = percentile(mvs, spec.size_breakpoint);
    const double value_lo = percentile(btps, spec.value_breakpoint_low);
    const double value_hi = percentile(btps, spec.value_breakpoint_high);

    // Value assignment keeps a degenerate spread entirely in M.
    Bucket bucket[2][3];  // [small|big][L|M|H]
    for (const Member& m : members) {
      const int size_ix = m.mv <= size_cut ? 0 : 1;
      int value_ix = 1;
      if (m.btp < value_lo) value_ix = 0;
      else if (m.btp > value_hi) value_ix = 2;
      const double w = spec.weighting == Weighting::CapWeighted ? m.mv : 1.0;
      if (w > 0.0) bucket[size_ix][value_ix].add(m.simple_ret, w);
    }

    auto emit = [&](Series& s, const Bucket& b) {
      if (!b.empty()) s.set(r, b.ret());
    };
    emit(out.ls, bucket[0][0]);
    emit(out.ms, bucket[0][1]);
    emit(out.hs, bucket[0][2]);
    emit(out.lb, bucket[1][0]);
    emit(out.mb, bucket[1][1]);
    emit(out.hb, bucket[1][2]);
  }
  return out;
}

namespace {

Series combine(const SixPortfolios& six,
               double (*f)(double hs, double ms, double ls, double hb, double mb,
                           double lb)) {
  const Series& ref = six.hs;
  Series out(ref.start(), ref.size());
  for (Index r = 0; r < ref.size(); ++r) {
    if (six.hs.has(r) && six.ms.has(r) && six.ls.has(r) && six.hb.has(r) &&
        six.mb.has(r) && six.lb.has(r)) {
      out.set(r, f(six.hs.value(r), six.ms.value(r), six.ls.value(r),
                   six.hb.value(r), six.mb.value(r), six.lb.value(r)));
    }
  }
  return out;
}

}  // namespace

Series smb(const SixPortfolios& six) {
  return combine(six, [](double hs, double ms, double ls, double hb, double mb,
                         double lb) {
    return ((hs + ms + ls) - (hb + mb + lb)) / 3.0;
  });
}

Series hml(const SixPortfolios& six) {
  return combine(six, [](double hs, double, double ls, double hb, double, double lb) {
    return ((hb + hs) - (lb + ls)) / 2.0;
  });
}

FactorSeries build_factor_series(const Dataset& data, const UniverseMask& mask,
                                 const SortSpec& spec) {
  FactorSeries fs;
  const Panel& mv = data.characteristics.at("MV");
  const Panel& btp = data.characteristics.at("BTP");
  fs.mkt = market_index(data.returns, mv, mask);
  fs.rfr = ncd_index(data.raw.ncd_yield).ret;
  SixPortfolios six = six_portfolios(data.returns, btp, mv, mask, spec);
  fs.smb = smb(six);
  fs.hml = hml(six);
  return fs;
}

namespace {

Series cumulate(const Series& returns, bool log_returns_in) {
  Series out(returns.start(), returns.size());
  double level = 1.0;
  for (Index r = 0; r < returns.size(); ++r) {
    if (returns.has(r)) {
      level *= log_returns_in ? std::exp(returns.value(r)) : 1.0 + returns.value(r);
    }
    out.set(r, level);
  }
  return out;
}

}  // namespace

FactorLevels factor_levels(const FactorSeries& fs) {
  FactorLevels out;
  out.mkt = cumulate(fs.mkt, true);
  out.rfr = cumulate(fs.rfr, true);
  out.smb = cumulate(fs.smb, false);
  out.hml = cumulate(fs.hml, false);
  return out;
}

}  // namespace fbt
