#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fbt/factors.hpp"
#include "fbt/rng.hpp"
#include "helpers.hpp"

using namespace fbt;
using testutil::make_panel;
using testutil::tickers;
using testutil::ym;

namespace {

UniverseMask full_mask(const Panel& like) {
  UniverseMask m;
  m.start = like.start();
  m.stocks = like.stocks();
  m.member = BoolGrid::Constant(like.rows(), like.cols(), true);
  return m;
}

Series constant_series(MonthStamp start, Index n, double v) {
  Series s(start, n);
  for (Index r = 0; r < n; ++r) s.set(r, v);
  return s;
}

}  // namespace

TEST_CASE("six portfolios: engineered singleton buckets") {
  // two sizes x three values, one stock per bucket
  auto ids = tickers({"LS", "MS", "HS", "LB", "MB", "HB"});
  Panel mv(ym(2000, 1), ids, 1);
  Panel btp(ym(2000, 1), ids, 1);
  Panel rets(ym(2000, 1), ids, 1);

  const double small_mv = 1.0, big_mv = 10.0;
  const double btps[3] = {0.1, 1.0, 5.0};  // L, M, H
  const double logret[6] = {0.01, 0.02, 0.03, 0.04, 0.05, 0.06};
  for (int i = 0; i < 6; ++i) {
    mv.set(0, i, i < 3 ? small_mv : big_mv);
    btp.set(0, i, btps[i % 3]);
    rets.set(0, i, logret[i]);
  }

  SortSpec spec;
  spec.weighting = Weighting::EqualWeighted;
  auto six = six_portfolios(rets, btp, mv, full_mask(rets), spec);

  CHECK(six.ls.value(0) == doctest::Approx(std::expm1(0.01)));
  CHECK(six.ms.value(0) == doctest::Approx(std::expm1(0.02)));
  CHECK(six.hs.value(0) == doctest::Approx(std::expm1(0.03)));
  CHECK(six.lb.value(0) == doctest::Approx(std::expm1(0.04)));
  CHECK(six.mb.value(0) == doctest::Approx(std::expm1(0.05)));
  CHECK(six.hb.value(0) == doctest::Approx(std::expm1(0.06)));
}

TEST_CASE("six portfolios: degenerate value spread lands everyone in M") {
  auto ids = tickers({"A", "B", "C", "D"});
  Panel mv(ym(2000, 1), ids, 1);
  Panel btp(ym(2000, 1), ids, 1);
  Panel rets(ym(2000, 1), ids, 1);
  for (int i = 0; i < 4; ++i) {
    mv.set(0, i, 1.0 + i);
    btp.set(0, i, 2.0);  // identical book-to-price
    rets.set(0, i, 0.01 * (1 + i));
  }
  auto six = six_portfolios(rets, btp, mv, full_mask(rets), SortSpec{});
  CHECK(six.ms.has(0));
  CHECK(six.mb.has(0));
  CHECK_FALSE(six.hs.has(0));
  CHECK_FALSE(six.hb.has(0));
  CHECK_FALSE(six.ls.has(0));
  CHECK_FALSE(six.lb.has(0));
}

TEST_CASE("bucket assignment equals a brute-force double sort on 60 names") {
  const int n = 60;
  std::vector<StockId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(StockId{"S" + std::to_string(100 + i)});
  Panel mv(ym(2000, 1), ids, 1);
  Panel btp(ym(2000, 1), ids, 1);
  Panel rets(ym(2000, 1), ids, 1);
  Rng rng(12345);
  for (int i = 0; i < n; ++i) {
    mv.set(0, i, std::exp(rng.normal(3.0, 1.0)));
    btp.set(0, i, rng.normal(1.0, 0.4));
    rets.set(0, i, rng.normal(0.01, 0.05));
  }

  SortSpec spec;
  spec.weighting = Weighting::EqualWeighted;
  auto six = six_portfolios(rets, btp, mv, full_mask(rets), spec);

  // independent oracle: explicit percentile interpolation + bucket means
  auto pct = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double h = (static_cast<double>(v.size()) - 1.0) * q / 100.0;
    const size_t lo = static_cast<size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - std::floor(h)) * (v[lo + 1] - v[lo]);
  };
  std::vector<double> all_mv, all_btp;
  for (int i = 0; i < n; ++i) {
    all_mv.push_back(mv.value(0, i));
    all_btp.push_back(btp.value(0, i));
  }
  const double cut = pct(all_mv, 50.0);
  const double lo_cut = pct(all_btp, 30.0);
  const double hi_cut = pct(all_btp, 70.0);

  double sum[2][3] = {};
  int count[2][3] = {};
  for (int i = 0; i < n; ++i) {
    const int s = mv.value(0, i) <= cut ? 0 : 1;
    int v = 1;
    if (btp.value(0, i) < lo_cut) v = 0;
    else if (btp.value(0, i) > hi_cut) v = 2;
    sum[s][v] += std::expm1(rets.value(0, i));
    count[s][v] += 1;
  }
  CHECK(six.ls.value(0) == doctest::Approx(sum[0][0] / count[0][0]).epsilon(1e-12));
  CHECK(six.ms.value(0) == doctest::Approx(sum[0][1] / count[0][1]).epsilon(1e-12));
  CHECK(six.hs.value(0) == doctest::Approx(sum[0][2] / count[0][2]).epsilon(1e-12));
  CHECK(six.lb.value(0) == doctest::Approx(sum[1][0] / count[1][0]).epsilon(1e-12));
  CHECK(six.mb.value(0) == doctest::Approx(sum[1][1] / count[1][1]).epsilon(1e-12));
  CHECK(six.hb.value(0) == doctest::Approx(sum[1][2] / count[1][2]).epsilon(1e-12));
}

TEST_CASE("bucket assignment survives monotone transforms of the sort variables") {
  const int n = 40;
  std::vector<StockId> ids;
  for (int i = 0; i < n; ++i) ids.push_back(StockId{"S" + std::to_string(100 + i)});
  Panel mv(ym(2000, 1), ids, 1), btp(ym(2000, 1), ids, 1), rets(ym(2000, 1), ids, 1);
  Panel mv2(ym(2000, 1), ids, 1), btp2(ym(2000, 1), ids, 1);
  Rng rng(777);
  for (int i = 0; i < n; ++i) {
    const double m = std::exp(rng.normal(2.0, 0.8));
    const double b = std::exp(rng.normal(0.0, 0.5));
    mv.set(0, i, m);
    btp.set(0, i, b);
    mv2.set(0, i, std::log(m));        // strictly increasing map
    btp2.set(0, i, 3.0 * b + 1.0);     // strictly increasing map
    rets.set(0, i, rng.normal(0.0, 0.03));
  }
  SortSpec spec;
  spec.weighting = Weighting::EqualWeighted;  // cap weights would change with MV units
  auto a = six_portfolios(rets, btp, mv, full_mask(rets), spec);
  auto b = six_portfolios(rets, btp2, mv2, full_mask(rets), spec);
  for (const auto* pair : {&a.hs, &a.ms}) (void)pair;
  CHECK(a.hs.value(0) == doctest::Approx(b.hs.value(0)).epsilon(1e-12));
  CHECK(a.ms.value(0) == doctest::Approx(b.ms.value(0)).epsilon(1e-12));
  CHECK(a.ls.value(0) == doctest::Approx(b.ls.value(0)).epsilon(1e-12));
  CHECK(a.hb.value(0) == doctest::Approx(b.hb.value(0)).epsilon(1e-12));
  CHECK(a.mb.value(0) == doctest::Approx(b.mb.value(0)).epsilon(1e-12));
  CHECK(a.lb.value(0) == doctest::Approx(b.lb.value(0)).epsilon(1e-12));
}

namespace {

SixPortfolios constant_six(double hs, double ms, double ls, double hb, double mb,
                           double lb) {
  const MonthStamp start = ym(2000, 1);
  SixPortfolios six{constant_series(start, 3, hs), constant_series(start, 3, ms),
                    constant_series(start, 3, ls), constant_series(start, 3, hb),
                    constant_series(start, 3, mb), constant_series(start, 3, lb)};
  return six;
}

}  // namespace

TEST_CASE("smb and hml fixtures") {
  CHECK(smb(constant_six(0.02, 0.02, 0.02, 0.01, 0.01, 0.01)).value(0) ==
        doctest::Approx(0.01).epsilon(1e-12));
  CHECK(smb(constant_six(0.03, 0.03, 0.03, 0.03, 0.03, 0.03)).value(0) ==
        doctest::Approx(0.0));
  CHECK(hml(constant_six(0.03, 0.0, 0.03, 0.03, 0.0, 0.01)).value(0) ==
        doctest::Approx(0.5 * ((0.03 + 0.03) - (0.01 + 0.03))).epsilon(1e-12));
  CHECK(hml(constant_six(0.02, 0.5, 0.02, 0.02, -0.7, 0.02)).value(0) ==
        doctest::Approx(0.0));  // the M buckets never enter

  // swapping small and big labels flips SMB's sign
  auto six = constant_six(0.05, 0.01, -0.02, 0.03, 0.00, 0.04);
  auto flipped = constant_six(0.03, 0.00, 0.04, 0.05, 0.01, -0.02);
  CHECK(smb(six).value(0) == doctest::Approx(-smb(flipped).value(0)).epsilon(1e-12));
}

TEST_CASE("smb/hml missing whenever any component is") {
  auto six = constant_six(0.01, 0.01, 0.01, 0.01, 0.01, 0.01);
  six.mb.clear(1);
  CHECK_FALSE(smb(six).has(1));
  CHECK_FALSE(hml(six).has(1));
  CHECK(smb(six).has(0));
}

TEST_CASE("spread factors ignore a constant added to every stock") {
  Rng rng(2024);
  auto base = constant_six(0, 0, 0, 0, 0, 0);
  for (Index r = 0; r < 3; ++r) {
    base.hs.set(r, rng.normal(0, 0.02));
    base.ms.set(r, rng.normal(0, 0.02));
    base.ls.set(r, rng.normal(0, 0.02));
    base.hb.set(r, rng.normal(0, 0.02));
    base.mb.set(r, rng.normal(0, 0.02));
    base.lb.set(r, rng.normal(0, 0.02));
  }
  auto shifted = base;
  const double c = 0.0123;
  for (Index r = 0; r < 3; ++r) {
    shifted.hs.set(r, base.hs.value(r) + c);
    shifted.ms.set(r, base.ms.value(r) + c);
    shifted.ls.set(r, base.ls.value(r) + c);
    shifted.hb.set(r, base.hb.value(r) + c);
    shifted.mb.set(r, base.mb.value(r) + c);
    shifted.lb.set(r, base.lb.value(r) + c);
  }
  for (Index r = 0; r < 3; ++r) {
    CHECK(smb(base).value(r) == doctest::Approx(smb(shifted).value(r)).epsilon(1e-12));
    CHECK(hml(base).value(r) == doctest::Approx(hml(shifted).value(r)).epsilon(1e-12));
  }
}

TEST_CASE("cumulative levels compound gross returns") {
  FactorSeries fs;
  fs.mkt = constant_series(ym(2000, 1), 3, std::log(1.01));
  fs.rfr = constant_series(ym(2000, 1), 3, std::log(1.005));
  fs.smb = constant_series(ym(2000, 1), 3, 0.02);
  fs.hml = constant_series(ym(2000, 1), 3, -0.01);
  fs.smb.clear(1);  // missing month carries the level flat

  auto levels = factor_levels(fs);
  CHECK(levels.mkt.value(2) == doctest::Approx(1.01 * 1.01 * 1.01).epsilon(1e-12));
  CHECK(levels.smb.value(0) == doctest::Approx(1.02).epsilon(1e-12));
  CHECK(levels.smb.value(1) == doctest::Approx(1.02).epsilon(1e-12));
  CHECK(levels.smb.value(2) == doctest::Approx(1.02 * 1.02).epsilon(1e-12));
  CHECK(levels.hml.value(2) == doctest::Approx(0.99 * 0.99 * 0.99).epsilon(1e-12));
}

TEST_CASE("percentile interpolates and clamps") {
  CHECK(percentile({1, 2, 3, 4}, 50.0) == doctest::Approx(2.5));
  CHECK(percentile({5.0}, 30.0) == doctest::Approx(5.0));
  CHECK(percentile({1, 2, 3}, 0.0) == doctest::Approx(1.0));
  CHECK(percentile({1, 2, 3}, 100.0) == doctest::Approx(3.0));
  CHECK_THROWS_AS(static_cast<void>(percentile({}, 50.0)), std::invalid_argument);
}
