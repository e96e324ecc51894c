#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "fbt/csv.hpp"
#include "fbt/ingest.hpp"
#include "fbt/rng.hpp"
#include "helpers.hpp"

using namespace fbt;
using testutil::make_panel;
using testutil::random_panel;
using testutil::tickers;
using testutil::ym;

namespace {

std::filesystem::path temp_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() / (std::string("fbt_ingest_") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

}  // namespace

TEST_CASE("log returns: fixtures and missing rules") {
  auto tri = make_panel(ym(2000, 1), tickers({"A", "B", "C"}),
                        {{100.0, 100.0, 100.0},
                         {100.0, 110.0, 0.0},
                         {100.0, 110.0, 50.0}});
  auto r = log_returns(tri);

  CHECK_FALSE(r.has(0, 0));  // no prior level
  CHECK(r.value(1, 0) == doctest::Approx(0.0));
  CHECK(r.value(1, 1) == doctest::Approx(0.0953102).epsilon(1e-6));
  CHECK_FALSE(r.has(1, 2));  // zero-valued level
  CHECK_FALSE(r.has(2, 2));  // prior level was zero
  CHECK(r.value(2, 1) == doctest::Approx(0.0));
}

TEST_CASE("log returns cumulate back to log levels between gaps") {
  auto tri = random_panel(ym(2000, 1), 40, 4, 5);
  Panel levels(tri.start(), tri.stocks(), tri.rows());
  for (Index r = 0; r < tri.rows(); ++r) {
    for (Index c = 0; c < tri.cols(); ++c) {
      levels.set(r, c, 100.0 * std::exp(0.3 * tri.value(r, c)));
    }
  }
  auto rets = log_returns(levels);
  for (Index c = 0; c < levels.cols(); ++c) {
    double acc = std::log(levels.value(0, c));
    for (Index r = 1; r < levels.rows(); ++r) {
      acc += rets.value(r, c);
      CHECK(acc == doctest::Approx(std::log(levels.value(r, c))).epsilon(1e-10));
    }
  }
}

TEST_CASE("momentum fixtures") {
  const int T = 20;
  Panel rets(ym(2000, 1), tickers({"A"}), T);
  for (Index r = 0; r < T; ++r) rets.set(r, 0, 0.01);

  auto moml = momentum(rets, 12, 1);
  CHECK_FALSE(moml.has(12, 0));  // needs returns back to t-13
  CHECK(moml.value(13, 0) == doctest::Approx(0.12));

  auto m10 = momentum(rets, 1, 0);
  CHECK(m10.value(5, 0) == doctest::Approx(rets.value(4, 0)));
}

TEST_CASE("momentum equals a brute-force index sum on random data") {
  auto rets = random_panel(ym(2000, 1), 20, 3, 17, 0.1);
  auto moml = momentum(rets, 12, 1);
  for (Index c = 0; c < rets.cols(); ++c) {
    for (Index t = 0; t < rets.rows(); ++t) {
      // independent oracle: sum over explicit rows t-2 .. t-13
      double sum = 0.0;
      bool full = t - 13 >= 0;
      for (Index s = t - 13; full && s <= t - 2; ++s) {
        if (!rets.has(s, c)) {
          full = false;
        } else {
          sum += rets.value(s, c);
        }
      }
      CHECK(moml.has(t, c) == full);
      if (full) CHECK(moml.value(t, c) == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("momentum window splits additively") {
  auto rets = random_panel(ym(2000, 1), 30, 2, 9);
  auto whole = momentum(rets, 7, 1);
  auto front = momentum(rets, 3, 1);
  auto back = momentum(rets, 4, 4);
  for (Index c = 0; c < rets.cols(); ++c) {
    for (Index t = 0; t < rets.rows(); ++t) {
      if (!whole.has(t, c)) continue;
      CHECK(whole.value(t, c) ==
            doctest::Approx(front.value(t, c) + back.value(t, c)).epsilon(1e-12));
    }
  }
}

TEST_CASE("ncd index: yield fixtures and compounding") {
  Series y(ym(2000, 1), 4);
  for (Index r = 0; r < 4; ++r) y.set(r, 0.08);

  auto idx = ncd_index(y);
  CHECK_FALSE(idx.ret.has(0));  // no prior quote
  CHECK(idx.ret.value(1) == doctest::Approx(0.0066007).epsilon(1e-4));
  CHECK(idx.ret.value(1) == doctest::Approx(std::log(1.02) / 3.0).epsilon(1e-12));
  // three accrual months at a constant quote compound to one quarter
  CHECK(idx.level.value(3) == doctest::Approx(1.02).epsilon(1e-12));

  Series zero(ym(2000, 1), 2);
  zero.set(0, 0.0);
  zero.set(1, 0.0);
  CHECK(ncd_index(zero).ret.value(1) == doctest::Approx(0.0));

  Series gaps(ym(2000, 1), 3);
  gaps.set(0, 0.08);
  auto gi = ncd_index(gaps);
  CHECK(gi.ret.has(1));
  CHECK_FALSE(gi.ret.has(2));                    // missing quote at t-1
  CHECK(gi.level.value(2) == gi.level.value(1));  // index carried flat
}

TEST_CASE("ncd returns strictly positive for positive yields") {
  Rng rng(4);
  Series y(ym(2000, 1), 50);
  for (Index r = 0; r < 50; ++r) y.set(r, 0.01 + 0.2 * rng.uniform());
  auto idx = ncd_index(y);
  for (Index r = 1; r < 50; ++r) CHECK(idx.ret.value(r) > 0.0);
}

namespace {

std::string wide_csv_body(const std::vector<std::string>& dates) {
  std::string s = "date,AAA,BBB\n";
  double v = 100.0;
  for (const auto& d : dates) {
    s += d + "," + format_double(v) + "," + format_double(v * 2) + "\n";
    v += 1.0;
  }
  return s;
}

}  // namespace

TEST_CASE("wide csv round trip and parse errors") {
  auto dir = temp_dir("csv");

  SUBCASE("round trip") {
    auto p = random_panel(ym(1994, 1), 30, 5, 77, 0.2);
    write_wide_csv((dir / "p.csv").string(), p);
    auto q = read_wide_csv((dir / "p.csv").string());
    CHECK(q == p);
  }

  SUBCASE("gap month is rejected with its location") {
    write_file(dir / "gap.csv", wide_csv_body({"2000-01", "2000-02", "2000-04"}));
    CHECK_THROWS_WITH_AS(static_cast<void>(read_wide_csv((dir / "gap.csv").string())),
                         doctest::Contains("gap between 2000-02 and 2000-04"),
                         std::runtime_error);
  }

  SUBCASE("duplicate ticker is rejected") {
    write_file(dir / "dup.csv", "date,AAA,AAA\n2000-01,1,2\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(read_wide_csv((dir / "dup.csv").string())),
                         doctest::Contains("duplicate ticker"), std::runtime_error);
  }

  SUBCASE("non-monotone dates are rejected") {
    write_file(dir / "mono.csv", wide_csv_body({"2000-02", "2000-01"}));
    CHECK_THROWS_WITH_AS(static_cast<void>(read_wide_csv((dir / "mono.csv").string())),
                         doctest::Contains("not strictly increasing"),
                         std::runtime_error);
  }

  SUBCASE("malformed number names file and row") {
    write_file(dir / "bad.csv", "date,AAA,BBB\n2000-01,1,2\n2000-02,oops,2\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(read_wide_csv((dir / "bad.csv").string())),
                         doctest::Contains("bad.csv:3"), std::runtime_error);
  }
}

namespace {

RawDataset tiny_raw(int T) {
  RawDataset raw;
  auto grid = [&](double base, double step) {
    Panel p(ym(2000, 1), tickers({"X", "Y"}), T);
    for (Index r = 0; r < T; ++r) {
      p.set(r, 0, base + step * static_cast<double>(r));
      p.set(r, 1, base + 1.0 + step * static_cast<double>(r));
    }
    return p;
  };
  raw.tri = grid(100.0, 1.0);
  raw.btp = grid(0.5, 0.01);
  raw.mv = grid(10.0, 0.1);
  raw.dy = grid(0.03, 0.0);
  raw.ey = grid(0.08, 0.0);
  raw.vol = grid(1000.0, 5.0);
  raw.ncd_yield = Series(ym(2000, 1), T);
  for (Index r = 0; r < T; ++r) raw.ncd_yield.set(r, 0.08);
  return raw;
}

}  // namespace

TEST_CASE("assemble applies the quarter lag to fundamentals") {
  auto raw = tiny_raw(10);
  auto data = assemble_dataset(raw, nullptr);

  const Panel& btp = data.characteristics.at("BTP");
  CHECK_FALSE(btp.has(2, 0));
  CHECK(btp.value(3, 0) == doctest::Approx(raw.btp.value(0, 0)));
  CHECK(btp.value(9, 1) == doctest::Approx(raw.btp.value(6, 1)));
  CHECK(data.characteristics.at("VOL") == raw.vol);  // market data, not lagged
  CHECK(data.characteristics.at("MV").value(5, 0) ==
        doctest::Approx(raw.mv.value(2, 0)));

  // returns panel matches the raw levels
  CHECK(data.returns.value(1, 0) ==
        doctest::Approx(std::log(raw.tri.value(1, 0) / raw.tri.value(0, 0))));
}

TEST_CASE("overrides replace cells before the lag is applied") {
  auto raw = tiny_raw(10);
  OverrideFile ov;
  ov.entries.push_back({StockId{"X"}, "btp", ym(2000, 2), 9.99});
  auto data = assemble_dataset(raw, &ov);

  const Panel& btp = data.characteristics.at("BTP");
  // override lands at raw row 1, so it surfaces at characteristic row 4
  CHECK(btp.value(4, 0) == doctest::Approx(9.99));
  // everything else unchanged relative to the no-override run
  auto base = assemble_dataset(tiny_raw(10), nullptr);
  for (Index r = 0; r < btp.rows(); ++r) {
    for (Index c = 0; c < btp.cols(); ++c) {
      if (r == 4 && c == 0) continue;
      CHECK(btp.value(r, c) == base.characteristics.at("BTP").value(r, c));
    }
  }
}

TEST_CASE("overrides referencing unknown stocks or fields fail") {
  auto raw = tiny_raw(6);
  OverrideFile bad_stock;
  bad_stock.entries.push_back({StockId{"ZZZ"}, "btp", ym(2000, 2), 1.0});
  CHECK_THROWS_WITH_AS(static_cast<void>(assemble_dataset(raw, &bad_stock)),
                       doctest::Contains("unknown ticker"), std::runtime_error);

  auto raw2 = tiny_raw(6);
  OverrideFile bad_field;
  bad_field.entries.push_back({StockId{"X"}, "tri", ym(2000, 2), 1.0});
  CHECK_THROWS_WITH_AS(static_cast<void>(assemble_dataset(raw2, &bad_field)),
                       doctest::Contains("unknown field"), std::runtime_error);
}

TEST_CASE("load_dataset reads the csv family end to end") {
  auto dir = temp_dir("load");
  auto raw = tiny_raw(12);
  write_wide_csv((dir / "tri.csv").string(), raw.tri);
  write_wide_csv((dir / "btp.csv").string(), raw.btp);
  write_wide_csv((dir / "mv.csv").string(), raw.mv);
  write_wide_csv((dir / "dy.csv").string(), raw.dy);
  write_wide_csv((dir / "ey.csv").string(), raw.ey);
  write_wide_csv((dir / "vol.csv").string(), raw.vol);
  write_series_csv((dir / "ncd.csv").string(), raw.ncd_yield, "yield");
  write_file(dir / "ov.csv", "ticker,field,date,value\nX,btp,2000-02,9.99\n");

  auto paths = DatasetPaths::in_dir(dir.string());
  paths.overrides = (dir / "ov.csv").string();
  auto data = load_dataset(paths);
  CHECK(data.characteristics.at("BTP").value(4, 0) == doctest::Approx(9.99));

  OverrideFile parsed = read_override_csv((dir / "ov.csv").string());
  REQUIRE(parsed.entries.size() == 1);
  CHECK(parsed.entries[0].field == "btp");
  CHECK(parsed.entries[0].date == ym(2000, 2));
}
