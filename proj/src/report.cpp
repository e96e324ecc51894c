#include "fbt/report.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "fbt/csv.hpp"

namespace fbt {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

void close_out(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

void emit_cell(std::ofstream& out, const Series& s, Index r) {
  if (s.has(r)) out << format_double(s.value(r));
}

}  // namespace

void write_factors_csv(const std::string& path, const FactorSeries& fs) {
  auto out = open_out(path);
  out << "date,mkt,rfr,smb,hml\n";
  for (Index r = 0; r < fs.mkt.size(); ++r) {
    out << fs.mkt.date(r).str() << ",";
    emit_cell(out, fs.mkt, r);
    out << ",";
    emit_cell(out, fs.rfr, r);
    out << ",";
    emit_cell(out, fs.smb, r);
    out << ",";
    emit_cell(out, fs.hml, r);
    out << "\n";
  }
  close_out(out, path);
}

void write_factor_levels_csv(const std::string& path, const FactorLevels& levels) {
  auto out = open_out(path);
  out << "date,mkt,rfr,smb,hml\n";
  for (Index r = 0; r < levels.mkt.size(); ++r) {
    out << levels.mkt.date(r).str() << ",";
    emit_cell(out, levels.mkt, r);
    out << ",";
    emit_cell(out, levels.rfr, r);
    out << ",";
    emit_cell(out, levels.smb, r);
    out << ",";
    emit_cell(out, levels.hml, r);
    out << "\n";
  }
  close_out(out, path);
}

void write_payoffs_csv(const std::string& path, const CbmFit& fit,
                       const SmoothedCbm& smoothed) {
  auto out = open_out(path);
  out << "date,alpha";
  for (const auto& key : fit.keys) out << "," << key;
  out << ",sm_alpha";
  for (const auto& key : fit.keys) out << ",sm_" << key;
  // per-fit diagnostics: cross-section size and design conditioning
  out << ",n_used,condition\n";

  const Index k = static_cast<Index>(fit.keys.size());
  for (Index t = 0; t < fit.rows(); ++t) {
    out << (fit.start + static_cast<int>(t)).str();
    out << ",";
    if (fit.ok(t)) out << format_double(100.0 * fit.alpha(t));
    for (Index j = 0; j < k; ++j) {
      out << ",";
      if (fit.ok(t)) out << format_double(100.0 * fit.delta(t, j));
    }
    out << ",";
    if (smoothed.ok(t)) out << format_double(100.0 * smoothed.alpha(t));
    for (Index j = 0; j < k; ++j) {
      out << ",";
      if (smoothed.ok(t)) out << format_double(100.0 * smoothed.delta(t, j));
    }
    out << "," << fit.n_used(t) << ",";
    if (fit.ok(t)) out << format_double(fit.condition(t));
    out << "\n";
  }
  close_out(out, path);
}

void write_table1_csv(const std::string& path, const Table1& table) {
  auto out = open_out(path);
  out << "model,alpha";
  for (const auto& col : table1_columns()) out << "," << col;
  out << "\n";
  for (const auto& row : table.rows) {
    out << row.model << ",";
    if (row.has_alpha) out << format_double(row.median_alpha_pct);
    for (const auto& col : table1_columns()) {
      out << ",";
      auto it = row.median_delta_pct.find(col);
      if (it != row.median_delta_pct.end()) out << format_double(it->second);
    }
    out << "\n";
  }
  close_out(out, path);
}

void write_quintiles_csv(const std::string& path,
                         const std::map<std::string, QuintileStats>& stats) {
  auto out = open_out(path);
  out << "model,bin,ann_return_pct,ann_vol_pct\n";
  for (const auto& [model, s] : stats) {
    for (size_t b = 0; b < s.ann_return_pct.size(); ++b) {
      out << model << "," << (b + 1) << "," << format_double(s.ann_return_pct[b])
          << "," << format_double(s.ann_vol_pct[b]) << "\n";
    }
  }
  close_out(out, path);
}

void write_quintile_returns_csv(const std::string& path,
                                const std::map<std::string, QuintileStats>& stats) {
  auto out = open_out(path);
  out << "model,bin,date,log_return\n";
  for (const auto& [model, s] : stats) {
    for (size_t b = 0; b < s.bin_log_returns.size(); ++b) {
      const Series& series = s.bin_log_returns[b];
      for (Index r = 0; r < series.size(); ++r) {
        if (!series.has(r)) continue;
        out << model << "," << (b + 1) << "," << series.date(r).str() << ","
            << format_double(series.value(r)) << "\n";
      }
    }
  }
  close_out(out, path);
}

void write_quintile_fit_json(const std::string& path,
                             const std::map<std::string, QuintileStats>& stats) {
  nlohmann::json doc;
  for (const auto& [model, s] : stats) {
    doc[model] = {
        {"return_vs_bin", {{"slope", s.return_line.slope},
                           {"intercept", s.return_line.intercept}}},
        {"vol_vs_bin",
         {{"slope", s.vol_line.slope}, {"intercept", s.vol_line.intercept}}},
    };
  }
  auto out = open_out(path);
  out << doc.dump(2) << "\n";
  close_out(out, path);
}

}  // namespace fbt
