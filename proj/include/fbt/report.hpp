#pragma once

#include <map>
#include <string>

#include "fbt/backtest.hpp"
#include "fbt/factors.hpp"
#include "fbt/models.hpp"

namespace fbt {

/// Plot-ready CSV/JSON emitters. All numeric cells use the shortest
/// round-trip decimal form, missing values stay empty, so identical inputs
/// give byte-identical files.

// date,mkt,rfr,smb,hml -- monthly returns
void write_factors_csv(const std::string& path, const FactorSeries& fs);

// date,mkt,rfr,smb,hml -- cumulative gross levels
void write_factor_levels_csv(const std::string& path, const FactorLevels& levels);

// date,alpha,<keys...>,sm_alpha,sm_<keys...> -- percent units
void write_payoffs_csv(const std::string& path, const CbmFit& fit,
                       const SmoothedCbm& smoothed);

// model,alpha,BTP,MV,Mkt,MOML,MOMS,EY,DY,VOL -- medians in percent,
// blank where the model does not carry the characteristic
void write_table1_csv(const std::string& path, const Table1& table);

// model,bin,ann_return_pct,ann_vol_pct
void write_quintiles_csv(const std::string& path,
                         const std::map<std::string, QuintileStats>& stats);

// model,bin,date,log_return
void write_quintile_returns_csv(const std::string& path,
                                const std::map<std::string, QuintileStats>& stats);

// best-fit lines of the quintile charts
void write_quintile_fit_json(const std::string& path,
                             const std::map<std::string, QuintileStats>& stats);

}  // namespace fbt
