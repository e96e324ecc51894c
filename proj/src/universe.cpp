#include "fbt/universe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fbt {

UniverseMask select_universe(const Panel& mv, const UniverseSpec& spec) {
  if (spec.top_n < 2) throw std::invalid_argument("universe top_n must be >= 2");

  UniverseMask mask;
  mask.start = mv.start();
  mask.stocks = mv.stocks();
  mask.member = BoolGrid::Constant(mv.rows(), mv.cols(), false);

  std::vector<Index> order(static_cast<size_t>(mv.cols()));
  for (Index r = 0; r < mv.rows(); ++r) {
    order.clear();
    for (Index c = 0; c < mv.cols(); ++c) {
      if (mv.has(r, c)) order.push_back(c);
    }
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
      const double va = mv.value(r, a);
      const double vb = mv.value(r, b);
      if (va != vb) return va > vb;
      return mv.stock(a).ticker < mv.stock(b).ticker;
    });
    const size_t take = std::min(order.size(), static_cast<size_t>(spec.top_n));
    for (size_t k = 0; k < take; ++k) mask.member(r, order[k]) = true;
  }
  return mask;
}

Series market_index(const Panel& returns, const Panel& mv, const UniverseMask& mask) {
  if (!returns.same_axes(mv) || returns.start() != mask.start ||
      returns.rows() != mask.rows() || returns.stocks() != mask.stocks) {
    throw std::invalid_argument("market_index requires aligned axes");
  }

  Series out(returns.start(), returns.rows());
  for (Index r = 1; r < returns.rows(); ++r) {
    double weight_sum = 0.0;
    double portfolio = 0.0;
    for (Index c = 0; c < returns.cols(); ++c) {
      if (!mask.member(r, c) || !returns.has(r, c) || !mv.has(r - 1, c)) continue;
      const double w = mv.value(r - 1, c);
      if (w <= 0.0) continue;
      weight_sum += w;
      portfolio += w * std::expm1(returns.value(r, c));
    }
    if (weight_sum > 0.0) out.set(r, std::log1p(portfolio / weight_sum));
  }
  return out;
}

Panel apply_mask(const Panel& p, const UniverseMask& mask) {
  if (p.start() != mask.start || p.rows() != mask.rows() || p.stocks() != mask.stocks) {
    throw std::invalid_argument("apply_mask requires aligned axes");
  }
  Panel out(p.start(), p.stocks(), p.rows());
  for (Index r = 0; r < p.rows(); ++r) {
    for (Index c = 0; c < p.cols(); ++c) {
      if (mask.member(r, c) && p.has(r, c)) out.set(r, c, p.value(r, c));
    }
  }
  return out;
}

}  // namespace fbt
