#include "dam/presolve.hpp"

#include <algorithm>

namespace dam {

std::pair<double, double> presolve_quantity_band(const Instance& instance, std::size_t area, std::size_t hour) {
  double hi = 0.0;
  double lo = 0.0;
  for (const auto& b : instance.blocks()) {
    if (b.area != area) continue;
    hi -= std::min(0.0, b.quantities[hour]);
    lo -= std::max(0.0, b.quantities[hour]);
  }
  for (const auto& f : instance.flex_bids()) {
    if (f.area != area) continue;
    hi -= std::min(0.0, f.quantity);
    lo -= std::max(0.0, f.quantity);
  }
  for (const auto& c : instance.interconnectors()) {
    if (c.sink == area) {
      hi += c.upper[hour];
      lo += c.lower[hour];
    }
    if (c.source == area) {
      hi -= c.lower[hour];
      lo -= c.upper[hour];
    }
  }
  return {lo, hi};
}

Grid<PriceInterval> presolve_price_bounds(const Instance& instance) {
  const auto& P = instance.price_interval();
  Grid<PriceInterval> bounds(instance.areas().size(), instance.hour_count(), P);
  for (std::size_t a = 0; a < instance.areas().size(); ++a) {
    for (std::size_t t = 0; t < instance.hour_count(); ++t) {
      auto [qlo, qhi] = presolve_quantity_band(instance, a, t);
      auto nodes = instance.curve(a, t).nodes();
      if (nodes.empty()) continue;

      std::optional<double> lo;
      for (std::size_t i = 0; i + 1 < nodes.size() && !lo; ++i) {
        const auto& n0 = nodes[i];
        const auto& n1 = nodes[i + 1];
        if (n1.quantity > qhi) continue;
        if (n0.quantity <= qhi)
          lo = n0.price;
        else
          lo = n0.price + (n0.quantity - qhi) / (n0.quantity - n1.quantity) * (n1.price - n0.price);
      }
      std::optional<double> hi;
      for (std::size_t i = nodes.size() - 1; i > 0 && !hi; --i) {
        const auto& n0 = nodes[i - 1];
        const auto& n1 = nodes[i];
        if (n0.quantity < qlo) continue;
        if (n1.quantity >= qlo)
          hi = n1.price;
        else
          hi = n0.price + (n0.quantity - qlo) / (n0.quantity - n1.quantity) * (n1.price - n0.price);
      }
      // An empty band cannot be cleared at all; keep the whole interval then.
      if (lo && hi && *lo <= *hi) bounds(a, t) = {std::clamp(*lo, P.lower, P.upper), std::clamp(*hi, P.lower, P.upper)};
    }
  }
  return bounds;
}

std::size_t PresolveFixings::excluded_count() const {
  std::size_t n = 0;
  for (auto v : block_excluded) n += v;
  for (auto v : flex_excluded.values()) n += v;
  return n;
}

PresolveFixings presolve_fixings(const Instance& instance, const Grid<PriceInterval>& bounds, double tol) {
  PresolveFixings fix;
  const std::size_t T = instance.hour_count();
  const auto& blocks = instance.blocks();
  fix.block_excluded.assign(blocks.size(), 0);
  fix.block_never_loses.assign(blocks.size(), 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    double best = 0.0;
    double worst = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const auto& box = bounds(blocks[b].area, t);
      double q = blocks[b].quantities[t];
      double s1 = (blocks[b].limit_price - box.lower) * q;
      double s2 = (blocks[b].limit_price - box.upper) * q;
      best += std::max(s1, s2);
      worst += std::min(s1, s2);
    }
    fix.block_excluded[b] = best < -tol;
    fix.block_never_loses[b] = worst >= -tol;
  }
  const auto& flex = instance.flex_bids();
  fix.flex_excluded = Grid<unsigned char>(flex.size(), T, 0);
  for (std::size_t f = 0; f < flex.size(); ++f) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto& box = bounds(flex[f].area, t);
      double best = std::max((flex[f].limit_price - box.lower) * flex[f].quantity,
                             (flex[f].limit_price - box.upper) * flex[f].quantity);
      fix.flex_excluded(f, t) = best < -tol;
    }
  }
  return fix;
}

}  // namespace dam
