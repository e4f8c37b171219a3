#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dam/types.hpp"

namespace dam {

struct CurveNode {
  double price = 0.0;
  double quantity = 0.0;
  bool operator==(const CurveNode&) const = default;
};

struct NetCurveSegment {
  double base_price = 0.0;      // p_h, price at the fully filled end
  double price_span = 0.0;      // dp_h >= 0
  double base_quantity = 0.0;   // q_h, net demand at price p_h
  double quantity_span = 0.0;   // dq_h >= 0
  bool is_curtailment = false;
  double lower_quantity = 0.0;  // q_low_h

  // p_h(z) = p_h + (1 - z) dp_h
  double price_at(double fill) const { return base_price + (1.0 - fill) * price_span; }
  double high_price() const { return base_price + price_span; }
  bool horizontal() const { return quantity_span == 0.0; }
  bool vertical() const { return price_span == 0.0 && quantity_span > 0.0; }
};

// Segments are stored by descending price: the first segment fills first as
// the price falls from the top of the interval.
struct NetCurve {
  std::size_t area = 0;
  std::size_t hour = 0;
  double min_net_demand = 0.0;
  PriceInterval interval;
  std::vector<NetCurveSegment> segments;

  // Net demand when segments are filled to `fill`.
  double quantity(std::span<const double> fill) const;
  // Range of net demand the curve admits at `price` (an interval on vertical stretches).
  std::pair<double, double> quantity_range_at(double price) const;
  double max_quantity() const;
  // Ascending-price node list of the built curve.
  std::vector<CurveNode> nodes() const;
};

NetCurve build_net_curve(std::span<const CurveNode> nodes, const PriceInterval& area_interval,
                         const PriceInterval& global_interval);

// Redistributes fill inside runs of adjacent vertical segments sharing one
// price so earlier segments fill first. Total quantity is unchanged.
void canonicalize_fill(const NetCurve& curve, std::span<double> fill);

}  // namespace dam
