#include "dam/welfare.hpp"

#include <cmath>

#include "dam/error.hpp"

namespace dam {

namespace {

void check_sizes(const Instance& instance, std::span<const double> delta, const BidSelection& selection) {
  if (delta.size() != instance.segment_count())
    throw Error(ErrorCode::UnknownId, "fill vector does not match the instance's segments");
  if (selection.blocks.size() != instance.blocks().size() ||
      selection.flex_hours.size() != instance.flex_bids().size())
    throw Error(ErrorCode::UnknownId, "selection does not match the instance's bids");
  for (const auto& h : selection.flex_hours)
    if (h && *h >= instance.hour_count()) throw Error(ErrorCode::UnknownId, "flex hour out of range");
}

// Surplus of a segment against price pi when filled to z: dq * int_0^z p(s) ds - pi * dq * z.
double integral_price(const NetCurveSegment& s, double z) {
  return s.quantity_span * ((s.base_price + s.price_span) * z - 0.5 * s.price_span * z * z);
}

}  // namespace

double welfare(const Instance& instance, std::span<const double> delta, const BidSelection& selection) {
  check_sizes(instance, delta, selection);
  double w = 0.0;
  for (std::size_t h = 0; h < delta.size(); ++h) w += integral_price(instance.segment(h), delta[h]);
  w += fixed_selection_terms(instance, selection).value;
  return w;
}

double welfare(const Instance& instance, const PrimalSolution& solution) {
  return welfare(instance, solution.delta, solution.selection);
}

double block_surplus(const Instance& instance, std::size_t block, const PriceVector& prices) {
  const auto& b = instance.blocks().at(block);
  double s = 0.0;
  for (std::size_t t = 0; t < b.quantities.size(); ++t) s += (b.limit_price - prices(b.area, t)) * b.quantities[t];
  return s;
}

double flex_surplus(const Instance& instance, std::size_t flex, std::size_t hour, const PriceVector& prices) {
  const auto& f = instance.flex_bids().at(flex);
  return (f.limit_price - prices(f.area, hour)) * f.quantity;
}

SurplusReport surplus_report(const Instance& instance, const PrimalSolution& solution, const PriceVector& prices,
                             double tol) {
  check_sizes(instance, solution.delta, solution.selection);
  auto residuals = clearing_residuals(instance, solution);
  for (std::size_t a = 0; a < residuals.rows(); ++a)
    for (std::size_t t = 0; t < residuals.cols(); ++t)
      if (std::abs(residuals(a, t)) > tol)
        throw Error(ErrorCode::ClearingViolated, "area '" + instance.areas()[a].id + "' hour " + std::to_string(t) +
                                                     " is not balanced");

  SurplusReport report;
  report.segments.resize(instance.segment_count());
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const auto& s = instance.segment(h);
    const auto& ref = instance.segment_ref(h);
    const double pi = prices(ref.area, ref.hour);
    // The segment starts executed down to its lower quantity; only the part
    // beyond that point carries surplus relative to the constant.
    const double z0 = s.quantity_span > 0.0 ? -s.lower_quantity / s.quantity_span : 0.0;
    const double traded = s.lower_quantity + s.quantity_span * solution.delta[h];
    report.segments[h] = integral_price(s, solution.delta[h]) - pi * traded - integral_price(s, z0);
    report.constant_offset -= integral_price(s, z0);
    report.total += report.segments[h];
  }
  report.blocks.assign(instance.blocks().size(), 0.0);
  for (std::size_t b = 0; b < instance.blocks().size(); ++b) {
    if (!solution.selection.block(b)) continue;
    report.blocks[b] = block_surplus(instance, b, prices);
    report.total += report.blocks[b];
  }
  report.flex.assign(instance.flex_bids().size(), 0.0);
  for (std::size_t f = 0; f < instance.flex_bids().size(); ++f) {
    if (!solution.selection.flex_hours[f]) continue;
    report.flex[f] = flex_surplus(instance, f, *solution.selection.flex_hours[f], prices);
    report.total += report.flex[f];
  }
  const auto& ics = instance.interconnectors();
  report.congestion = Grid<double>(ics.size(), instance.hour_count());
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (std::size_t t = 0; t < instance.hour_count(); ++t) {
      double rent = (prices(ics[c].sink, t) - prices(ics[c].source, t)) * solution.flows(c, t);
      report.congestion(c, t) = rent;
      report.total += rent;
    }
  }
  return report;
}

double big_m(const BlockBid& block, const PriceInterval& interval) {
  double m = 0.0;
  for (double q : block.quantities)
    m += std::min((block.limit_price - interval.lower) * q, (block.limit_price - interval.upper) * q);
  return std::min(m, 0.0);
}

double big_m(const FlexBid& flex, const PriceInterval& interval) {
  double q = flex.quantity;
  return std::min({(flex.limit_price - interval.lower) * q, (flex.limit_price - interval.upper) * q, 0.0});
}

}  // namespace dam
