#include "dam/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dam/cuts.hpp"
#include "dam/welfare.hpp"

namespace dam {

namespace {

std::string where(const Instance& instance, std::size_t area, std::size_t hour) {
  return "area '" + instance.areas()[area].id + "' hour " + std::to_string(hour);
}

std::string segment_where(const Instance& instance, std::size_t h) {
  const auto& ref = instance.segment_ref(h);
  return where(instance, ref.area, ref.hour) + " segment " + std::to_string(ref.local);
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

}  // namespace

std::string to_string(ClearingMode mode) {
  switch (mode) {
    case ClearingMode::heuristic: return "heuristic";
    case ClearingMode::exact: return "exact";
    case ClearingMode::oracle: return "oracle";
  }
  return "unknown";
}

std::string to_string(ClearingStatus status) {
  switch (status) {
    case ClearingStatus::optimal: return "optimal";
    case ClearingStatus::converged: return "converged";
    case ClearingStatus::limit: return "limit";
  }
  return "unknown";
}

double relative_gap(double bound, double welfare) {
  return std::max(0.0, (bound - welfare) / std::max(1.0, std::abs(bound)));
}

void ConditionReport::add(std::string condition, std::string location, double amount) {
  pass = false;
  violations.push_back({std::move(condition), std::move(location), amount});
}

void ConditionReport::merge(const ConditionReport& other) {
  pass = pass && other.pass;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

ConditionReport check_filling(const Instance& instance, std::span<const double> delta, const PriceVector& prices,
                              double tol, FillingMode mode) {
  ConditionReport rep;
  const double edge = 1e-9;
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const auto& s = instance.segment(h);
    if (s.quantity_span == 0.0) continue;
    const auto& ref = instance.segment_ref(h);
    const double pi = prices(ref.area, ref.hour);
    const double z = delta[h];
    if (mode == FillingMode::kkt) {
      // dq p(z) - dq pi - v_up + v_low = 0 with complementary bounds on z.
      const double gap = s.price_at(z) - pi;
      const double v_up = std::max(gap, 0.0);
      const double v_low = std::max(-gap, 0.0);
      const double violation = std::max(v_up * (1.0 - z), v_low * z);
      if (violation > tol) rep.add("filling", segment_where(instance, h), violation);
      continue;
    }
    double violation = 0.0;
    if (z >= 1.0 - edge)
      violation = pi - s.base_price;
    else if (z <= edge)
      violation = s.high_price() - pi;
    else
      violation = std::abs(pi - s.price_at(z));
    if (violation > tol) rep.add("filling", segment_where(instance, h), violation);
  }
  if (mode == FillingMode::gamma) {
    // Ascending price: delta_h <= gamma_h <= delta_{h+1}, choosing the smallest gamma.
    for (std::size_t a = 0; a < instance.areas().size(); ++a) {
      for (std::size_t t = 0; t < instance.hour_count(); ++t) {
        const auto& curve = instance.curve(a, t);
        const std::size_t off = instance.segment_offset(a, t);
        std::vector<std::size_t> order;
        for (std::size_t i = curve.segments.size(); i-- > 0;)
          if (curve.segments[i].quantity_span > 0.0) order.push_back(off + i);
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
          const double gamma = delta[order[k]] > edge ? 1.0 : 0.0;
          const double violation = gamma - delta[order[k + 1]];
          if (violation > tol) rep.add("filling-gamma", segment_where(instance, order[k]), violation);
        }
      }
    }
  }
  return rep;
}

ConditionReport check_flow_price(const Instance& instance, const FlowMatrix& flows, const PriceVector& prices,
                                 double tol, FlowPriceMode mode, double tight_tol) {
  ConditionReport rep;
  const std::size_t T = instance.hour_count();
  const auto& ics = instance.interconnectors();
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < ics.size(); ++c) {
    const auto& ic = ics[c];
    auto tight = [&](double value, double bound) { return std::abs(value - bound) <= tight_tol * std::max(1.0, std::abs(bound)); };
    auto location = [&](std::size_t t) { return "interconnector '" + ic.id + "' hour " + std::to_string(t); };
    std::vector<Interval> a_set(T), r_set(T);
    for (std::size_t t = 0; t < T; ++t) {
      const double tau = flows(c, t);
      a_set[t] = {tight(tau, ic.lower[t]) ? -inf : 0.0, tight(tau, ic.upper[t]) ? inf : 0.0};
      r_set[t] = {0.0, 0.0};
      if (ic.ramp_rate) {
        const double prev = t == 0 ? ic.initial_flow : flows(c, t - 1);
        if (tight(tau - prev, *ic.ramp_rate)) r_set[t].hi = inf;
        if (tight(prev - tau, *ic.ramp_rate)) r_set[t].lo = -inf;
      }
    }
    if (mode == FlowPriceMode::fast_path && !ic.ramp_rate) {
      for (std::size_t t = 0; t < T; ++t) {
        const double diff = prices(ic.sink, t) - prices(ic.source, t);
        if (diff > tol && a_set[t].hi != inf) rep.add("flow-price", location(t), diff);
        if (diff < -tol && a_set[t].lo != -inf) rep.add("flow-price", location(t), -diff);
      }
      continue;
    }
    // pi_s - pi_r = a_t + r_t - r_{t+1}, r_T = 0; propagate feasible r_t backwards.
    Interval next{0.0, 0.0};
    for (std::size_t t = T; t-- > 0;) {
      const double diff = prices(ic.sink, t) - prices(ic.source, t);
      Interval reach{diff - a_set[t].hi + next.lo - tol, diff - a_set[t].lo + next.hi + tol};
      Interval cut{std::max(reach.lo, r_set[t].lo), std::min(reach.hi, r_set[t].hi)};
      if (cut.lo > cut.hi) {
        rep.add("flow-price", location(t), cut.lo - cut.hi);
        // Continue from the closest admissible point.
        const double point = reach.lo > r_set[t].hi ? r_set[t].hi : r_set[t].lo;
        cut = {point, point};
      }
      next = cut;
    }
  }
  return rep;
}

ConditionReport check_bid_prices(const Instance& instance, const BidSelection& selection, const PriceVector& prices,
                                 double tol) {
  ConditionReport rep;
  for (std::size_t b = 0; b < instance.blocks().size(); ++b) {
    if (!selection.block(b)) continue;
    const double s = block_surplus(instance, b, prices);
    if (s < -tol) rep.add("block-price", "block '" + instance.blocks()[b].id + "'", -s);
  }
  for (std::size_t f = 0; f < instance.flex_bids().size(); ++f) {
    const auto& h = selection.flex_hours[f];
    if (!h) continue;
    const auto& bid = instance.flex_bids()[f];
    const double s = (bid.limit_price - prices(bid.area, *h)) * (bid.quantity > 0.0 ? 1.0 : -1.0);
    if (s < -tol) rep.add("flex-price", "flex '" + bid.id + "' hour " + std::to_string(*h), -s);
  }
  return rep;
}

ConditionReport check_curtailment(const Instance& instance, const PrimalSolution& solution, double tol) {
  ConditionReport rep;
  for (const auto& v : curtailment_violations(instance, solution, tol)) {
    const double z = solution.delta[v.segment];
    rep.add("curtailment", segment_where(instance, v.segment), v.demand_side ? 1.0 - z : z);
  }
  return rep;
}

ConditionReport check_primal(const Instance& instance, const PrimalSolution& solution, double tol) {
  ConditionReport rep;
  const auto r = clearing_residuals(instance, solution);
  for (std::size_t a = 0; a < r.rows(); ++a)
    for (std::size_t t = 0; t < r.cols(); ++t)
      if (std::abs(r(a, t)) > tol) rep.add("clearing", where(instance, a, t), std::abs(r(a, t)));
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const double z = solution.delta[h];
    const double v = std::max(-z, z - 1.0);
    if (v > tol) rep.add("fill-bounds", segment_where(instance, h), v);
  }
  const auto& ics = instance.interconnectors();
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (std::size_t t = 0; t < instance.hour_count(); ++t) {
      const double tau = solution.flows(c, t);
      const double v = std::max(ics[c].lower[t] - tau, tau - ics[c].upper[t]);
      const std::string loc = "interconnector '" + ics[c].id + "' hour " + std::to_string(t);
      if (v > tol) rep.add("flow-bounds", loc, v);
      if (ics[c].ramp_rate) {
        const double prev = t == 0 ? ics[c].initial_flow : solution.flows(c, t - 1);
        const double rv = std::abs(tau - prev) - *ics[c].ramp_rate;
        if (rv > tol) rep.add("ramp", loc, rv);
      }
    }
  }
  return rep;
}

ConditionReport check_all(const Instance& instance, const PrimalSolution& solution, const PriceVector& prices,
                          double tol) {
  ConditionReport rep = check_primal(instance, solution, tol);
  rep.merge(check_filling(instance, solution.delta, prices, tol));
  rep.merge(check_flow_price(instance, solution.flows, prices, tol));
  rep.merge(check_bid_prices(instance, solution.selection, prices, tol));
  rep.merge(check_curtailment(instance, solution, tol));
  return rep;
}

std::vector<Prb> list_prbs(const Instance& instance, const BidSelection& selection, const PriceVector& prices,
                           double tol) {
  std::vector<Prb> out;
  for (std::size_t b = 0; b < instance.blocks().size(); ++b) {
    if (selection.block(b)) continue;
    const double s = block_surplus(instance, b, prices);
    if (s > tol) out.push_back({BinaryVar::Kind::block, b, std::nullopt, s});
  }
  for (std::size_t f = 0; f < instance.flex_bids().size(); ++f) {
    if (selection.flex_hours[f]) continue;
    std::optional<std::size_t> best_hour;
    double best = tol;
    for (std::size_t t = 0; t < instance.hour_count(); ++t) {
      const double s = flex_surplus(instance, f, t, prices);
      if (s > best) {
        best = s;
        best_hour = t;
      }
    }
    if (best_hour) out.push_back({BinaryVar::Kind::flex, f, best_hour, best});
  }
  return out;
}

std::vector<Prb> list_prbs(const Instance& instance, const ClearingResult& result, double tol) {
  return list_prbs(instance, result.solution.selection, result.prices, tol);
}

}  // namespace dam
