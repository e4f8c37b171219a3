#include "dam/pricing.hpp"

#include <cmath>
#include <sstream>

#include "dam/error.hpp"
#include "dam/qp_engine.hpp"
#include "dam/relaxation.hpp"
#include "dam/welfare.hpp"

namespace dam {

namespace {

constexpr double kPriceWidening = 100.0;

bool is_vertical(const NetCurveSegment& s) { return s.price_span == 0.0 && s.quantity_span > 0.0; }

// Places `volume` on the vertical segments of one curve, highest price first;
// at equal prices ordinary segments precede curtailment segments.
void merit_fill(const NetCurve& curve, std::span<double> fill, double volume) {
  const auto& segs = curve.segments;
  std::size_t i = 0;
  while (i < segs.size()) {
    if (!is_vertical(segs[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < segs.size() && is_vertical(segs[j]) && segs[j].base_price == segs[i].base_price) ++j;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t h = i; h < j; ++h) {
        if (segs[h].is_curtailment != (pass == 1)) continue;
        const double take = std::clamp(volume, 0.0, segs[h].quantity_span);
        fill[h] = take >= segs[h].quantity_span ? 1.0 : take / segs[h].quantity_span;
        volume -= take;
      }
    }
    i = j;
  }
}

}  // namespace

PrimalSolution solve_fixflow(const Instance& instance, const PrimalSolution& solution) {
  const std::size_t A = instance.areas().size();
  const std::size_t T = instance.hour_count();
  const auto& ics = instance.interconnectors();
  if (ics.empty()) return solution;

  qp::QpProblem qp;
  std::vector<std::size_t> var(instance.segment_count(), npos);
  std::vector<qp::Term> welfare_row;
  double welfare_rhs = 0.0;
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const auto& s = instance.segment(h);
    if (!is_vertical(s)) continue;
    var[h] = qp.add_variable(0.0, 1.0);
    welfare_row.push_back({var[h], s.base_price * s.quantity_span});
    welfare_rhs += s.base_price * s.quantity_span * solution.delta[h];
  }
  Grid<std::size_t> flow(ics.size(), T);
  for (std::size_t c = 0; c < ics.size(); ++c)
    for (std::size_t t = 0; t < T; ++t) flow(c, t) = qp.add_variable(ics[c].lower[t], ics[c].upper[t], 0.0, -2.0);

  auto k = fixed_selection_terms(instance, solution.selection);
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto& curve = instance.curve(a, t);
      const std::size_t off = instance.segment_offset(a, t);
      std::vector<qp::Term> row;
      double rhs = -curve.min_net_demand - k.volume(a, t);
      for (std::size_t h = 0; h < curve.segments.size(); ++h) {
        if (var[off + h] != npos)
          row.push_back({var[off + h], curve.segments[h].quantity_span});
        else
          rhs -= curve.segments[h].quantity_span * solution.delta[off + h];
      }
      for (std::size_t c = 0; c < ics.size(); ++c) {
        if (ics[c].source == a) row.push_back({flow(c, t), 1.0});
        if (ics[c].sink == a) row.push_back({flow(c, t), -1.0});
      }
      qp.add_equality(std::move(row), rhs);
    }
  }
  if (!welfare_row.empty()) qp.add_equality(std::move(welfare_row), welfare_rhs);
  for (std::size_t c = 0; c < ics.size(); ++c) {
    if (!ics[c].ramp_rate) continue;
    const double r = *ics[c].ramp_rate;
    for (std::size_t t = 0; t < T; ++t) {
      if (t == 0) {
        qp.add_inequality({{flow(c, 0), 1.0}}, r + ics[c].initial_flow);
        qp.add_inequality({{flow(c, 0), -1.0}}, r - ics[c].initial_flow);
      } else {
        qp.add_inequality({{flow(c, t), 1.0}, {flow(c, t - 1), -1.0}}, r);
        qp.add_inequality({{flow(c, t - 1), 1.0}, {flow(c, t), -1.0}}, r);
      }
    }
  }

  auto sol = qp::solve_qp(qp);
  if (sol.status != qp::QpStatus::optimal) return solution;

  PrimalSolution out = solution;
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      double tau = sol.x[flow(c, t)];
      const double scale = 1e-9 * std::max(1.0, std::abs(tau));
      if (std::abs(tau - ics[c].upper[t]) <= scale) tau = ics[c].upper[t];
      if (std::abs(tau - ics[c].lower[t]) <= scale) tau = ics[c].lower[t];
      if (std::abs(tau) <= 1e-12) tau = 0.0;
      out.flows(c, t) = tau;
    }
  }
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto& curve = instance.curve(a, t);
      const std::size_t off = instance.segment_offset(a, t);
      double volume = 0.0;
      for (std::size_t h = 0; h < curve.segments.size(); ++h)
        if (var[off + h] != npos) volume += curve.segments[h].quantity_span * sol.x[var[off + h]];
      merit_fill(curve, std::span<double>(out.delta).subspan(off, curve.segments.size()), volume);
    }
  }
  return out;
}

PricingOutcome solve_qpprice(const Instance& instance, const PrimalSolution& solution, bool relax_losses,
                             const PricingOptions& options) {
  const std::size_t A = instance.areas().size();
  const std::size_t T = instance.hour_count();
  const auto& ics = instance.interconnectors();
  const auto& blocks = instance.blocks();
  const auto& flex = instance.flex_bids();
  const auto& sel = solution.selection;
  // Shadow prices may leave P when a curve is exhausted; the relaxed pass
  // searches a wider box and leaves P to the strict pass and clamping.
  PriceInterval P = instance.price_interval();
  if (relax_losses) P = {P.lower - kPriceWidening * P.width(), P.upper + kPriceWidening * P.width()};

  qp::QpProblem qp;
  Grid<std::size_t> price(A, T);
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t t = 0; t < T; ++t) price(a, t) = qp.add_variable(P.lower, P.upper);

  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const auto& s = instance.segment(h);
    if (s.quantity_span == 0.0) continue;
    const auto& ref = instance.segment_ref(h);
    const std::size_t pv = price(ref.area, ref.hour);
    const double z = solution.delta[h];
    if (z >= 1.0 - options.fill_tol)
      qp.add_inequality({{pv, 1.0}}, s.base_price);
    else if (z <= options.fill_tol)
      qp.add_inequality({{pv, -1.0}}, -s.high_price());
    else
      qp.add_equality({{pv, 1.0}}, s.price_at(z));
  }

  Grid<std::size_t> mu_up(ics.size(), T, npos), mu_low(ics.size(), T, npos);
  Grid<std::size_t> rho_up(ics.size(), T, npos), rho_down(ics.size(), T, npos);
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      const double tau = solution.flows(c, t);
      if (tau >= ics[c].upper[t] - options.tight_tol) mu_up(c, t) = qp.add_variable(0.0, qp::kInfinity);
      if (tau <= ics[c].lower[t] + options.tight_tol) mu_low(c, t) = qp.add_variable(0.0, qp::kInfinity);
      if (!ics[c].ramp_rate) continue;
      const double prev = t == 0 ? ics[c].initial_flow : solution.flows(c, t - 1);
      if (tau - prev >= *ics[c].ramp_rate - options.tight_tol) rho_up(c, t) = qp.add_variable(0.0, qp::kInfinity);
      if (prev - tau >= *ics[c].ramp_rate - options.tight_tol) rho_down(c, t) = qp.add_variable(0.0, qp::kInfinity);
    }
  }
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      // pi_s - pi_r = mu_up - mu_low + rho_up_t - rho_down_t - rho_up_{t+1} + rho_down_{t+1}
      std::vector<qp::Term> row{{price(ics[c].sink, t), 1.0}, {price(ics[c].source, t), -1.0}};
      auto add = [&](std::size_t v, double coef) {
        if (v != npos) row.push_back({v, coef});
      };
      add(mu_up(c, t), -1.0);
      add(mu_low(c, t), 1.0);
      add(rho_up(c, t), -1.0);
      add(rho_down(c, t), 1.0);
      if (t + 1 < T) {
        add(rho_up(c, t + 1), 1.0);
        add(rho_down(c, t + 1), -1.0);
      }
      qp.add_equality(std::move(row), 0.0);
    }
  }

  std::vector<std::size_t> block_loss(blocks.size(), npos), flex_loss(flex.size(), npos);
  std::vector<qp::Term> loss_terms;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!sel.block(b)) continue;
    std::vector<qp::Term> row;
    double rhs = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
      const double q = blocks[b].quantities[t];
      if (q == 0.0) continue;
      row.push_back({price(blocks[b].area, t), q});
      rhs += blocks[b].limit_price * q;
    }
    if (relax_losses) {
      block_loss[b] = qp.add_variable(0.0, -big_m(blocks[b], P));
      row.push_back({block_loss[b], -1.0});
      loss_terms.push_back({block_loss[b], 1.0});
    }
    qp.add_inequality(std::move(row), rhs);
  }
  for (std::size_t f = 0; f < flex.size(); ++f) {
    if (!sel.flex_hours[f]) continue;
    std::vector<qp::Term> row{{price(flex[f].area, *sel.flex_hours[f]), flex[f].quantity}};
    if (relax_losses) {
      flex_loss[f] = qp.add_variable(0.0, -big_m(flex[f], P));
      row.push_back({flex_loss[f], -1.0});
      loss_terms.push_back({flex_loss[f], 1.0});
    }
    qp.add_inequality(std::move(row), flex[f].limit_price * flex[f].quantity);
  }

  if (!loss_terms.empty()) {
    // Stage 1: least total loss.
    qp::QpProblem stage1 = qp;
    for (const auto& t : loss_terms) stage1.linear[t.index] = -1.0;
    auto s1 = qp::solve_qp(stage1);
    if (s1.status != qp::QpStatus::optimal)
      throw Error(ErrorCode::Infeasible, "loss minimisation ended with status " + qp::to_string(s1.status));
    const double least = std::max(0.0, -s1.objective);
    qp.add_inequality(loss_terms, least + 1e-9 * std::max(1.0, least));
  }
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t t = 0; t < T; ++t) qp.quadratic[price(a, t)] = -2.0;

  auto sol = qp::solve_qp(qp);
  if (sol.status == qp::QpStatus::infeasible)
    throw Error(ErrorCode::Infeasible, "no linear prices support the selection without losses");
  if (sol.status != qp::QpStatus::optimal)
    throw Error(ErrorCode::IterationLimit, "price problem ended with status " + qp::to_string(sol.status));

  PricingOutcome out;
  out.prices = PriceVector(A, T);
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t t = 0; t < T; ++t) {
      double p = sol.x[price(a, t)];
      if (std::abs(p) <= 1e-12) p = 0.0;
      out.prices(a, t) = p;
    }
  auto value = [&](std::size_t v) { return v == npos ? 0.0 : sol.x[v]; };
  out.block_loss.assign(blocks.size(), 0.0);
  out.flex_loss.assign(flex.size(), 0.0);
  for (std::size_t b = 0; b < blocks.size(); ++b) out.block_loss[b] = value(block_loss[b]);
  for (std::size_t f = 0; f < flex.size(); ++f) out.flex_loss[f] = value(flex_loss[f]);
  for (double l : out.block_loss) out.total_loss += l;
  for (double l : out.flex_loss) out.total_loss += l;

  auto& d = out.duals;
  d.flow_upper = d.flow_lower = d.ramp_up = d.ramp_down = Grid<double>(ics.size(), T);
  for (std::size_t c = 0; c < ics.size(); ++c)
    for (std::size_t t = 0; t < T; ++t) {
      d.flow_upper(c, t) = value(mu_up(c, t));
      d.flow_lower(c, t) = value(mu_low(c, t));
      d.ramp_up(c, t) = value(rho_up(c, t));
      d.ramp_down(c, t) = value(rho_down(c, t));
    }
  fill_multipliers(instance, solution.delta, out.prices, d.fill_upper, d.fill_lower);
  return out;
}

namespace {

ClampResult clamp_named(const PriceVector& prices, std::span<const PriceInterval> boxes,
                        const std::vector<std::string>& names) {
  ClampResult out{prices, {}};
  for (std::size_t a = 0; a < prices.rows(); ++a) {
    for (std::size_t t = 0; t < prices.cols(); ++t) {
      const double p = prices(a, t);
      const double q = boxes[a].clamp(p);
      if (q == p) continue;
      out.prices(a, t) = q;
      std::ostringstream msg;
      msg << "price of area " << names[a] << " hour " << t << " moved from " << p << " to " << q
          << "; the flow price condition might be violated";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

}  // namespace

ClampResult clamp_prices(const PriceVector& prices, std::span<const PriceInterval> area_intervals) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < prices.rows(); ++a) names.push_back(std::to_string(a));
  return clamp_named(prices, area_intervals, names);
}

ClampResult clamp_prices(const PriceVector& prices, const Instance& instance) {
  std::vector<PriceInterval> boxes;
  std::vector<std::string> names;
  for (const auto& a : instance.areas()) {
    boxes.push_back(a.interval);
    names.push_back("'" + a.id + "'");
  }
  return clamp_named(prices, boxes, names);
}

}  // namespace dam
