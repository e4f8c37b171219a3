#include "dam/relaxation.hpp"

#include <cmath>

#include "clearing_model.hpp"
#include "dam/error.hpp"
#include "dam/welfare.hpp"

namespace dam {

QprelaxAssembly assemble_qprelax(const Instance& instance, const BidSelection& selection) {
  selection.validate(instance);
  auto model = detail::build_clearing_model(instance, &selection);
  QprelaxAssembly out;
  out.problem = std::move(model.problem);
  out.terms = fixed_selection_terms(instance, selection);
  out.delta_var = std::move(model.delta_var);
  out.flow_var = std::move(model.flow_var);
  out.clearing_row = std::move(model.clearing_row);
  return out;
}

void fill_multipliers(const Instance& instance, std::span<const double> delta, const PriceVector& prices,
                      std::vector<double>& upper, std::vector<double>& lower) {
  upper.assign(instance.segment_count(), 0.0);
  lower.assign(instance.segment_count(), 0.0);
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const auto& s = instance.segment(h);
    if (s.quantity_span == 0.0) continue;
    const auto& ref = instance.segment_ref(h);
    const double gap = s.quantity_span * (s.price_at(delta[h]) - prices(ref.area, ref.hour));
    if (gap > 0.0)
      upper[h] = gap;
    else
      lower[h] = -gap;
  }
}

std::optional<RelaxationOutcome> try_solve_relaxation(const Instance& instance, const BidSelection& selection) {
  selection.validate(instance);
  auto model = detail::build_clearing_model(instance, &selection);
  auto sol = qp::solve_qp(model.problem);
  if (sol.status == qp::QpStatus::infeasible) return std::nullopt;
  if (sol.status != qp::QpStatus::optimal)
    throw Error(ErrorCode::IterationLimit, "relaxation solve ended with status " + qp::to_string(sol.status));

  const std::size_t A = instance.areas().size();
  const std::size_t T = instance.hour_count();
  const auto& ics = instance.interconnectors();
  RelaxationOutcome out;
  out.delta.assign(instance.segment_count(), 0.0);
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    if (model.delta_var[h] == npos) continue;
    double z = sol.x[model.delta_var[h]];
    if (z < 1e-10) z = 0.0;
    if (z > 1.0 - 1e-10) z = 1.0;
    out.delta[h] = z;
  }
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto& curve = instance.curve(a, t);
      canonicalize_fill(curve, std::span<double>(out.delta).subspan(instance.segment_offset(a, t), curve.segments.size()));
    }
  }

  out.flows = FlowMatrix(ics.size(), T);
  out.duals.flow_upper = Grid<double>(ics.size(), T);
  out.duals.flow_lower = Grid<double>(ics.size(), T);
  out.duals.ramp_up = Grid<double>(ics.size(), T);
  out.duals.ramp_down = Grid<double>(ics.size(), T);
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t v = model.flow_var(c, t);
      double tau = sol.x[v];
      const double scale = 1e-9 * std::max(1.0, std::abs(tau));
      if (std::abs(tau - ics[c].upper[t]) <= scale) tau = ics[c].upper[t];
      if (std::abs(tau - ics[c].lower[t]) <= scale) tau = ics[c].lower[t];
      out.flows(c, t) = tau;
      out.duals.flow_upper(c, t) = sol.bound_upper_multipliers[v];
      out.duals.flow_lower(c, t) = sol.bound_lower_multipliers[v];
      if (model.ramp_up_row(c, t) != npos) {
        out.duals.ramp_up(c, t) = sol.inequality_multipliers[model.ramp_up_row(c, t)];
        out.duals.ramp_down(c, t) = sol.inequality_multipliers[model.ramp_down_row(c, t)];
      }
    }
  }

  out.prices = PriceVector(A, T);
  for (std::size_t a = 0; a < A; ++a)
    for (std::size_t t = 0; t < T; ++t) out.prices(a, t) = sol.equality_multipliers[model.clearing_row(a, t)];
  fill_multipliers(instance, out.delta, out.prices, out.duals.fill_upper, out.duals.fill_lower);
  out.objective = welfare(instance, out.delta, selection);
  return out;
}

RelaxationOutcome solve_relaxation(const Instance& instance, const BidSelection& selection) {
  auto out = try_solve_relaxation(instance, selection);
  if (!out) throw Error(ErrorCode::Infeasible, "selected block and flex volume cannot be cleared");
  return *out;
}

}  // namespace dam
