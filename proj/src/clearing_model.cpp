#include "clearing_model.hpp"

namespace dam::detail {

ClearingModel build_clearing_model(const Instance& instance, const BidSelection* fixed) {
  ClearingModel m;
  auto& qp = m.problem;
  const std::size_t A = instance.areas().size();
  const std::size_t T = instance.hour_count();
  const auto& ics = instance.interconnectors();
  const auto& blocks = instance.blocks();
  const auto& flex = instance.flex_bids();

  m.delta_var.assign(instance.segment_count(), npos);
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const auto& s = instance.segment(h);
    if (s.quantity_span == 0.0) continue;
    m.delta_var[h] = qp.add_variable(0.0, 1.0, s.high_price() * s.quantity_span, -s.price_span * s.quantity_span);
  }
  m.flow_var = Grid<std::size_t>(ics.size(), T, npos);
  for (std::size_t c = 0; c < ics.size(); ++c)
    for (std::size_t t = 0; t < T; ++t) m.flow_var(c, t) = qp.add_variable(ics[c].lower[t], ics[c].upper[t]);

  m.block_var.assign(blocks.size(), npos);
  m.flex_var = Grid<std::size_t>(flex.size(), T, npos);
  FixedSelectionTerms terms;
  if (fixed) {
    terms = fixed_selection_terms(instance, *fixed);
    qp.constant = terms.value;
  } else {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      double value = 0.0;
      for (double q : blocks[b].quantities) value += blocks[b].limit_price * q;
      m.block_var[b] = qp.add_variable(0.0, 1.0, value);
    }
    for (std::size_t f = 0; f < flex.size(); ++f)
      for (std::size_t t = 0; t < T; ++t)
        m.flex_var(f, t) = qp.add_variable(0.0, 1.0, flex[f].limit_price * flex[f].quantity);
  }

  m.clearing_row = Grid<std::size_t>(A, T, npos);
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<qp::Term> terms_row;
      const auto& curve = instance.curve(a, t);
      const std::size_t off = instance.segment_offset(a, t);
      for (std::size_t h = 0; h < curve.segments.size(); ++h)
        if (m.delta_var[off + h] != npos) terms_row.push_back({m.delta_var[off + h], curve.segments[h].quantity_span});
      if (!fixed) {
        for (std::size_t b = 0; b < blocks.size(); ++b)
          if (blocks[b].area == a && blocks[b].quantities[t] != 0.0)
            terms_row.push_back({m.block_var[b], blocks[b].quantities[t]});
        for (std::size_t f = 0; f < flex.size(); ++f)
          if (flex[f].area == a) terms_row.push_back({m.flex_var(f, t), flex[f].quantity});
      }
      for (std::size_t c = 0; c < ics.size(); ++c) {
        if (ics[c].source == a) terms_row.push_back({m.flow_var(c, t), 1.0});
        if (ics[c].sink == a) terms_row.push_back({m.flow_var(c, t), -1.0});
      }
      double rhs = -curve.min_net_demand - (fixed ? terms.volume(a, t) : 0.0);
      m.clearing_row(a, t) = qp.add_equality(std::move(terms_row), rhs);
    }
  }

  m.ramp_up_row = Grid<std::size_t>(ics.size(), T, npos);
  m.ramp_down_row = Grid<std::size_t>(ics.size(), T, npos);
  for (std::size_t c = 0; c < ics.size(); ++c) {
    if (!ics[c].ramp_rate) continue;
    const double r = *ics[c].ramp_rate;
    for (std::size_t t = 0; t < T; ++t) {
      if (t == 0) {
        m.ramp_up_row(c, t) = qp.add_inequality({{m.flow_var(c, 0), 1.0}}, r + ics[c].initial_flow);
        m.ramp_down_row(c, t) = qp.add_inequality({{m.flow_var(c, 0), -1.0}}, r - ics[c].initial_flow);
      } else {
        m.ramp_up_row(c, t) = qp.add_inequality({{m.flow_var(c, t), 1.0}, {m.flow_var(c, t - 1), -1.0}}, r);
        m.ramp_down_row(c, t) = qp.add_inequality({{m.flow_var(c, t - 1), 1.0}, {m.flow_var(c, t), -1.0}}, r);
      }
    }
  }

  if (!fixed) {
    for (const auto& l : instance.links())
      qp.add_inequality({{m.block_var[l.child], 1.0}, {m.block_var[l.parent], -1.0}}, 0.0);
    if (T > 1) {
      for (std::size_t f = 0; f < flex.size(); ++f) {
        std::vector<qp::Term> row;
        for (std::size_t t = 0; t < T; ++t) row.push_back({m.flex_var(f, t), 1.0});
        qp.add_inequality(std::move(row), 1.0);
      }
    }
  }
  return m;
}

}  // namespace dam::detail
