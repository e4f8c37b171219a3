#include "support/generators.hpp"

#include <algorithm>
#include <cmath>

namespace dam::testing {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::vector<CurveNode> random_curve(std::mt19937_64& rng, const PriceInterval& P, std::size_t max_segments) {
  const std::size_t pieces = pick(rng, 1, max_segments);
  std::vector<CurveNode> nodes;
  double p = P.lower + uniform(rng, 0.0, 0.2) * P.width();
  double q = uniform(rng, 10.0, 80.0);
  nodes.push_back({p, q});
  const double target = uniform(rng, -80.0, -5.0);
  const double step_q = (q - target) / static_cast<double>(pieces);
  for (std::size_t i = 0; i < pieces; ++i) {
    const double room = P.upper - p;
    const int kind = static_cast<int>(pick(rng, 0, 3));  // 0,1 sloped, 2 vertical, 3 horizontal
    double dp = kind == 2 ? 0.0 : std::min(room, uniform(rng, 0.05, 0.3) * P.width());
    double dq = kind == 3 ? 0.0 : step_q * uniform(rng, 0.5, 1.5);
    if (dp == 0.0 && dq == 0.0) dq = 1.0;
    p += dp;
    q -= dq;
    nodes.push_back({p, q});
  }
  return nodes;
}

}  // namespace

InstanceData random_market(std::mt19937_64& rng, const MarketShape& shape) {
  InstanceData d;
  d.price_interval = {-50.0, 250.0};
  const auto& P = d.price_interval;
  d.hours = pick(rng, 1, shape.max_hours);
  const std::size_t areas = pick(rng, 1, shape.max_areas);
  for (std::size_t a = 0; a < areas; ++a) d.areas.push_back({"A" + std::to_string(a), std::nullopt});
  for (std::size_t a = 0; a < areas; ++a)
    for (std::size_t t = 0; t < d.hours; ++t)
      d.curves.push_back({d.areas[a].id, t, random_curve(rng, P, shape.max_segments)});

  std::size_t flex = pick(rng, 0, shape.max_flex);
  std::size_t blocks = pick(rng, 0, shape.max_blocks);
  while (blocks + flex * d.hours > shape.max_binaries) {
    if (flex > 0)
      --flex;
    else
      --blocks;
  }
  for (std::size_t b = 0; b < blocks; ++b) {
    BlockSpec spec;
    spec.id = "b" + std::to_string(b);
    spec.area = d.areas[pick(rng, 0, areas - 1)].id;
    spec.limit_price = uniform(rng, P.lower + 0.1 * P.width(), P.upper - 0.1 * P.width());
    const bool demand = coin(rng, 0.5);
    for (std::size_t t = 0; t < d.hours; ++t) {
      double q = coin(rng, 0.75) ? uniform(rng, 2.0, 30.0) : 0.0;
      spec.quantities.push_back(demand ? q : -q);
    }
    if (std::all_of(spec.quantities.begin(), spec.quantities.end(), [](double q) { return q == 0.0; }))
      spec.quantities[0] = demand ? 10.0 : -10.0;
    d.blocks.push_back(std::move(spec));
    if (b > 0 && coin(rng, 0.2)) d.links.push_back({d.blocks[b].id, d.blocks[pick(rng, 0, b - 1)].id});
  }
  for (std::size_t f = 0; f < flex; ++f) {
    FlexSpec spec;
    spec.id = "f" + std::to_string(f);
    spec.area = d.areas[pick(rng, 0, areas - 1)].id;
    spec.limit_price = uniform(rng, P.lower + 0.1 * P.width(), P.upper - 0.1 * P.width());
    spec.quantity = (coin(rng, 0.5) ? 1.0 : -1.0) * uniform(rng, 2.0, 30.0);
    d.flex.push_back(std::move(spec));
  }
  if (areas == 2) {
    InterconnectorSpec ic;
    ic.id = "L";
    ic.from = "A0";
    ic.to = "A1";
    for (std::size_t t = 0; t < d.hours; ++t) {
      ic.lower.push_back(-uniform(rng, 5.0, 40.0));
      ic.upper.push_back(uniform(rng, 5.0, 40.0));
    }
    if (d.hours > 1 && coin(rng, 0.4)) ic.ramp_rate = uniform(rng, 3.0, 15.0);
    d.interconnectors.push_back(std::move(ic));
  }
  return d;
}

qp::QpProblem random_qp(std::mt19937_64& rng, const QpShape& shape) {
  qp::QpProblem p;
  const std::size_t n = pick(rng, 1, shape.max_variables);
  std::vector<double> anchor(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double quad = coin(rng, 0.3) ? 0.0 : -uniform(rng, 0.1, 5.0);
    double lo = -uniform(rng, 0.5, 1.0) * shape.box;
    double hi = uniform(rng, 0.5, 1.0) * shape.box;
    if (!shape.finite_bounds && quad < 0.0 && coin(rng, 0.2)) lo = -qp::kInfinity;
    if (!shape.finite_bounds && quad < 0.0 && coin(rng, 0.2)) hi = qp::kInfinity;
    if (coin(rng, 0.05)) lo = hi = std::isfinite(hi) ? hi : 0.0;
    p.add_variable(lo, hi, uniform(rng, -10.0, 10.0), quad);
    const double alo = std::isfinite(lo) ? lo : -shape.box;
    const double ahi = std::isfinite(hi) ? hi : shape.box;
    anchor[j] = lo == hi ? lo : uniform(rng, alo, ahi);
  }
  auto random_row = [&] {
    std::vector<qp::Term> terms;
    for (std::size_t j = 0; j < n; ++j)
      if (coin(rng, 0.4)) terms.push_back({j, std::round(uniform(rng, -3.0, 3.0) * 4.0) / 4.0});
    if (terms.empty()) terms.push_back({pick(rng, 0, n - 1), 1.0});
    return terms;
  };
  auto at_anchor = [&](const std::vector<qp::Term>& terms) {
    double s = 0.0;
    for (const auto& t : terms) s += t.coefficient * anchor[t.index];
    return s;
  };
  const std::size_t me = shape.equalities ? pick(rng, 0, n / 3) : 0;
  for (std::size_t i = 0; i < me; ++i) {
    auto terms = random_row();
    const double rhs = at_anchor(terms);
    p.add_equality(std::move(terms), rhs);
  }
  const std::size_t mi = pick(rng, 0, n);
  for (std::size_t i = 0; i < mi; ++i) {
    auto terms = random_row();
    const double rhs = at_anchor(terms) + uniform(rng, 0.5, 3.0);
    p.add_inequality(std::move(terms), rhs);
  }
  return p;
}

}  // namespace dam::testing
