#include "dam/net_curve.hpp"

#include <cmath>
#include <sstream>

#include "dam/error.hpp"

namespace dam {

namespace {

// Segment in ascending price order, running from (p0, q0) to (p1, q1), q0 >= q1.
struct Piece {
  double p0, q0, p1, q1;
  bool curtail = false;
  bool horizontal() const { return q0 == q1; }
  bool vertical() const { return p0 == p1; }
};

std::string describe(std::size_t i, const CurveNode& n) {
  std::ostringstream out;
  out << "node " << i << " (" << n.price << ", " << n.quantity << ")";
  return out.str();
}

}  // namespace

double NetCurve::quantity(std::span<const double> fill) const {
  double q = min_net_demand;
  for (std::size_t h = 0; h < segments.size(); ++h) q += segments[h].quantity_span * fill[h];
  return q;
}

double NetCurve::max_quantity() const {
  double q = min_net_demand;
  for (const auto& s : segments) q += s.quantity_span;
  return q;
}

std::pair<double, double> NetCurve::quantity_range_at(double price) const {
  // Segments above `price` are unfilled, below are filled.
  double lo = min_net_demand;
  double hi = min_net_demand;
  for (const auto& s : segments) {
    if (s.quantity_span == 0.0) continue;
    if (s.base_price > price) {
      lo += s.quantity_span;
      hi += s.quantity_span;
    } else if (s.high_price() < price) {
      continue;
    } else if (s.price_span == 0.0) {
      hi += s.quantity_span;
    } else {
      double z = 1.0 - (price - s.base_price) / s.price_span;
      lo += s.quantity_span * z;
      hi += s.quantity_span * z;
    }
  }
  return {lo, hi};
}

std::vector<CurveNode> NetCurve::nodes() const {
  std::vector<CurveNode> out;
  if (segments.empty()) return out;
  const auto& first = segments.back();
  out.push_back({first.base_price, first.base_quantity});
  for (auto it = segments.rbegin(); it != segments.rend(); ++it)
    out.push_back({it->high_price(), it->base_quantity - it->quantity_span});
  return out;
}

NetCurve build_net_curve(std::span<const CurveNode> nodes, const PriceInterval& area_interval,
                         const PriceInterval& global_interval) {
  if (nodes.empty()) throw Error(ErrorCode::EmptyCurve, "curve has no nodes");
  if (!(area_interval.lower <= area_interval.upper) || !(global_interval.lower <= global_interval.upper))
    throw Error(ErrorCode::InvalidInstance, "price interval with lower > upper");
  if (!global_interval.contains(area_interval, kEps))
    throw Error(ErrorCode::PriceOutOfRange, "area price interval exceeds the global interval");

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (!std::isfinite(n.price) || !std::isfinite(n.quantity))
      throw Error(ErrorCode::NonMonotoneCurve, describe(i, n) + " is not finite");
    if (i > 0 && (n.price < nodes[i - 1].price || n.quantity > nodes[i - 1].quantity))
      throw Error(ErrorCode::NonMonotoneCurve, describe(i, n) + " breaks monotonicity");
    if (!area_interval.contains(n.price, kEps))
      throw Error(ErrorCode::PriceOutOfRange, describe(i, n) + " lies outside the area interval");
  }

  const double plo = area_interval.lower;
  const double phi = area_interval.upper;

  std::vector<Piece> pieces;
  const CurveNode first{std::max(nodes.front().price, plo), nodes.front().quantity};
  const CurveNode last{std::min(nodes.back().price, phi), nodes.back().quantity};
  if (first.price > plo) pieces.push_back({plo, first.quantity, first.price, first.quantity});
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    double p0 = std::clamp(nodes[i - 1].price, plo, phi);
    double p1 = std::clamp(nodes[i].price, plo, phi);
    pieces.push_back({p0, nodes[i - 1].quantity, p1, nodes[i].quantity});
  }
  if (last.price < phi) pieces.push_back({last.price, last.quantity, phi, last.quantity});

  // Vertical curtailment before horizontal extension.
  double q_low_end = first.quantity;
  double q_high_end = last.quantity;
  if (q_low_end < 0.0) {
    pieces.insert(pieces.begin(), Piece{plo, 0.0, plo, q_low_end, true});
    q_low_end = 0.0;
  }
  if (q_high_end > 0.0) {
    pieces.push_back({phi, q_high_end, phi, 0.0, true});
    q_high_end = 0.0;
  }
  if (plo > global_interval.lower)
    pieces.insert(pieces.begin(), Piece{global_interval.lower, q_low_end, plo, q_low_end});
  if (phi < global_interval.upper)
    pieces.push_back({phi, q_high_end, global_interval.upper, q_high_end});

  std::vector<Piece> merged;
  for (const auto& piece : pieces) {
    if (piece.p0 == piece.p1 && piece.q0 == piece.q1) continue;
    if (!merged.empty() && !merged.back().curtail && !piece.curtail) {
      auto& prev = merged.back();
      bool both_flat = prev.horizontal() && piece.horizontal();
      bool both_steep = prev.vertical() && piece.vertical();
      if (both_flat || both_steep) {
        prev.p1 = piece.p1;
        prev.q1 = piece.q1;
        continue;
      }
    }
    merged.push_back(piece);
  }
  if (merged.empty()) {
    // Single point curve on a degenerate interval.
    merged.push_back({global_interval.lower, q_low_end, global_interval.upper, q_low_end});
  }

  NetCurve curve;
  curve.interval = area_interval;
  curve.min_net_demand = merged.back().q1;
  for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
    NetCurveSegment seg;
    seg.base_price = it->p0;
    seg.price_span = it->p1 - it->p0;
    seg.base_quantity = it->q0;
    seg.quantity_span = it->q0 - it->q1;
    seg.is_curtailment = it->curtail;
    seg.lower_quantity =
        seg.base_quantity > 0.0 ? std::min(0.0, seg.base_quantity - seg.quantity_span) : -seg.quantity_span;
    curve.segments.push_back(seg);
  }
  return curve;
}

void canonicalize_fill(const NetCurve& curve, std::span<double> fill) {
  const auto& segs = curve.segments;
  std::size_t i = 0;
  while (i < segs.size()) {
    if (!segs[i].vertical()) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < segs.size() && segs[j].vertical() && segs[j].base_price == segs[i].base_price) ++j;
    if (j - i > 1) {
      double volume = 0.0;
      for (std::size_t h = i; h < j; ++h) volume += segs[h].quantity_span * fill[h];
      // Ordinary segments first, curtailment segments take the remainder.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t h = i; h < j; ++h) {
          if (segs[h].is_curtailment != (pass == 1)) continue;
          double take = std::min(volume, segs[h].quantity_span);
          fill[h] = std::clamp(take / segs[h].quantity_span, 0.0, 1.0);
          volume -= take;
        }
      }
    }
    i = j;
  }
}

}  // namespace dam
