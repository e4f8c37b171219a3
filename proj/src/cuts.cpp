#include "dam/cuts.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "dam/error.hpp"
#include "dam/welfare.hpp"

namespace dam {

double BinaryVar::value(const BidSelection& selection) const {
  if (kind == Kind::block) return selection.block(bid) ? 1.0 : 0.0;
  return selection.flex(bid, hour) ? 1.0 : 0.0;
}

std::string to_string(CutKind kind) {
  switch (kind) {
    case CutKind::bid_cut: return "bid-cut";
    case CutKind::no_good: return "no-good";
    case CutKind::curtailment: return "curtailment";
  }
  return "unknown";
}

double Cut::activity(const BidSelection& selection) const {
  double s = 0.0;
  for (const auto& t : terms) s += t.coefficient * t.var.value(selection);
  return s;
}

bool Cut::satisfied_by(const BidSelection& selection, double tol) const {
  const double a = activity(selection);
  return sense == CutSense::less_equal ? a <= rhs + tol : a >= rhs - tol;
}

std::string Cut::describe(const Instance& instance) const {
  std::ostringstream out;
  bool first = true;
  for (const auto& t : terms) {
    const bool neg = t.coefficient < 0.0;
    out << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    const double mag = std::abs(t.coefficient);
    if (mag != 1.0) out << mag << "*";
    if (t.var.kind == BinaryVar::Kind::block)
      out << "beta[" << instance.blocks()[t.var.bid].id << "]";
    else
      out << "phi[" << instance.flex_bids()[t.var.bid].id << "," << t.var.hour << "]";
    first = false;
  }
  if (first) out << "0";
  out << (sense == CutSense::less_equal ? " <= " : " >= ") << rhs;
  return out.str();
}

void validate_cuts(const Instance& instance, const CutPool& cuts) {
  for (const auto& cut : cuts) {
    for (const auto& t : cut.terms) {
      const bool ok = t.var.kind == BinaryVar::Kind::block
                          ? t.var.bid < instance.blocks().size()
                          : t.var.bid < instance.flex_bids().size() && t.var.hour < instance.hour_count();
      if (!ok) throw Error(ErrorCode::UnknownId, "cut references an unknown bid");
    }
  }
}

LossSets loss_sets(const Instance& instance, const BidSelection& selection, const PriceVector& prices, double tol) {
  LossSets out;
  for (std::size_t b = 0; b < instance.blocks().size(); ++b)
    if (selection.block(b) && block_surplus(instance, b, prices) < -tol) out.blocks.push_back(b);
  for (std::size_t f = 0; f < instance.flex_bids().size(); ++f) {
    const auto& h = selection.flex_hours[f];
    if (h && flex_surplus(instance, f, *h, prices) < -tol) out.flex.emplace_back(f, *h);
  }
  return out;
}

Cut bid_cut(const LossSets& losses, CutKind kind) {
  if (losses.empty()) throw Error(ErrorCode::EmptyLossSets, "no loss-making bids to cut");
  Cut cut;
  cut.kind = kind;
  for (auto b : losses.blocks) cut.terms.push_back({BinaryVar::block_var(b), 1.0});
  for (auto [f, t] : losses.flex) cut.terms.push_back({BinaryVar::flex_var(f, t), 1.0});
  cut.rhs = static_cast<double>(cut.terms.size()) - 1.0;
  return cut;
}

Cut no_good_cut(const Instance& instance, const BidSelection& selection, CutKind kind) {
  // sum_{x*=0} x + sum_{x*=1} (1 - x) >= 1, stored with constants moved right.
  Cut cut;
  cut.kind = kind;
  cut.sense = CutSense::greater_equal;
  double ones = 0.0;
  auto add = [&](BinaryVar v, bool on) {
    cut.terms.push_back({v, on ? -1.0 : 1.0});
    if (on) ones += 1.0;
  };
  for (std::size_t b = 0; b < instance.blocks().size(); ++b) add(BinaryVar::block_var(b), selection.block(b));
  for (std::size_t f = 0; f < instance.flex_bids().size(); ++f)
    for (std::size_t t = 0; t < instance.hour_count(); ++t) add(BinaryVar::flex_var(f, t), selection.flex(f, t));
  cut.rhs = 1.0 - ones;
  return cut;
}

std::vector<CurtailmentViolation> curtailment_violations(const Instance& instance, const PrimalSolution& solution,
                                                         double tol) {
  std::vector<CurtailmentViolation> out;
  const auto& blocks = instance.blocks();
  const auto& flex = instance.flex_bids();
  for (std::size_t h = 0; h < instance.segment_count(); ++h) {
    const auto& s = instance.segment(h);
    if (!s.is_curtailment) continue;
    const auto& ref = instance.segment_ref(h);
    const bool demand = s.base_quantity > 0.0;
    const double z = solution.delta[h];
    if (demand ? z >= 1.0 - tol : z <= tol) continue;
    CurtailmentViolation v{ref.area, ref.hour, h, demand, {}, {}};
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (!solution.selection.block(b) || blocks[b].area != ref.area) continue;
      const double q = blocks[b].quantities[ref.hour];
      if (demand ? q > 0.0 : q < 0.0) v.blocks.push_back(b);
    }
    for (std::size_t f = 0; f < flex.size(); ++f) {
      if (!solution.selection.flex(f, ref.hour) || flex[f].area != ref.area) continue;
      if (demand ? flex[f].quantity > 0.0 : flex[f].quantity < 0.0) v.flex.push_back(f);
    }
    if (!v.blocks.empty() || !v.flex.empty()) out.push_back(std::move(v));
  }
  return out;
}

Cut curtailment_cut(const Instance&, const BidSelection& selection, const std::vector<CurtailmentViolation>& violations) {
  std::set<std::size_t> blocks;
  std::set<std::pair<std::size_t, std::size_t>> flex;
  for (const auto& v : violations) {
    blocks.insert(v.blocks.begin(), v.blocks.end());
    for (auto f : v.flex) flex.emplace(f, *selection.flex_hours[f]);
  }
  LossSets set;
  set.blocks.assign(blocks.begin(), blocks.end());
  set.flex.assign(flex.begin(), flex.end());
  return bid_cut(set, CutKind::curtailment);
}

}  // namespace dam
