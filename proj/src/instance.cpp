#include "dam/instance.hpp"

#include <cmath>
#include <map>
#include <set>

#include "dam/error.hpp"

namespace dam {

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error(ErrorCode::InvalidInstance, message); }

template <class Specs>
std::map<std::string, std::size_t> index_ids(const Specs& specs, const char* kind) {
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].id.empty()) invalid(std::string(kind) + " with empty id");
    if (!out.emplace(specs[i].id, i).second) invalid(std::string("duplicate ") + kind + " id '" + specs[i].id + "'");
  }
  return out;
}

std::size_t lookup(const std::map<std::string, std::size_t>& ids, const std::string& id, const char* kind) {
  auto it = ids.find(id);
  if (it == ids.end()) throw Error(ErrorCode::UnknownId, std::string("unknown ") + kind + " '" + id + "'");
  return it->second;
}

template <class T>
std::optional<std::size_t> find_by_id(const std::vector<T>& items, const std::string& id) {
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].id == id) return i;
  return std::nullopt;
}

}  // namespace

Instance Instance::build(InstanceData data) {
  Instance inst;
  const auto& P = data.price_interval;
  if (!std::isfinite(P.lower) || !std::isfinite(P.upper) || P.lower > P.upper)
    invalid("global price interval must be finite with lower <= upper");
  if (data.hours == 0) invalid("at least one hour required");
  const std::size_t T = data.hours;

  auto area_ids = index_ids(data.areas, "area");
  for (const auto& a : data.areas) {
    PriceInterval interval = a.interval.value_or(P);
    if (interval.lower > interval.upper) invalid("area '" + a.id + "' has lower > upper");
    if (!P.contains(interval, kEps))
      throw Error(ErrorCode::PriceOutOfRange, "area '" + a.id + "' interval exceeds the global interval");
    inst.areas_.push_back({a.id, interval});
  }

  const std::size_t A = inst.areas_.size();
  std::vector<const CurveSpec*> curve_specs(A * T, nullptr);
  for (const auto& c : data.curves) {
    std::size_t a = lookup(area_ids, c.area, "area");
    if (c.hour >= T) throw Error(ErrorCode::UnknownId, "curve hour " + std::to_string(c.hour) + " out of range");
    if (curve_specs[a * T + c.hour])
      invalid("duplicate curve for area '" + c.area + "' hour " + std::to_string(c.hour));
    curve_specs[a * T + c.hour] = &c;
  }
  for (std::size_t a = 0; a < A; ++a) {
    for (std::size_t t = 0; t < T; ++t) {
      const CurveSpec* spec = curve_specs[a * T + t];
      if (!spec)
        throw Error(ErrorCode::MissingCurve,
                    "no curve for area '" + inst.areas_[a].id + "' hour " + std::to_string(t));
      NetCurve curve = build_net_curve(spec->nodes, inst.areas_[a].interval, P);
      curve.area = a;
      curve.hour = t;
      inst.segment_offsets_.push_back(inst.segment_refs_.size());
      for (std::size_t h = 0; h < curve.segments.size(); ++h) inst.segment_refs_.push_back({a, t, h});
      inst.curves_.push_back(std::move(curve));
    }
  }

  auto block_ids = index_ids(data.blocks, "block");
  for (const auto& b : data.blocks) {
    if (b.quantities.size() != T) invalid("block '" + b.id + "' needs one quantity per hour");
    bool any = false;
    for (double q : b.quantities) {
      if (!std::isfinite(q)) invalid("block '" + b.id + "' has a non-finite quantity");
      any = any || q != 0.0;
    }
    if (!any) invalid("block '" + b.id + "' has no nonzero quantity");
    if (!P.contains(b.limit_price, kEps))
      throw Error(ErrorCode::PriceOutOfRange, "block '" + b.id + "' limit price outside the price interval");
    inst.blocks_.push_back({b.id, lookup(area_ids, b.area, "area"), b.limit_price, b.quantities});
  }

  std::set<std::pair<std::size_t, std::size_t>> seen_links;
  for (const auto& l : data.links) {
    BlockLink link{lookup(block_ids, l.child, "block"), lookup(block_ids, l.parent, "block")};
    if (link.child == link.parent) invalid("block '" + l.child + "' linked to itself");
    if (!seen_links.emplace(link.child, link.parent).second) continue;
    inst.links_.push_back(link);
  }

  auto flex_ids = index_ids(data.flex, "flex bid");
  (void)flex_ids;
  for (const auto& f : data.flex) {
    if (!std::isfinite(f.quantity) || f.quantity == 0.0) invalid("flex bid '" + f.id + "' needs a nonzero quantity");
    if (!P.contains(f.limit_price, kEps))
      throw Error(ErrorCode::PriceOutOfRange, "flex bid '" + f.id + "' limit price outside the price interval");
    inst.flex_.push_back({f.id, lookup(area_ids, f.area, "area"), f.limit_price, f.quantity});
  }

  auto ic_ids = index_ids(data.interconnectors, "interconnector");
  (void)ic_ids;
  for (const auto& c : data.interconnectors) {
    Interconnector ic{c.id, lookup(area_ids, c.from, "area"), lookup(area_ids, c.to, "area"),
                      c.lower, c.upper, c.ramp_rate, c.initial_flow};
    if (ic.source == ic.sink) invalid("interconnector '" + c.id + "' connects an area to itself");
    if (ic.lower.size() != T || ic.upper.size() != T)
      invalid("interconnector '" + c.id + "' needs per-hour bounds");
    for (std::size_t t = 0; t < T; ++t) {
      if (!std::isfinite(ic.lower[t]) || !std::isfinite(ic.upper[t]) || ic.lower[t] > ic.upper[t])
        invalid("interconnector '" + c.id + "' has invalid bounds at hour " + std::to_string(t));
    }
    if (ic.ramp_rate && !(*ic.ramp_rate >= 0.0))
      invalid("interconnector '" + c.id + "' has a negative ramp rate");
    if (!std::isfinite(ic.initial_flow)) invalid("interconnector '" + c.id + "' has a non-finite initial flow");
    inst.interconnectors_.push_back(std::move(ic));
  }

  inst.data_ = std::move(data);
  return inst;
}

const NetCurveSegment& Instance::segment(std::size_t id) const {
  const auto& ref = segment_refs_.at(id);
  return curve(ref.area, ref.hour).segments[ref.local];
}

std::optional<std::size_t> Instance::find_area(const std::string& id) const { return find_by_id(areas_, id); }
std::optional<std::size_t> Instance::find_block(const std::string& id) const { return find_by_id(blocks_, id); }
std::optional<std::size_t> Instance::find_flex(const std::string& id) const { return find_by_id(flex_, id); }
std::optional<std::size_t> Instance::find_interconnector(const std::string& id) const {
  return find_by_id(interconnectors_, id);
}

BidSelection BidSelection::none(const Instance& instance) {
  BidSelection s;
  s.blocks.assign(instance.blocks().size(), 0);
  s.flex_hours.assign(instance.flex_bids().size(), std::nullopt);
  return s;
}

bool BidSelection::links_satisfied(const Instance& instance) const {
  for (const auto& l : instance.links())
    if (blocks[l.child] && !blocks[l.parent]) return false;
  return true;
}

void BidSelection::validate(const Instance& instance) const {
  if (blocks.size() != instance.blocks().size() || flex_hours.size() != instance.flex_bids().size())
    throw Error(ErrorCode::UnknownId, "selection does not match the instance's bids");
  for (auto v : blocks)
    if (v > 1) throw Error(ErrorCode::UnknownId, "block execution must be 0 or 1");
  for (const auto& h : flex_hours)
    if (h && *h >= instance.hour_count())
      throw Error(ErrorCode::FlexMultiplicity, "flex bid executed in an unknown hour");
  for (const auto& l : instance.links())
    if (blocks[l.child] && !blocks[l.parent])
      throw Error(ErrorCode::LinkViolation, "block '" + instance.blocks()[l.child].id + "' executed without parent '" +
                                                instance.blocks()[l.parent].id + "'");
}

std::size_t BidSelection::executed_count() const {
  std::size_t n = 0;
  for (auto v : blocks) n += v ? 1 : 0;
  for (const auto& h : flex_hours) n += h ? 1 : 0;
  return n;
}

FixedSelectionTerms fixed_selection_terms(const Instance& instance, const BidSelection& selection) {
  FixedSelectionTerms terms;
  terms.volume = Grid<double>(instance.areas().size(), instance.hour_count());
  const auto& blocks = instance.blocks();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (!selection.block(b)) continue;
    for (std::size_t t = 0; t < instance.hour_count(); ++t) {
      terms.value += blocks[b].limit_price * blocks[b].quantities[t];
      terms.volume(blocks[b].area, t) += blocks[b].quantities[t];
    }
  }
  const auto& flex = instance.flex_bids();
  for (std::size_t f = 0; f < flex.size(); ++f) {
    if (!selection.flex_hours[f]) continue;
    terms.value += flex[f].limit_price * flex[f].quantity;
    terms.volume(flex[f].area, *selection.flex_hours[f]) += flex[f].quantity;
  }
  return terms;
}

Grid<double> clearing_residuals(const Instance& instance, const PrimalSolution& solution) {
  const std::size_t T = instance.hour_count();
  auto terms = fixed_selection_terms(instance, solution.selection);
  Grid<double> r = terms.volume;
  for (std::size_t a = 0; a < instance.areas().size(); ++a) {
    for (std::size_t t = 0; t < T; ++t) {
      const auto& curve = instance.curve(a, t);
      std::size_t off = instance.segment_offset(a, t);
      r(a, t) += curve.quantity(std::span<const double>(solution.delta).subspan(off, curve.segments.size()));
    }
  }
  const auto& ics = instance.interconnectors();
  for (std::size_t c = 0; c < ics.size(); ++c) {
    for (std::size_t t = 0; t < T; ++t) {
      r(ics[c].source, t) += solution.flows(c, t);
      r(ics[c].sink, t) -= solution.flows(c, t);
    }
  }
  return r;
}

}  // namespace dam
