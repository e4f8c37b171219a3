#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dam/net_curve.hpp"
#include "dam/types.hpp"

namespace dam {

// Raw order book as submitted; ids are strings, hours are 0..hours-1.
struct AreaSpec {
  std::string id;
  std::optional<PriceInterval> interval;
};

struct CurveSpec {
  std::string area;
  std::size_t hour = 0;
  std::vector<CurveNode> nodes;
};

struct BlockSpec {
  std::string id;
  std::string area;
  double limit_price = 0.0;
  std::vector<double> quantities;
};

struct LinkSpec {
  std::string child;
  std::string parent;
};

struct FlexSpec {
  std::string id;
  std::string area;
  double limit_price = 0.0;
  double quantity = 0.0;
};

struct InterconnectorSpec {
  std::string id;
  std::string from;
  std::string to;
  std::vector<double> lower;
  std::vector<double> upper;
  std::optional<double> ramp_rate;  // nullopt: no ramp constraint
  double initial_flow = 0.0;
};

struct InstanceData {
  PriceInterval price_interval{-3000.0, 3000.0};
  std::size_t hours = 1;
  std::vector<AreaSpec> areas;
  std::vector<CurveSpec> curves;
  std::vector<BlockSpec> blocks;
  std::vector<LinkSpec> links;
  std::vector<FlexSpec> flex;
  std::vector<InterconnectorSpec> interconnectors;
};

struct Area {
  std::string id;
  PriceInterval interval;
};

struct BlockBid {
  std::string id;
  std::size_t area = 0;
  double limit_price = 0.0;
  std::vector<double> quantities;  // demand positive
};

struct FlexBid {
  std::string id;
  std::size_t area = 0;
  double limit_price = 0.0;
  double quantity = 0.0;
};

struct Interconnector {
  std::string id;
  std::size_t source = 0;
  std::size_t sink = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::optional<double> ramp_rate;
  double initial_flow = 0.0;
};

// Execution of block `child` requires execution of block `parent`.
struct BlockLink {
  std::size_t child = 0;
  std::size_t parent = 0;
};

// Identifies one curve segment across the whole instance.
struct SegmentRef {
  std::size_t area = 0;
  std::size_t hour = 0;
  std::size_t local = 0;
};

class Instance {
 public:
  static Instance build(InstanceData data);

  const InstanceData& data() const { return data_; }
  const PriceInterval& price_interval() const { return data_.price_interval; }
  std::size_t hour_count() const { return data_.hours; }
  const std::vector<Area>& areas() const { return areas_; }
  const std::vector<BlockBid>& blocks() const { return blocks_; }
  const std::vector<FlexBid>& flex_bids() const { return flex_; }
  const std::vector<Interconnector>& interconnectors() const { return interconnectors_; }
  const std::vector<BlockLink>& links() const { return links_; }

  const NetCurve& curve(std::size_t area, std::size_t hour) const { return curves_[area * data_.hours + hour]; }
  // Flat segment numbering: curves in (area, hour) order, segments in curve order.
  std::size_t segment_count() const { return segment_refs_.size(); }
  std::size_t segment_offset(std::size_t area, std::size_t hour) const {
    return segment_offsets_[area * data_.hours + hour];
  }
  const SegmentRef& segment_ref(std::size_t id) const { return segment_refs_[id]; }
  const NetCurveSegment& segment(std::size_t id) const;

  std::size_t binary_count() const { return blocks_.size() + flex_.size() * data_.hours; }

  std::optional<std::size_t> find_area(const std::string& id) const;
  std::optional<std::size_t> find_block(const std::string& id) const;
  std::optional<std::size_t> find_flex(const std::string& id) const;
  std::optional<std::size_t> find_interconnector(const std::string& id) const;

 private:
  InstanceData data_;
  std::vector<Area> areas_;
  std::vector<BlockBid> blocks_;
  std::vector<FlexBid> flex_;
  std::vector<Interconnector> interconnectors_;
  std::vector<BlockLink> links_;
  std::vector<NetCurve> curves_;
  std::vector<std::size_t> segment_offsets_;
  std::vector<SegmentRef> segment_refs_;
};

struct BidSelection {
  std::vector<unsigned char> blocks;                     // beta_b
  std::vector<std::optional<std::size_t>> flex_hours;    // hour with phi_{f,t} = 1, if any

  static BidSelection none(const Instance& instance);
  bool block(std::size_t b) const { return blocks[b] != 0; }
  bool flex(std::size_t f, std::size_t t) const { return flex_hours[f] == t; }
  bool links_satisfied(const Instance& instance) const;
  // Throws LinkViolation / UnknownId / FlexMultiplicity.
  void validate(const Instance& instance) const;
  std::size_t executed_count() const;

  auto operator<=>(const BidSelection&) const = default;
  bool operator==(const BidSelection&) const = default;
};

struct PrimalSolution {
  BidSelection selection;
  std::vector<double> delta;  // per segment
  FlowMatrix flows;           // tau(c, t)
};

struct DualCertificate {
  Grid<double> flow_upper;   // mu_bar
  Grid<double> flow_lower;   // mu_low
  Grid<double> ramp_up;      // rho_tilde
  Grid<double> ramp_down;    // rho_breve
  std::vector<double> fill_upper;  // v_bar
  std::vector<double> fill_lower;  // v_low
};

struct FixedSelectionTerms {
  double value = 0.0;   // f(beta, phi)
  Grid<double> volume;  // k(a, t)
};

FixedSelectionTerms fixed_selection_terms(const Instance& instance, const BidSelection& selection);

// C1 residual per (area, hour): curve quantity + k + imports - exports.
Grid<double> clearing_residuals(const Instance& instance, const PrimalSolution& solution);

}  // namespace dam
