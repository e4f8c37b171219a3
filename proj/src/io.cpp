#include "dam/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dam/error.hpp"

namespace dam {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::SchemaError, path + ": " + message);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(path, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema(path, "expected a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) schema(path, "expected a string");
  return v.get<std::string>();
}

std::size_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) schema(path, "expected a non-negative integer");
  const auto value = v.get<long long>();
  if (value < 0) schema(path, "expected a non-negative integer");
  return static_cast<std::size_t>(value);
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) schema(path, "expected an array");
  return v;
}

std::vector<double> numbers(const json& v, const std::string& path) {
  std::vector<double> out;
  const auto& arr = array(v, path);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(number(arr[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

PriceInterval interval(const json& v, const std::string& path) {
  auto vals = numbers(v, path);
  if (vals.size() != 2) schema(path, "expected [lower, upper]");
  return {vals[0], vals[1]};
}

json interval_json(const PriceInterval& p) { return json::array({p.lower, p.upper}); }

json selection_json(const Instance& instance, const BidSelection& sel) {
  json blocks = json::array();
  for (std::size_t b = 0; b < sel.blocks.size(); ++b)
    if (sel.block(b)) blocks.push_back(instance.blocks()[b].id);
  json flex = json::array();
  for (std::size_t f = 0; f < sel.flex_hours.size(); ++f)
    if (sel.flex_hours[f]) flex.push_back({{"id", instance.flex_bids()[f].id}, {"hour", *sel.flex_hours[f]}});
  return {{"blocks", blocks}, {"flex", flex}};
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceData parse_instance_data(std::string_view input) {
  json doc;
  try {
    doc = json::parse(input);
  } catch (const json::parse_error& e) {
    schema("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("$", "expected an object");
  InstanceData d;
  if (doc.contains("version") && count(doc["version"], "$.version") != 1) schema("$.version", "unsupported version");
  d.price_interval = interval(field(doc, "price_interval", "$"), "$.price_interval");
  d.hours = count(field(doc, "hours", "$"), "$.hours");

  const auto& areas = array(field(doc, "areas", "$"), "$.areas");
  for (std::size_t i = 0; i < areas.size(); ++i) {
    const std::string p = "$.areas[" + std::to_string(i) + "]";
    AreaSpec a;
    a.id = text(field(areas[i], "id", p), p + ".id");
    if (areas[i].contains("price_interval") && !areas[i]["price_interval"].is_null())
      a.interval = interval(areas[i]["price_interval"], p + ".price_interval");
    d.areas.push_back(std::move(a));
  }
  const auto& curves = array(field(doc, "curves", "$"), "$.curves");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const std::string p = "$.curves[" + std::to_string(i) + "]";
    CurveSpec c;
    c.area = text(field(curves[i], "area", p), p + ".area");
    c.hour = count(field(curves[i], "hour", p), p + ".hour");
    const auto& nodes = array(field(curves[i], "nodes", p), p + ".nodes");
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      auto pq = numbers(nodes[k], p + ".nodes[" + std::to_string(k) + "]");
      if (pq.size() != 2) schema(p + ".nodes[" + std::to_string(k) + "]", "expected [price, quantity]");
      c.nodes.push_back({pq[0], pq[1]});
    }
    d.curves.push_back(std::move(c));
  }
  if (doc.contains("blocks")) {
    const auto& blocks = array(doc["blocks"], "$.blocks");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string p = "$.blocks[" + std::to_string(i) + "]";
      BlockSpec b;
      b.id = text(field(blocks[i], "id", p), p + ".id");
      b.area = text(field(blocks[i], "area", p), p + ".area");
      b.limit_price = number(field(blocks[i], "limit_price", p), p + ".limit_price");
      b.quantities = numbers(field(blocks[i], "quantities", p), p + ".quantities");
      d.blocks.push_back(std::move(b));
    }
  }
  if (doc.contains("links")) {
    const auto& links = array(doc["links"], "$.links");
    for (std::size_t i = 0; i < links.size(); ++i) {
      const std::string p = "$.links[" + std::to_string(i) + "]";
      d.links.push_back({text(field(links[i], "child", p), p + ".child"), text(field(links[i], "parent", p), p + ".parent")});
    }
  }
  if (doc.contains("flex")) {
    const auto& flex = array(doc["flex"], "$.flex");
    for (std::size_t i = 0; i < flex.size(); ++i) {
      const std::string p = "$.flex[" + std::to_string(i) + "]";
      FlexSpec f;
      f.id = text(field(flex[i], "id", p), p + ".id");
      f.area = text(field(flex[i], "area", p), p + ".area");
      f.limit_price = number(field(flex[i], "limit_price", p), p + ".limit_price");
      f.quantity = number(field(flex[i], "quantity", p), p + ".quantity");
      d.flex.push_back(std::move(f));
    }
  }
  if (doc.contains("interconnectors")) {
    const auto& ics = array(doc["interconnectors"], "$.interconnectors");
    for (std::size_t i = 0; i < ics.size(); ++i) {
      const std::string p = "$.interconnectors[" + std::to_string(i) + "]";
      InterconnectorSpec c;
      c.id = text(field(ics[i], "id", p), p + ".id");
      c.from = text(field(ics[i], "from", p), p + ".from");
      c.to = text(field(ics[i], "to", p), p + ".to");
      c.lower = numbers(field(ics[i], "lower", p), p + ".lower");
      c.upper = numbers(field(ics[i], "upper", p), p + ".upper");
      if (ics[i].contains("ramp") && !ics[i]["ramp"].is_null()) c.ramp_rate = number(ics[i]["ramp"], p + ".ramp");
      if (ics[i].contains("initial_flow")) c.initial_flow = number(ics[i]["initial_flow"], p + ".initial_flow");
      d.interconnectors.push_back(std::move(c));
    }
  }
  return d;
}

Instance parse_instance(std::string_view input) {
  InstanceData data = parse_instance_data(input);
  try {
    return Instance::build(std::move(data));
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, e.what());
  }
}

std::string serialize_instance(const InstanceData& d) {
  json doc;
  doc["version"] = 1;
  doc["price_interval"] = interval_json(d.price_interval);
  doc["hours"] = d.hours;
  doc["areas"] = json::array();
  for (const auto& a : d.areas) {
    json j{{"id", a.id}};
    if (a.interval) j["price_interval"] = interval_json(*a.interval);
    doc["areas"].push_back(j);
  }
  doc["curves"] = json::array();
  for (const auto& c : d.curves) {
    json nodes = json::array();
    for (const auto& n : c.nodes) nodes.push_back({n.price, n.quantity});
    doc["curves"].push_back({{"area", c.area}, {"hour", c.hour}, {"nodes", nodes}});
  }
  doc["blocks"] = json::array();
  for (const auto& b : d.blocks)
    doc["blocks"].push_back({{"id", b.id}, {"area", b.area}, {"limit_price", b.limit_price}, {"quantities", b.quantities}});
  doc["links"] = json::array();
  for (const auto& l : d.links) doc["links"].push_back({{"child", l.child}, {"parent", l.parent}});
  doc["flex"] = json::array();
  for (const auto& f : d.flex)
    doc["flex"].push_back({{"id", f.id}, {"area", f.area}, {"limit_price", f.limit_price}, {"quantity", f.quantity}});
  doc["interconnectors"] = json::array();
  for (const auto& c : d.interconnectors) {
    json j{{"id", c.id}, {"from", c.from}, {"to", c.to}, {"lower", c.lower}, {"upper", c.upper},
           {"initial_flow", c.initial_flow}};
    j["ramp"] = c.ramp_rate ? json(*c.ramp_rate) : json(nullptr);
    doc["interconnectors"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

std::string write_solution(const Instance& instance, const ClearingResult& r) {
  json doc;
  doc["version"] = 1;
  doc["mode"] = to_string(r.mode);
  doc["status"] = to_string(r.status);
  doc["welfare"] = r.welfare;
  doc["dual_bound"] = r.dual_bound;
  doc["relative_gap"] = r.relative_gap;
  doc["selection"] = selection_json(instance, r.solution.selection);
  doc["delta"] = json::array();
  for (std::size_t a = 0; a < instance.areas().size(); ++a) {
    for (std::size_t t = 0; t < instance.hour_count(); ++t) {
      const std::size_t off = instance.segment_offset(a, t);
      const std::size_t n = instance.curve(a, t).segments.size();
      std::vector<double> vals(r.solution.delta.begin() + off, r.solution.delta.begin() + off + n);
      doc["delta"].push_back({{"area", instance.areas()[a].id}, {"hour", t}, {"values", vals}});
    }
  }
  doc["flows"] = json::array();
  for (std::size_t c = 0; c < instance.interconnectors().size(); ++c) {
    std::vector<double> vals;
    for (std::size_t t = 0; t < instance.hour_count(); ++t) vals.push_back(r.solution.flows(c, t));
    doc["flows"].push_back({{"id", instance.interconnectors()[c].id}, {"values", vals}});
  }
  doc["prices"] = json::array();
  for (std::size_t a = 0; a < instance.areas().size(); ++a) {
    std::vector<double> vals;
    for (std::size_t t = 0; t < instance.hour_count(); ++t) vals.push_back(r.prices(a, t));
    doc["prices"].push_back({{"area", instance.areas()[a].id}, {"values", vals}});
  }
  doc["prbs"] = json::array();
  for (const auto& p : r.prbs) {
    json j;
    if (p.kind == BinaryVar::Kind::block) {
      j = {{"kind", "block"}, {"id", instance.blocks()[p.bid].id}};
    } else {
      j = {{"kind", "flex"}, {"id", instance.flex_bids()[p.bid].id}, {"hour", *p.hour}};
    }
    j["surplus"] = p.surplus;
    doc["prbs"].push_back(j);
  }
  doc["iterations"] = json::array();
  for (const auto& it : r.log) {
    json losses_b = json::array();
    for (auto b : it.losses.blocks) losses_b.push_back(instance.blocks()[b].id);
    json losses_f = json::array();
    for (auto [f, t] : it.losses.flex) losses_f.push_back({{"id", instance.flex_bids()[f].id}, {"hour", t}});
    doc["iterations"].push_back({{"master_objective", it.master_objective},
                                 {"selection", selection_json(instance, it.selection)},
                                 {"loss_blocks", losses_b},
                                 {"loss_flex", losses_f},
                                 {"curtailment_violations", it.curtailment_violations},
                                 {"cuts", it.cuts}});
  }
  doc["warnings"] = r.warnings;
  doc["curtailment_cuts_fired"] = r.curtailment_cuts_fired;
  return doc.dump(2) + "\n";
}

SolutionDocument parse_solution(std::string_view input, const Instance& instance) {
  json doc;
  try {
    doc = json::parse(input);
  } catch (const json::parse_error& e) {
    schema("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("$", "expected an object");
  SolutionDocument out;
  const std::size_t T = instance.hour_count();
  out.solution.selection = BidSelection::none(instance);
  out.solution.delta.assign(instance.segment_count(), 0.0);
  out.solution.flows = FlowMatrix(instance.interconnectors().size(), T);
  out.prices = PriceVector(instance.areas().size(), T);

  const auto& sel = field(doc, "selection", "$");
  const auto& blocks = array(field(sel, "blocks", "$.selection"), "$.selection.blocks");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const std::string p = "$.selection.blocks[" + std::to_string(i) + "]";
    auto b = instance.find_block(text(blocks[i], p));
    if (!b) schema(p, "unknown block");
    out.solution.selection.blocks[*b] = 1;
  }
  if (sel.contains("flex")) {
    const auto& flex = array(sel["flex"], "$.selection.flex");
    for (std::size_t i = 0; i < flex.size(); ++i) {
      const std::string p = "$.selection.flex[" + std::to_string(i) + "]";
      auto f = instance.find_flex(text(field(flex[i], "id", p), p + ".id"));
      if (!f) schema(p, "unknown flex bid");
      const std::size_t h = count(field(flex[i], "hour", p), p + ".hour");
      if (h >= T) schema(p + ".hour", "hour out of range");
      if (out.solution.selection.flex_hours[*f]) schema(p, "flex bid executed twice");
      out.solution.selection.flex_hours[*f] = h;
    }
  }
  const auto& delta = array(field(doc, "delta", "$"), "$.delta");
  for (std::size_t i = 0; i < delta.size(); ++i) {
    const std::string p = "$.delta[" + std::to_string(i) + "]";
    auto a = instance.find_area(text(field(delta[i], "area", p), p + ".area"));
    if (!a) schema(p, "unknown area");
    const std::size_t t = count(field(delta[i], "hour", p), p + ".hour");
    if (t >= T) schema(p + ".hour", "hour out of range");
    auto vals = numbers(field(delta[i], "values", p), p + ".values");
    if (vals.size() != instance.curve(*a, t).segments.size()) schema(p + ".values", "wrong number of segments");
    std::copy(vals.begin(), vals.end(), out.solution.delta.begin() + instance.segment_offset(*a, t));
  }
  const auto& flows = array(field(doc, "flows", "$"), "$.flows");
  for (std::size_t i = 0; i < flows.size(); ++i) {
    const std::string p = "$.flows[" + std::to_string(i) + "]";
    auto c = instance.find_interconnector(text(field(flows[i], "id", p), p + ".id"));
    if (!c) schema(p, "unknown interconnector");
    auto vals = numbers(field(flows[i], "values", p), p + ".values");
    if (vals.size() != T) schema(p + ".values", "expected one value per hour");
    for (std::size_t t = 0; t < T; ++t) out.solution.flows(*c, t) = vals[t];
  }
  const auto& prices = array(field(doc, "prices", "$"), "$.prices");
  for (std::size_t i = 0; i < prices.size(); ++i) {
    const std::string p = "$.prices[" + std::to_string(i) + "]";
    auto a = instance.find_area(text(field(prices[i], "area", p), p + ".area"));
    if (!a) schema(p, "unknown area");
    auto vals = numbers(field(prices[i], "values", p), p + ".values");
    if (vals.size() != T) schema(p + ".values", "expected one value per hour");
    for (std::size_t t = 0; t < T; ++t) out.prices(*a, t) = vals[t];
  }
  out.welfare = number(field(doc, "welfare", "$"), "$.welfare");
  return out;
}

std::string write_report(const ConditionReport& report, double reported_welfare, double recomputed_welfare) {
  json doc;
  doc["pass"] = report.pass;
  doc["reported_welfare"] = reported_welfare;
  doc["recomputed_welfare"] = recomputed_welfare;
  doc["violations"] = json::array();
  for (const auto& v : report.violations)
    doc["violations"].push_back({{"condition", v.condition}, {"location", v.location}, {"amount", v.amount}});
  return doc.dump(2) + "\n";
}

}  // namespace dam
