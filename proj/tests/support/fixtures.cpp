#include "support/fixtures.hpp"

namespace dam::testing {

InstanceData four_bid_book() {
  InstanceData d;
  d.price_interval = {-3000.0, 3000.0};
  d.hours = 1;
  d.areas = {{"X", std::nullopt}};
  d.curves = {{"X", 0, {{-3000.0, 0.0}, {3000.0, 0.0}}}};
  d.blocks = {
      {"a", "X", 1.0, {-1.0}},
      {"b", "X", 2.0, {1.0}},
      {"c", "X", 3.0, {-2.0}},
      {"d", "X", 4.0, {2.0}},
  };
  return d;
}

InstanceData two_area(double atc) {
  InstanceData d;
  d.price_interval = {0.0, 100.0};
  d.hours = 1;
  d.areas = {{"R", std::nullopt}, {"S", std::nullopt}};
  d.curves = {
      {"R", 0, {{0.0, 0.0}, {10.0, 0.0}, {10.0, -50.0}, {100.0, -50.0}}},
      {"S", 0, {{0.0, 30.0}, {40.0, 30.0}, {40.0, 0.0}, {100.0, 0.0}}},
  };
  d.interconnectors = {{"RS", "R", "S", {-atc}, {atc}, std::nullopt, 0.0}};
  return d;
}

InstanceData ramp_fixture() {
  InstanceData d;
  d.price_interval = {0.0, 100.0};
  d.hours = 2;
  d.areas = {{"R", std::nullopt}, {"S", std::nullopt}};
  d.curves = {
      {"R", 0, {{0.0, 50.0}, {100.0, -50.0}}},
      {"S", 0, {{0.0, 30.0}, {100.0, -70.0}}},
      {"R", 1, {{0.0, 30.0}, {100.0, -70.0}}},
      {"S", 1, {{0.0, 50.0}, {100.0, -50.0}}},
  };
  d.interconnectors = {{"RS", "R", "S", {-100.0, -100.0}, {100.0, 100.0}, 10.0, -5.0}};
  return d;
}

InstanceData diamond_fixture() {
  InstanceData d;
  d.price_interval = {0.0, 100.0};
  d.hours = 1;
  d.areas = {{"A", std::nullopt}, {"B", std::nullopt}, {"C", std::nullopt}, {"D", std::nullopt}};
  d.curves = {
      {"A", 0, {{0.0, 0.0}, {10.0, 0.0}, {10.0, -100.0}, {100.0, -100.0}}},
      {"B", 0, {{0.0, 0.0}, {100.0, 0.0}}},
      {"C", 0, {{0.0, 0.0}, {100.0, 0.0}}},
      {"D", 0, {{0.0, 100.0}, {50.0, 100.0}, {50.0, 0.0}, {100.0, 0.0}}},
  };
  auto line = [](const char* id, const char* from, const char* to) {
    return InterconnectorSpec{id, from, to, {-200.0}, {200.0}, std::nullopt, 0.0};
  };
  d.interconnectors = {line("AB", "A", "B"), line("BD", "B", "D"), line("AC", "A", "C"), line("CD", "C", "D")};
  return d;
}

InstanceData price_indifferent() {
  InstanceData d;
  d.price_interval = {-3000.0, 3000.0};
  d.hours = 1;
  d.areas = {{"X", std::nullopt}};
  d.curves = {{"X", 0, {{-3000.0, 50.0}, {-5.0, 0.0}, {7.0, 0.0}, {3000.0, -50.0}}}};
  return d;
}

InstanceData empty_book() {
  InstanceData d;
  d.price_interval = {-500.0, 3000.0};
  d.hours = 1;
  d.areas = {{"X", std::nullopt}};
  d.curves = {{"X", 0, {{-500.0, 0.0}, {3000.0, 0.0}}}};
  return d;
}

}  // namespace dam::testing
