#pragma once

#include <string>
#include <string_view>

#include "dam/instance.hpp"
#include "dam/result.hpp"
#include "dam/verify.hpp"

namespace dam {

// Throws SchemaError (with a JSON path) or ValidationError (naming the invariant).
InstanceData parse_instance_data(std::string_view text);
Instance parse_instance(std::string_view text);
std::string serialize_instance(const InstanceData& data);

std::string write_solution(const Instance& instance, const ClearingResult& result);

struct SolutionDocument {
  PrimalSolution solution;
  PriceVector prices;
  double welfare = 0.0;
};

SolutionDocument parse_solution(std::string_view text, const Instance& instance);

std::string write_report(const ConditionReport& report, double reported_welfare, double recomputed_welfare);

std::string read_file(const std::string& path);

}  // namespace dam
