#include "dam/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>

#include "dam/driver.hpp"
#include "dam/error.hpp"
#include "dam/io.hpp"
#include "dam/verify.hpp"
#include "dam/welfare.hpp"

namespace dam::cli {

namespace {

void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::SchemaError, "cannot write '" + path + "'");
  file << content;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Infeasible: return infeasible;
    case ErrorCode::IterationLimit:
    case ErrorCode::TimeLimit: return limit;
    default: return input_error;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Day-ahead market clearing with linear prices"};
  app.require_subcommand(1);

  std::string instance_path, out_path, solution_path, mode = "heuristic";
  std::optional<double> time_limit;
  double abs_gap = 1e-9;

  auto* clear_cmd = app.add_subcommand("clear", "Clear an order book");
  clear_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  clear_cmd->add_option("--mode", mode, "heuristic or exact")->check(CLI::IsMember({"heuristic", "exact"}));
  clear_cmd->add_option("--time-limit", time_limit, "Seconds");
  clear_cmd->add_option("--abs-gap", abs_gap, "Absolute optimality gap for the master");
  clear_cmd->add_option("--out", out_path, "Solution JSON (default: stdout)");

  auto* verify_cmd = app.add_subcommand("verify", "Check a solution against the equilibrium conditions");
  verify_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  verify_cmd->add_option("--solution", solution_path, "Solution JSON")->required();
  verify_cmd->add_option("--out", out_path, "Report JSON (default: stdout)");

  auto* oracle_cmd = app.add_subcommand("oracle", "Clear by enumerating every selection");
  oracle_cmd->add_option("--instance", instance_path, "Instance JSON")->required();
  oracle_cmd->add_option("--out", out_path, "Solution JSON (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return success;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return input_error;
  }

  try {
    const Instance instance = parse_instance(read_file(instance_path));
    if (*clear_cmd) {
      ClearingOptions options;
      options.time_limit = time_limit;
      options.abs_gap = abs_gap;
      auto result = clear(instance, mode == "exact" ? ClearingMode::exact : ClearingMode::heuristic, options);
      write_output(out_path, write_solution(instance, result), out);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      return result.status == ClearingStatus::limit ? limit : success;
    }
    if (*oracle_cmd) {
      auto result = oracle_clear(instance);
      write_output(out_path, write_solution(instance, result.result), out);
      return success;
    }
    if (*verify_cmd) {
      auto doc = parse_solution(read_file(solution_path), instance);
      auto report = check_all(instance, doc.solution, doc.prices);
      const double recomputed = welfare(instance, doc.solution);
      if (std::abs(recomputed - doc.welfare) > 1e-6 * std::max(1.0, std::abs(recomputed)))
        report.add("welfare", "document", std::abs(recomputed - doc.welfare));
      write_output(out_path, write_report(report, doc.welfare, recomputed), out);
      return success;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }
  return input_error;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace dam::cli
