// Copyright 2026 The TowerMarket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "towermarket/runner.hpp"

namespace {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("cannot read scenario file: " + path);
  return buffer.str();
}

void write_outputs(const towermarket::RunOutput& out, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::path dir(out_dir);
  fs::create_directories(dir);
  for (const auto& [name, bytes] : out.files) {
    fs::path path = dir / name;
    std::ofstream ofs(path, std::ios::binary);
    if (!ofs) throw IoError("cannot open output file: " + path.string());
    ofs << bytes;
    ofs.flush();
    if (!ofs) throw IoError("cannot write output file: " + path.string());
    std::cout << "wrote " << path.string() << "\n";
  }
}

void print_headline(const towermarket::RunOutput& out) {
  if (out.report.is_null() || !out.report.contains("result")) return;
  const nlohmann::ordered_json& result = out.report.at("result");
  const std::string command = out.report.value("command", "");
  std::cout << "scenario digest " << out.report.value("scenario_digest", "")
            << "\n";
  if (command == "baseline") {
    std::cout << "revenues " << result.at("revenues").dump() << "\n";
    std::cout << "shares " << result.at("shares").dump() << "\n";
    std::cout << "arpus " << result.at("arpus").dump() << "\n";
  } else if (command == "optimize") {
    std::cout << "prices " << result.at("prices").dump() << "\n";
    std::cout << "objective " << result.at("objective").dump()
              << " degenerate " << result.at("degenerate").dump() << "\n";
  } else if (command == "outsource") {
    std::cout << "towerco revenue " << result.at("towerco_revenue").dump()
              << " value created " << result.at("value_created").dump() << "\n";
  } else if (command == "sweep") {
    std::cout << "epsilon_star " << result.at("epsilon_star").dump()
              << " refined " << result.at("epsilon_star_refined").dump() << "\n";
  } else if (command == "coordinate") {
    for (const auto& run : result.at("runs")) {
      std::cout << "delta " << run.at("delta").dump() << " epsilon "
                << run.at("selected").at("epsilon").dump() << "\n";
    }
  } else if (command == "game") {
    std::cout << "equilibrium " << result.at("indices").dump() << " payoffs "
              << result.at("payoffs").dump() << "\n";
  } else if (command == "verify-nash") {
    std::cout << "certificate " << result.at("certificate").dump() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"towermarket: assignment market analyses on a scenario file"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir = ".";
  std::string mode = "fixed-point";
  std::string optimize_problem;
  std::string figure_id;
  int grid_points = 0;
  unsigned long seed = 0;

  app.add_option("--scenario", scenario_path, "scenario JSON file")->required();
  app.add_option("--out", out_dir, "output directory (default: current)");
  app.add_option("--grid-points", grid_points,
                 "override the optimizer's coarse grid resolution");
  // All algorithms are deterministic; the flag is accepted for interface
  // stability and ignored.
  app.add_option("--seed", seed, "unused");

  CLI::App* sub_baseline = app.add_subcommand("baseline", "assign the market at the scenario prices");
  CLI::App* sub_optimize = app.add_subcommand("optimize", "centralized price optimization");
  sub_optimize->add_option("problem", optimize_problem, "sum, bargaining, or ordered")
      ->required()
      ->check(CLI::IsMember({"sum", "bargaining", "ordered"}));
  CLI::App* sub_outsource = app.add_subcommand("outsource", "infrastructure value accounting");
  CLI::App* sub_sweep = app.add_subcommand("sweep", "selfish price reduction sweep");
  CLI::App* sub_coordinate = app.add_subcommand("coordinate", "coordinated price reduction");
  sub_coordinate->add_option("--mode", mode, "headline solver")
      ->check(CLI::IsMember({"fixed-point", "barrier-descent"}));
  CLI::App* sub_game = app.add_subcommand("game", "discretized pricing game equilibrium");
  CLI::App* sub_verify = app.add_subcommand("verify-nash", "deviation certificate for the equilibrium");
  CLI::App* sub_figure = app.add_subcommand("figure", "emit figure data as CSV");
  sub_figure->add_option("id", figure_id, "figure identifier")->required();
  for (CLI::App* sub : {sub_baseline, sub_optimize, sub_outsource, sub_sweep,
                        sub_coordinate, sub_game, sub_verify, sub_figure}) {
    sub->fallthrough();
  }

  CLI11_PARSE(app, argc, argv);

  towermarket::RunRequest request;
  request.command = app.get_subcommands().front()->get_name();
  if (request.command == "optimize") request.argument = optimize_problem;
  if (request.command == "figure") request.argument = figure_id;
  request.mode = mode;
  if (grid_points > 0) request.grid_points = grid_points;

  auto start = std::chrono::steady_clock::now();
  try {
    std::string bytes = read_file(scenario_path);
    towermarket::ScenarioFile scenario = towermarket::parse_scenario_text(bytes);
    towermarket::RunOutput out = towermarket::run_scenario(request, scenario, bytes);
    write_outputs(out, out_dir);
    print_headline(out);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    std::cout << "elapsed " << elapsed.count() << " ms\n";
    if (out.exit_code != 0) {
      std::cerr << "diagnostic: " << out.diagnostic << "\n";
    }
    return out.exit_code;
  } catch (const towermarket::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const towermarket::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const towermarket::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const towermarket::NoEligibleEquilibrium& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 5;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 5;
  } catch (const std::domain_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
