#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cdforge/evolve.hpp"
#include "cdforge/scaling.hpp"
#include "cdforge/trotter.hpp"

namespace cdforge {

using Json = nlohmann::ordered_json;

struct DriverSpec {
  DriverKind driver = DriverKind::Adiabatic;
  AnsatzSpec ansatz;
  std::string label;
};

// One batch experiment: a sweep grid, a path, a driver list, output files.
// Everything is deterministic; identical configs reproduce identical bytes.
struct ExperimentConfig {
  std::string experiment;  // ising-bench | mps-bench | trotter-cost | scaling |
                           // predict-tp | dump-coefficients
  std::string out_dir = "out";
  int workers = 1;
  HamiltonianPath path;
  ScheduleKind schedule = ScheduleKind::Sin2Sin2;
  double dt = 0.05;
  double tau = 0.05;
  std::vector<double> t_grid;
  std::vector<int> n_grid;        // scaling / predict-tp system sizes
  std::vector<double> xi_grid;    // optional mps correlation-length sweep
  std::vector<int> n_targets;     // predict-tp
  double f_target = 0.9;
  bool verify_direct = false;
  std::vector<DriverSpec> drivers;
  bool emit_traces = false;
  Index dense_cap = kDefaultDenseCap;
};

ExperimentConfig parse_config(const Json& j);
Json config_to_json(const ExperimentConfig& config);

std::string driver_label(const DriverSpec& spec);

// Runs every grid point (worker threads up to config.workers), writes
// results.json plus the experiment's tidy CSVs into out_dir, prints a summary
// table. Returns 0 when every point succeeded, 1 otherwise; per-point
// failures are recorded without aborting the sweep.
int run_experiment(const ExperimentConfig& config, std::ostream& log);

}  // namespace cdforge
