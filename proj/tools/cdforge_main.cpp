#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cdforge/experiment.hpp"

namespace {

constexpr const char* kExperiments[] = {"ising-bench",  "mps-bench",         "trotter-cost",
                                        "scaling",      "predict-tp",        "dump-coefficients"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"counterdiabatic driving experiments"};
  app.require_subcommand(1);

  std::string config_file;
  std::string out_dir;
  int workers = 0;

  for (const char* name : kExperiments) {
    CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
    sub->add_option("--config", config_file, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--workers", workers, "worker threads (overrides config)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    std::ifstream in(config_file);
    if (!in) {
      std::cerr << "cannot open config: " << config_file << "\n";
      return 2;
    }
    cdforge::Json j = cdforge::Json::parse(in);
    if (!j.contains("experiment")) j["experiment"] = experiment;
    if (j.at("experiment").get<std::string>() != experiment) {
      std::cerr << "config experiment '" << j.at("experiment").get<std::string>()
                << "' does not match subcommand '" << experiment << "'\n";
      return 2;
    }
    cdforge::ExperimentConfig config = cdforge::parse_config(j);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (workers > 0) config.workers = workers;
    return cdforge::run_experiment(config, std::cout);
  } catch (const cdforge::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const cdforge::Json::exception& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
