#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdforge/experiment.hpp"

using namespace cdforge;
namespace fs = std::filesystem;

namespace {

Json small_ising_config(const std::string& out_dir) {
  Json j;
  j["experiment"] = "ising-bench";
  j["out_dir"] = out_dir;
  j["path"] = {{"kind", "ising"}, {"n", 3}};
  j["t_grid"] = {0.5};
  j["drivers"] = Json::array({
      Json{{"driver", "adiabatic"}},
      Json{{"driver", "cd"}, {"ansatz", "wnc"}, {"order", 1}, {"optimizer", "global"}},
  });
  return j;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config round-trips through serialization unchanged") {
  Json j = small_ising_config("/tmp/cdforge_rt");
  ExperimentConfig a = parse_config(j);
  Json dumped = config_to_json(a);
  ExperimentConfig b = parse_config(dumped);
  CHECK(config_to_json(b) == dumped);
}

TEST_CASE("config validation fails loudly") {
  Json j = small_ising_config("/tmp/x");
  j.erase("t_grid");
  CHECK_THROWS_AS(parse_config(j), DomainError);

  Json k = small_ising_config("/tmp/x");
  k["drivers"] = Json::array();
  CHECK_THROWS_AS(parse_config(k), DomainError);

  Json m = small_ising_config("/tmp/x");
  m["drivers"][1]["ansatz"] = "banana";
  CHECK_THROWS_AS(parse_config(m), DomainError);

  Json p = small_ising_config("/tmp/x");
  p["path"] = {{"kind", "mps"}, {"n_p", 3}};  // neither g nor xi
  CHECK_THROWS_AS(parse_config(p), DomainError);
}

TEST_CASE("two drivers and one time produce two tidy rows") {
  const std::string dir = "/tmp/cdforge_rows";
  fs::remove_all(dir);
  ExperimentConfig c = parse_config(small_ising_config(dir));
  std::ostringstream log;
  CHECK(run_experiment(c, log) == 0);
  std::string csv = slurp(dir + "/infidelity_vs_t.csv");
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 3);  // header + 2 rows
  CHECK(csv.rfind("t,driver,fidelity,infidelity", 0) == 0);
}

TEST_CASE("rerunning an identical config reproduces byte-identical outputs") {
  const std::string dir1 = "/tmp/cdforge_det1";
  const std::string dir2 = "/tmp/cdforge_det2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  Json j = small_ising_config(dir1);
  std::ostringstream log;
  run_experiment(parse_config(j), log);
  j["out_dir"] = dir2;
  run_experiment(parse_config(j), log);
  CHECK(slurp(dir1 + "/infidelity_vs_t.csv") == slurp(dir2 + "/infidelity_vs_t.csv"));
  // results.json differs only in out_dir; compare the points arrays.
  Json r1 = Json::parse(slurp(dir1 + "/results.json"));
  Json r2 = Json::parse(slurp(dir2 + "/results.json"));
  CHECK(r1["points"] == r2["points"]);
}

TEST_CASE("workers > 1 produce the same aggregated results") {
  const std::string dir1 = "/tmp/cdforge_w1";
  const std::string dir2 = "/tmp/cdforge_w2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  Json j = small_ising_config(dir1);
  std::ostringstream log;
  run_experiment(parse_config(j), log);
  j["out_dir"] = dir2;
  j["workers"] = 2;
  run_experiment(parse_config(j), log);
  Json r1 = Json::parse(slurp(dir1 + "/results.json"));
  Json r2 = Json::parse(slurp(dir2 + "/results.json"));
  CHECK(r1["points"] == r2["points"]);
}

TEST_CASE("mps config with xi resolves g in the echo and per-point records") {
  const std::string dir = "/tmp/cdforge_xi";
  fs::remove_all(dir);
  Json j;
  j["experiment"] = "mps-bench";
  j["out_dir"] = dir;
  j["path"] = {{"kind", "mps"}, {"n_p", 2}, {"xi", 3.8}};
  j["t_grid"] = {0.2};
  j["drivers"] = Json::array({Json{{"driver", "adiabatic"}}});
  ExperimentConfig c = parse_config(j);
  CHECK(c.path.mps.g == doctest::Approx(-0.13085).epsilon(1e-4));
  std::ostringstream log;
  CHECK(run_experiment(c, log) == 0);
  Json r = Json::parse(slurp(dir + "/results.json"));
  CHECK(r["points"][0]["path"]["g"].get<double>() ==
        doctest::Approx(-0.13085).epsilon(1e-4));
}

TEST_CASE("partial failures are recorded without aborting the sweep") {
  const std::string dir = "/tmp/cdforge_fail";
  fs::remove_all(dir);
  Json j = small_ising_config(dir);
  // A pinned window cap below the tuple widths aborts this driver's points.
  j["drivers"].push_back(Json{{"driver", "cd"},
                              {"ansatz", "nc"},
                              {"order", 2},
                              {"optimizer", "global"},
                              {"window_cap", 2}});
  std::ostringstream log;
  int code = run_experiment(parse_config(j), log);
  CHECK(code == 1);
  Json r = Json::parse(slurp(dir + "/results.json"));
  int ok = 0, err = 0;
  for (const auto& p : r["points"])
    (p["status"] == "ok" ? ok : err) += 1;
  CHECK(ok == 2);
  CHECK(err == 1);
  CHECK(r["points"][2].contains("error"));
}

TEST_CASE("empty sweep emits a header-only csv") {
  const std::string dir = "/tmp/cdforge_empty";
  fs::remove_all(dir);
  Json j = small_ising_config(dir);
  // Single point that fails: results exist but no ok rows.
  j["drivers"] = Json::array({Json{{"driver", "cd"},
                                   {"ansatz", "nc"},
                                   {"order", 2},
                                   {"optimizer", "global"},
                                   {"window_cap", 2}}});
  std::ostringstream log;
  run_experiment(parse_config(j), log);
  CHECK(slurp(dir + "/infidelity_vs_t.csv") == "t,driver,fidelity,infidelity\n");
}

TEST_CASE("dump-coefficients writes one row per group per step") {
  const std::string dir = "/tmp/cdforge_dump";
  fs::remove_all(dir);
  Json j;
  j["experiment"] = "dump-coefficients";
  j["out_dir"] = dir;
  j["path"] = {{"kind", "ising"}, {"n", 2}};
  j["t_grid"] = {0.25};
  j["drivers"] = Json::array(
      {Json{{"driver", "cd"}, {"ansatz", "wnc"}, {"order", 1}, {"optimizer", "global"}}});
  std::ostringstream log;
  CHECK(run_experiment(parse_config(j), log) == 0);
  std::string csv = slurp(dir + "/coefficients.csv");
  int lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 1 + 5 * (5 * 2 - 4));  // header + groups x steps
  CHECK(csv.rfind("t,s,group,alpha", 0) == 0);
}

TEST_CASE("trotter-cost emits rows whose cnot counts grow with steps") {
  const std::string dir = "/tmp/cdforge_trot";
  fs::remove_all(dir);
  Json j;
  j["experiment"] = "trotter-cost";
  j["out_dir"] = dir;
  j["path"] = {{"kind", "ising"}, {"n", 3}};
  j["tau"] = 0.05;
  j["t_grid"] = {0.25, 0.5, 1.0};
  j["drivers"] = Json::array({Json{{"driver", "adiabatic"}}});
  std::ostringstream log;
  CHECK(run_experiment(parse_config(j), log) == 0);
  Json r = Json::parse(slurp(dir + "/results.json"));
  long long prev = -1;
  for (const auto& p : r["points"]) {
    long long cnot = p["cnot_total"].get<long long>();
    CHECK(cnot > prev);
    prev = cnot;
  }
}
