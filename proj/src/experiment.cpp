#include "cdforge/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

namespace cdforge {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config parsing
// ---------------------------------------------------------------------------

DriverKind driver_kind_from_string(const std::string& name) {
  if (name == "adiabatic") return DriverKind::Adiabatic;
  if (name == "cd") return DriverKind::Cd;
  if (name == "cd-exact") return DriverKind::CdExact;
  throw DomainError("unknown driver: " + name);
}

DriverSpec parse_driver(const Json& j) {
  DriverSpec spec;
  spec.driver = driver_kind_from_string(j.at("driver").get<std::string>());
  if (spec.driver == DriverKind::Cd) {
    const std::string mode = j.value("ansatz", "wnc");
    if (mode == "wnc")
      spec.ansatz.mode = AnsatzMode::Wnc;
    else if (mode == "nc")
      spec.ansatz.mode = AnsatzMode::Nc;
    else
      throw DomainError("unknown ansatz mode: " + mode);
    spec.ansatz.order = j.value("order", 1);
    if (spec.ansatz.order < 1) throw DomainError("driver order must be >= 1");
    const std::string opt = j.value("optimizer", "global");
    if (opt == "global")
      spec.ansatz.optimizer = OptimizerKind::Global;
    else if (opt == "local")
      spec.ansatz.optimizer = OptimizerKind::Local;
    else
      throw DomainError("unknown optimizer: " + opt);
    spec.ansatz.region_width = j.value("region_width", 3);
    spec.ansatz.region_stride = j.value("region_stride", 1);
    spec.ansatz.window_cap = j.value("window_cap", 0);
  }
  spec.label = driver_label(spec);
  return spec;
}

HamiltonianPath parse_path(const Json& j, double delta_s) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ising") {
    IsingPathSpec spec;
    spec.n_sites = j.at("n").get<int>();
    spec.j = j.value("j", 1.0);
    spec.h_x = j.value("h_x", 2.0);
    spec.h_z = j.value("h_z", 1.0);
    return HamiltonianPath::make_ising(spec, delta_s);
  }
  if (kind == "mps") {
    MpsPathSpec spec;
    spec.n_qudits = j.at("n_p").get<int>();
    if (j.contains("g"))
      spec.g = j.at("g").get<double>();
    else if (j.contains("xi"))
      spec.g = g_of_xi(j.at("xi").get<double>());
    else
      throw DomainError("mps path needs g or xi");
    spec.kernel_gap_tol = j.value("kernel_gap_tol", 1e-8);
    return HamiltonianPath::make_mps(spec, delta_s);
  }
  throw DomainError("unknown path kind: " + kind);
}

}  // namespace

std::string driver_label(const DriverSpec& spec) {
  switch (spec.driver) {
    case DriverKind::Adiabatic:
      return "adiabatic";
    case DriverKind::CdExact:
      return "exact-agp";
    case DriverKind::Cd: {
      std::string s = spec.ansatz.mode == AnsatzMode::Wnc ? "wnc" : "nc";
      s += "-l" + std::to_string(spec.ansatz.order);
      s += spec.ansatz.optimizer == OptimizerKind::Global ? "-global" : "-local";
      return s;
    }
  }
  return "?";
}

ExperimentConfig parse_config(const Json& j) {
  ExperimentConfig c;
  c.experiment = j.at("experiment").get<std::string>();
  c.out_dir = j.value("out_dir", "out");
  c.workers = j.value("workers", 1);
  if (c.workers < 1) throw DomainError("workers must be >= 1");
  const double delta_s = j.value("delta_s", 0.01);
  c.path = parse_path(j.at("path"), delta_s);
  c.schedule = schedule_kind_from_string(j.value("schedule", "sin2sin2"));
  c.dt = j.value("dt", 0.05);
  c.tau = j.value("tau", 0.05);
  if (c.dt <= 0 || c.tau <= 0) throw DomainError("dt and tau must be > 0");
  c.t_grid = j.value("t_grid", std::vector<double>{});
  c.n_grid = j.value("n_grid", std::vector<int>{});
  c.xi_grid = j.value("xi_grid", std::vector<double>{});
  c.n_targets = j.value("n_targets", std::vector<int>{});
  c.f_target = j.value("f_target", 0.9);
  c.verify_direct = j.value("verify_direct", false);
  c.emit_traces = j.value("emit_traces", false);
  c.dense_cap = j.value("dense_cap", static_cast<long long>(kDefaultDenseCap));
  c.path.dense_cap = c.dense_cap;
  if (!j.contains("drivers") || j.at("drivers").empty())
    throw DomainError("config needs a non-empty drivers list");
  for (const auto& d : j.at("drivers")) c.drivers.push_back(parse_driver(d));

  const bool needs_t = c.experiment != "dump-coefficients";
  if (needs_t && c.t_grid.empty()) throw DomainError("config needs a non-empty t_grid");
  if (c.experiment == "dump-coefficients" && c.t_grid.empty())
    throw DomainError("dump-coefficients needs one t_grid entry");
  if ((c.experiment == "scaling" || c.experiment == "predict-tp") && c.n_grid.size() < 3)
    throw DomainError(c.experiment + " needs n_grid with at least 3 sizes");
  if (c.experiment == "predict-tp" && c.n_targets.empty())
    throw DomainError("predict-tp needs n_targets");
  return c;
}

Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["experiment"] = c.experiment;
  j["out_dir"] = c.out_dir;
  j["workers"] = c.workers;
  Json p;
  if (c.path.kind == PathKind::Ising) {
    p["kind"] = "ising";
    p["n"] = c.path.ising.n_sites;
    p["j"] = c.path.ising.j;
    p["h_x"] = c.path.ising.h_x;
    p["h_z"] = c.path.ising.h_z;
  } else {
    p["kind"] = "mps";
    p["n_p"] = c.path.mps.n_qudits;
    p["g"] = c.path.mps.g;
    p["xi"] = xi_of_g(c.path.mps.g);
    p["kernel_gap_tol"] = c.path.mps.kernel_gap_tol;
  }
  j["path"] = p;
  j["schedule"] = to_string(c.schedule);
  j["dt"] = c.dt;
  j["delta_s"] = c.path.delta_s;
  j["tau"] = c.tau;
  j["t_grid"] = c.t_grid;
  j["n_grid"] = c.n_grid;
  j["xi_grid"] = c.xi_grid;
  j["n_targets"] = c.n_targets;
  j["f_target"] = c.f_target;
  j["verify_direct"] = c.verify_direct;
  j["emit_traces"] = c.emit_traces;
  j["dense_cap"] = static_cast<long long>(c.dense_cap);
  Json drivers = Json::array();
  for (const auto& d : c.drivers) {
    Json dj;
    if (d.driver == DriverKind::Adiabatic) {
      dj["driver"] = "adiabatic";
    } else if (d.driver == DriverKind::CdExact) {
      dj["driver"] = "cd-exact";
    } else {
      dj["driver"] = "cd";
      dj["ansatz"] = d.ansatz.mode == AnsatzMode::Wnc ? "wnc" : "nc";
      dj["order"] = d.ansatz.order;
      dj["optimizer"] = d.ansatz.optimizer == OptimizerKind::Global ? "global" : "local";
      dj["region_width"] = d.ansatz.region_width;
      dj["region_stride"] = d.ansatz.region_stride;
      dj["window_cap"] = d.ansatz.window_cap;
    }
    drivers.push_back(dj);
  }
  j["drivers"] = drivers;
  return j;
}

// ---------------------------------------------------------------------------
// Grid execution
// ---------------------------------------------------------------------------

namespace {

struct GridPoint {
  Json params;  // resolved parameters for this point (provenance)
  std::function<Json()> run;
};

HamiltonianPath path_with_size(const HamiltonianPath& base, int n) {
  HamiltonianPath p = base;
  if (p.kind == PathKind::Ising)
    p.ising.n_sites = n;
  else
    p.mps.n_qudits = n;
  return p;
}

HamiltonianPath path_with_xi(const HamiltonianPath& base, double xi) {
  if (base.kind != PathKind::Mps)
    throw DomainError("xi_grid only applies to the mps path");
  HamiltonianPath p = base;
  p.mps.g = g_of_xi(xi);
  return p;
}

Json path_echo(const HamiltonianPath& p) {
  Json j;
  if (p.kind == PathKind::Ising) {
    j["kind"] = "ising";
    j["n"] = p.ising.n_sites;
    j["j"] = p.ising.j;
    j["h_x"] = p.ising.h_x;
    j["h_z"] = p.ising.h_z;
  } else {
    j["kind"] = "mps";
    j["n_p"] = p.mps.n_qudits;
    j["g"] = p.mps.g;
    j["xi"] = xi_of_g(p.mps.g);
  }
  return j;
}

EvolutionConfig make_evolution_config(const ExperimentConfig& c, const DriverSpec& d,
                                      double total_time, bool record_coeffs = false) {
  EvolutionConfig ec;
  ec.driver = d.driver;
  ec.ansatz = d.ansatz;
  ec.total_time = total_time;
  ec.dt = c.dt;
  ec.schedule = c.schedule;
  ec.dense_cap = c.dense_cap;
  ec.record_coefficients = record_coeffs;
  return ec;
}

void write_trace_csv(const std::string& path, const std::vector<TracePoint>& trace) {
  std::ofstream f(path);
  f << "t,s,fidelity,action\n";
  for (const auto& p : trace)
    f << fmt(p.t) << "," << fmt(p.s) << "," << fmt(p.fidelity) << "," << fmt(p.action)
      << "\n";
}

// Runs all points with a small worker pool; aggregation stays in grid order.
std::vector<Json> run_grid(const std::vector<GridPoint>& points, int workers,
                           std::ostream& log) {
  std::vector<Json> results(points.size());
  std::atomic<std::size_t> cursor{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= points.size()) return;
      Json r = points[i].params;
      try {
        Json out = points[i].run();
        r["status"] = "ok";
        for (auto& [k, v] : out.items()) r[k] = v;
      } catch (const std::exception& e) {
        r["status"] = "error";
        r["error"] = e.what();
      }
      results[i] = std::move(r);
    }
  };
  const int n_workers = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  if (n_workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < results.size(); ++i) {
    log << "  [" << (i + 1) << "/" << results.size() << "] ";
    for (auto& [k, v] : points[i].params.items())
      if (v.is_primitive() && k != "path") log << k << "=" << v.dump() << " ";
    log << "-> " << results[i]["status"].get<std::string>();
    if (results[i].contains("fidelity"))
      log << " F=" << fmt(results[i]["fidelity"].get<double>());
    if (results[i].contains("error")) log << " (" << results[i]["error"].get<std::string>() << ")";
    log << "\n";
  }
  return results;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows) {
  std::ofstream f(path);
  f << header << "\n";
  for (const auto& r : rows) f << r << "\n";
}

}  // namespace

int run_experiment(const ExperimentConfig& config, std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(config.out_dir);
  const std::string out = config.out_dir + "/";

  std::vector<GridPoint> points;
  const bool is_bench = config.experiment == "ising-bench" || config.experiment == "mps-bench";

  if (is_bench) {
    std::vector<double> xis = config.xi_grid;
    const bool sweep_xi = config.path.kind == PathKind::Mps && !xis.empty();
    if (!sweep_xi) xis = {0.0};
    for (double xi : xis)
      for (double t : config.t_grid)
        for (std::size_t di = 0; di < config.drivers.size(); ++di) {
          const DriverSpec& d = config.drivers[di];
          HamiltonianPath path = sweep_xi ? path_with_xi(config.path, xi) : config.path;
          GridPoint p;
          p.params["t"] = t;
          p.params["driver"] = d.label;
          p.params["path"] = path_echo(path);
          const std::string trace_name =
              out + "trace_" + (sweep_xi ? "xi" + fmt(xi) + "_" : "") + "T" + fmt(t) + "_" +
              d.label + ".csv";
          p.run = [&config, d, t, path, trace_name]() {
            EvolutionConfig ec = make_evolution_config(config, d, t);
            EvolutionResult r = evolve(path, ec);
            if (config.emit_traces) write_trace_csv(trace_name, r.trace);
            Json j;
            j["fidelity"] = r.fidelity;
            j["infidelity"] = 1.0 - r.fidelity;
            j["max_norm_drift"] = r.max_norm_drift;
            return j;
          };
          points.push_back(std::move(p));
        }
  } else if (config.experiment == "trotter-cost") {
    for (double t : config.t_grid)
      for (const DriverSpec& d : config.drivers) {
        if (d.driver == DriverKind::CdExact)
          throw DomainError("trotter-cost: cd-exact is not Trotterizable");
        GridPoint p;
        p.params["t"] = t;
        p.params["driver"] = d.label;
        p.params["path"] = path_echo(config.path);
        p.run = [&config, d, t]() {
          EvolutionConfig ec = make_evolution_config(config, d, t);
          TrotterResult r = trotter_evolve(config.path, ec, config.tau);
          Json j;
          j["fidelity"] = r.report.fidelity;
          j["infidelity"] = 1.0 - r.report.fidelity;
          j["n_steps"] = r.report.n_steps;
          j["cnot_total"] = r.report.total_cnot;
          Json hist;
          for (auto& [m, count] : r.report.support_histogram)
            hist[std::to_string(m)] = count;
          j["support_histogram"] = hist;
          return j;
        };
        points.push_back(std::move(p));
      }
  } else if (config.experiment == "scaling" || config.experiment == "predict-tp") {
    for (const DriverSpec& d : config.drivers)
      for (int n : config.n_grid)
        for (double t : config.t_grid) {
          GridPoint p;
          p.params["n"] = n;
          p.params["t"] = t;
          p.params["driver"] = d.label;
          p.run = [&config, d, n, t]() {
            HamiltonianPath path = path_with_size(config.path, n);
            EvolutionConfig ec = make_evolution_config(config, d, t);
            EvolutionResult r = evolve(path, ec);
            Json j;
            j["fidelity"] = r.fidelity;
            j["infidelity"] = 1.0 - r.fidelity;
            return j;
          };
          points.push_back(std::move(p));
        }
  } else if (config.experiment == "dump-coefficients") {
    const DriverSpec& d = config.drivers.front();
    if (d.driver != DriverKind::Cd)
      throw DomainError("dump-coefficients needs a cd driver");
    GridPoint p;
    p.params["t"] = config.t_grid.front();
    p.params["driver"] = d.label;
    p.params["path"] = path_echo(config.path);
    p.run = [&config, d, out]() {
      EvolutionConfig ec = make_evolution_config(config, d, config.t_grid.front(), true);
      EvolutionResult r = evolve(config.path, ec);
      std::vector<std::string> rows;
      for (const auto& c : r.coefficients)
        rows.push_back(fmt(c.t) + "," + fmt(c.s) + "," + c.group + "," + fmt(c.alpha));
      write_csv(out + "coefficients.csv", "t,s,group,alpha", rows);
      if (config.emit_traces) write_trace_csv(out + "trace.csv", r.trace);
      Json j;
      j["fidelity"] = r.fidelity;
      j["infidelity"] = 1.0 - r.fidelity;
      j["coefficient_rows"] = r.coefficients.size();
      return j;
    };
    points.push_back(std::move(p));
  } else {
    throw DomainError("unknown experiment: " + config.experiment);
  }

  log << config.experiment << ": " << points.size() << " grid points, workers="
      << config.workers << "\n";
  std::vector<Json> results = run_grid(points, config.workers, log);

  // --------------------------------------------------------------------
  // Tidy CSV emission per figure class
  // --------------------------------------------------------------------
  auto ok = [](const Json& r) { return r.value("status", "") == "ok"; };

  if (is_bench) {
    std::vector<std::string> rows;
    std::vector<std::string> xi_rows;
    for (const auto& r : results) {
      if (!ok(r)) continue;
      rows.push_back(fmt(r["t"].get<double>()) + "," + r["driver"].get<std::string>() + "," +
                     fmt(r["fidelity"].get<double>()) + "," +
                     fmt(r["infidelity"].get<double>()));
      if (r["path"].contains("xi"))
        xi_rows.push_back(fmt(r["path"]["xi"].get<double>()) + "," +
                          fmt(r["path"]["g"].get<double>()) + "," +
                          fmt(r["t"].get<double>()) + "," + r["driver"].get<std::string>() +
                          "," + fmt(r["fidelity"].get<double>()) + "," +
                          fmt(r["infidelity"].get<double>()));
    }
    write_csv(out + "infidelity_vs_t.csv", "t,driver,fidelity,infidelity", rows);
    if (config.path.kind == PathKind::Mps)
      write_csv(out + "infidelity_vs_xi.csv", "xi,g,t,driver,fidelity,infidelity", xi_rows);
  } else if (config.experiment == "trotter-cost") {
    std::vector<std::string> rows;
    for (const auto& r : results) {
      if (!ok(r)) continue;
      rows.push_back(fmt(r["t"].get<double>()) + "," +
                     std::to_string(r["n_steps"].get<long long>()) + "," +
                     r["driver"].get<std::string>() + "," +
                     std::to_string(r["cnot_total"].get<long long>()) + "," +
                     fmt(r["fidelity"].get<double>()) + "," +
                     fmt(r["infidelity"].get<double>()));
    }
    write_csv(out + "fidelity_vs_cnot.csv", "t,n_steps,driver,cnot_total,fidelity,infidelity",
              rows);
  } else if (config.experiment == "scaling" || config.experiment == "predict-tp") {
    std::vector<std::string> rows;
    for (const auto& r : results)
      if (ok(r))
        rows.push_back(std::to_string(r["n"].get<int>()) + "," + fmt(r["t"].get<double>()) +
                       "," + r["driver"].get<std::string>() + "," +
                       fmt(r["fidelity"].get<double>()) + "," +
                       fmt(r["infidelity"].get<double>()));
    write_csv(out + "fidelity_vs_n.csv", "n,t,driver,fidelity,infidelity", rows);

    // Per-driver, per-T scaling fits over the N grid.
    std::vector<std::string> fit_rows;
    std::map<std::string, std::vector<ScalingFit>> fits_by_driver;
    for (const DriverSpec& d : config.drivers) {
      for (double t : config.t_grid) {
        std::vector<std::pair<double, double>> samples;
        for (const auto& r : results)
          if (ok(r) && r["driver"] == d.label && r["t"].get<double>() == t)
            samples.emplace_back(r["n"].get<int>(), r["fidelity"].get<double>());
        if (samples.size() < 3) continue;
        try {
          ScalingFit fit = fit_scaling(samples, t);
          fits_by_driver[d.label].push_back(fit);
          fit_rows.push_back(d.label + "," + fmt(t) + "," + fmt(fit.kappa) + "," +
                             fmt(fit.c) + "," + fmt(fit.residual));
        } catch (const std::exception& e) {
          log << "  fit skipped for " << d.label << " T=" << t << ": " << e.what() << "\n";
        }
      }
    }
    write_csv(out + "fits.csv", "driver,t,kappa,c,residual", fit_rows);

    if (config.experiment == "predict-tp") {
      std::vector<std::string> tp_rows;
      for (const DriverSpec& d : config.drivers) {
        auto it = fits_by_driver.find(d.label);
        if (it == fits_by_driver.end()) continue;
        for (int n : config.n_targets) {
          std::string row = d.label + "," + std::to_string(n) + "," + fmt(config.f_target);
          try {
            TpPrediction pred = predict_tp(it->second, n, config.f_target);
            row += "," + fmt(pred.t_p) + "," + (pred.monotone_grid ? "1" : "0");
            if (config.verify_direct) {
              HamiltonianPath path = path_with_size(config.path, n);
              double lo = config.t_grid.front(), hi = config.t_grid.back();
              EvolutionConfig ec_hi = make_evolution_config(config, d, hi);
              if (evolve(path, ec_hi).fidelity < config.f_target) {
                row += ",,";
              } else {
                while (hi / lo > 1.02) {
                  const double mid = std::sqrt(lo * hi);
                  EvolutionConfig ec = make_evolution_config(config, d, mid);
                  (evolve(path, ec).fidelity >= config.f_target ? hi : lo) = mid;
                }
                const double direct = std::sqrt(lo * hi);
                row += "," + fmt(direct) + "," + fmt(std::abs(pred.t_p - direct) / direct);
              }
            } else {
              row += ",,";
            }
            tp_rows.push_back(row);
          } catch (const std::exception& e) {
            log << "  predict-tp failed for " << d.label << " n=" << n << ": " << e.what()
                << "\n";
            tp_rows.push_back(row + ",,,");
          }
        }
      }
      write_csv(out + "tp.csv", "driver,n,f_target,t_p,monotone_grid,t_direct,rel_gap",
                tp_rows);
    }
  }

  Json report;
  report["config"] = config_to_json(config);
  report["points"] = results;
  {
    std::ofstream f(out + "results.json");
    f << report.dump(2) << "\n";
  }

  int failures = 0;
  for (const auto& r : results)
    if (!ok(r)) ++failures;
  log << config.experiment << ": " << (results.size() - failures) << "/" << results.size()
      << " points succeeded\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace cdforge
