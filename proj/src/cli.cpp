#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fracsav/config.hpp"

namespace fracsav {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os.exceptions(std::ios::badbit | std::ios::failbit);
  return os;
}

Problem study_problem(const RunConfig& c) {
  switch (c.problem) {
    case ProblemId::Ex1: return smooth_periodic_problem(c.scheme_config(), c.grid);
    case ProblemId::Ex2: return weakly_singular_problem(c.scheme_config(), c.grid, c.mu);
    default: return cosine_problem(c.scheme_config(), c.grid);
  }
}

std::string run_converge(const RunConfig& c, const fs::path& dir) {
  ConvergenceStudy study{study_problem(c), c.mesh_spec(), c.levels};
  study.mode = c.error_mode;
  study.jobs = c.jobs;
  const ConvergenceReport rep = run_convergence(study);
  const fs::path file = dir / "convergence.csv";
  auto os = open_output(file);
  write_convergence_csv(os, rep, c.header());
  return "converge " + to_string(c.problem) + ": least-squares order " +
         fmt("%.4f", rep.least_squares_order()) + " over " + std::to_string(rep.rows.size()) +
         " levels, wrote " + file.string();
}

std::string run_single(const RunConfig& c, const fs::path& dir) {
  const Problem p = study_problem(c);
  const TimeMesh mesh = c.mesh_spec().build(c.M);
  SpectralOps ops(p.grid);
  std::vector<EnergyRecord> energy;
  const SavState last = run_trajectory(ops, p.initial, mesh, p.cfg,
                                       [&](const SavState& s, const StepDiagnostics&) {
                                         energy.push_back(energy_record(ops, s, mesh, p.cfg));
                                       });
  {
    auto os = open_output(dir / "energy.csv");
    write_energy_csv(os, energy, c.header());
  }
  {
    auto os = open_output(dir / "final_field.csv");
    write_field_csv(os, last.phi, "t=" + fmt("%.17g", mesh.final_time()));
  }
  std::string summary = "single-run " + to_string(c.problem) + ": " + std::to_string(mesh.steps()) +
                        " steps to T=" + fmt("%g", mesh.final_time()) +
                        ", E=" + fmt("%.6e", energy.back().E);
  if (p.exact) {
    const Field exact = Field::from_function(
        p.grid, [&](double x, double y) { return p.exact->value(x, y, mesh.final_time()); });
    summary += ", max error " + fmt("%.3e", (last.phi.values - exact.values).abs().maxCoeff());
  }
  return summary + ", wrote " + dir.string();
}

std::string run_circle(const RunConfig& c, const fs::path& dir) {
  CircleBenchmark b;
  b.alpha = c.alpha;
  b.grid_n = c.grid;
  b.eps = std::sqrt(c.eps2);
  b.final_time = c.T;
  b.dt = c.dt;
  b.graded_steps = c.M;
  b.scheme = c.scheme;
  b.grading = c.r;
  b.theta = c.theta;
  b.c0 = c.c0;
  const CircleResult res = run_benchmark_circle(b);
  {
    auto os = open_output(dir / "radius.csv");
    write_radius_csv(os, res.radius, c.header());
  }
  {
    auto os = open_output(dir / "energy.csv");
    write_energy_csv(os, res.energy, c.header());
  }
  return "circle alpha=" + fmt("%g", c.alpha) + ": R(0)=" + fmt("%.4f", res.radius.front().R) +
         " R(T)=" + fmt("%.4f", res.radius.back().R) + ", wrote " + dir.string();
}

std::string run_coarsen(const RunConfig& c, const fs::path& dir) {
  CoarseningRun run;
  run.alpha = c.alpha;
  run.seed = c.seed;
  run.grid_n = c.grid;
  run.eps2 = c.eps2;
  run.final_time = c.T;
  run.dt = c.dt;
  run.graded_steps = c.M;
  run.scheme = c.scheme;
  run.grading = c.r;
  run.theta = c.theta;
  run.c0 = c.c0;
  run.snapshot_times.push_back(c.T);
  const CoarseningResult res = run_coarsening(run);
  {
    auto os = open_output(dir / "energy.csv");
    write_energy_csv(os, res.energy, c.header());
  }
  std::vector<double> written;
  for (const auto& [t, field] : res.snapshots) {
    if (std::find(written.begin(), written.end(), t) != written.end()) continue;
    written.push_back(t);
    auto os = open_output(dir / ("snapshot_t" + fmt("%g", t) + ".csv"));
    write_field_csv(os, field, "t=" + fmt("%.17g", t));
  }
  return "coarsen alpha=" + fmt("%g", c.alpha) + ": " + std::to_string(written.size()) +
         " snapshots, E(T)=" + fmt("%.6e", res.energy.back().E) + ", wrote " + dir.string();
}

}  // namespace

std::string execute(const RunConfig& cfg) {
  const fs::path dir(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir))
    throw std::runtime_error("cannot create output directory " + dir.string());
  switch (cfg.command) {
    case Command::Converge: return run_converge(cfg, dir);
    case Command::SingleRun: return run_single(cfg, dir);
    case Command::Circle: return run_circle(cfg, dir);
    case Command::Coarsen: return run_coarsen(cfg, dir);
  }
  throw std::logic_error("unhandled command");
}

}  // namespace fracsav
