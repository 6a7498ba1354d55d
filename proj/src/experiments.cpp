#include "fracsav/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <ostream>

namespace fracsav {

double linear_fit_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("linear_fit_slope: need two or more matching samples");
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixX2d design(m, 2);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    design(k, 0) = x[static_cast<std::size_t>(k)];
    design(k, 1) = 1.0;
    rhs(k) = y[static_cast<std::size_t>(k)];
  }
  return design.colPivHouseholderQr().solve(rhs)(0);
}

Problem smooth_periodic_problem(SchemeConfig cfg, Eigen::Index n) {
  const Grid grid = Grid::periodic(n);
  auto exact = ManufacturedSolution::smooth_periodic();
  const double alpha = cfg.alpha, eps2 = cfg.eps2;
  const Potential potential = cfg.potential;
  cfg.source = [=](const Grid& g, double t) {
    return source_field(exact, alpha, eps2, potential, g, t);
  };
  return {"ex1", grid, exact.sample(grid, 0.0), std::move(cfg), exact};
}

Problem weakly_singular_problem(SchemeConfig cfg, Eigen::Index n, double mu) {
  const Grid grid = Grid::neumann(n);
  auto exact = ManufacturedSolution::weakly_singular_neumann(mu);
  const double alpha = cfg.alpha, eps2 = cfg.eps2;
  const Potential potential = cfg.potential;
  cfg.source = [=](const Grid& g, double t) {
    return source_field(exact, alpha, eps2, potential, g, t);
  };
  return {"ex2", grid, exact.sample(grid, 0.0), std::move(cfg), exact};
}

Problem cosine_problem(SchemeConfig cfg, Eigen::Index n) {
  const Grid grid = Grid::neumann(n);
  cfg.source = nullptr;
  return {"ex3", grid, initial_condition({InitialKind::Cosine44}, grid), std::move(cfg),
          std::nullopt};
}

SavState run_trajectory(SpectralOps& ops, const Field& phi0, const TimeMesh& mesh,
                        const SchemeConfig& cfg, const StepObserver& observer) {
  SavState state = init_state(ops, phi0, cfg, mesh.steps());
  if (observer) observer(state, StepDiagnostics{});
  while (state.n < mesh.steps()) {
    const StepDiagnostics diag = step(ops, state, mesh, cfg);
    if (observer) observer(state, diag);
  }
  return state;
}

std::string to_string(ErrorMode m) { return m == ErrorMode::Max ? "max" : "final"; }

ErrorMode error_mode_from_string(const std::string& s) {
  if (s == "max") return ErrorMode::Max;
  if (s == "final") return ErrorMode::Final;
  throw std::invalid_argument("unknown error mode '" + s + "' (expected max or final)");
}

std::string to_string(MeshFamily f) {
  switch (f) {
    case MeshFamily::Uniform: return "uniform";
    case MeshFamily::Graded: return "graded";
    case MeshFamily::Composite: return "composite";
  }
  return "unknown";
}

MeshFamily mesh_family_from_string(const std::string& s) {
  if (s == "uniform") return MeshFamily::Uniform;
  if (s == "graded") return MeshFamily::Graded;
  if (s == "composite") return MeshFamily::Composite;
  throw std::invalid_argument("unknown mesh family '" + s +
                              "' (expected uniform, graded or composite)");
}

TimeMesh MeshSpec::build(std::size_t steps) const {
  switch (family) {
    case MeshFamily::Uniform: return build_uniform_mesh(final_time, steps);
    case MeshFamily::Graded: return build_graded_mesh(final_time, steps, grading);
    case MeshFamily::Composite: return build_composite_mesh(final_time, steps, grading, dt);
  }
  throw std::invalid_argument("unknown mesh family");
}

double ConvergenceReport::least_squares_order(std::size_t first) const {
  std::vector<double> taus, errors;
  for (std::size_t k = first; k < rows.size(); ++k) {
    taus.push_back(rows[k].tau_max);
    errors.push_back(rows[k].error);
  }
  return fracsav::least_squares_order<double>(taus, errors);
}

namespace {

struct RunOutcome {
  double error = 0.0;
  Field final_field;
};

RunOutcome run_against_exact(const Problem& p, const TimeMesh& mesh, ErrorMode mode) {
  SpectralOps ops(p.grid);
  double worst = 0.0;
  const auto& exact = *p.exact;
  SavState end = run_trajectory(ops, p.initial, mesh, p.cfg,
                                [&](const SavState& s, const StepDiagnostics&) {
                                  if (s.n == 0) return;
                                  if (mode == ErrorMode::Final && s.n != mesh.steps()) return;
                                  const Field ref = exact.sample(p.grid, mesh.t(s.n));
                                  worst = std::max(worst, (s.phi.values - ref.values).abs().maxCoeff());
                                });
  return {worst, std::move(end.phi)};
}

Field run_final(const Problem& p, const TimeMesh& mesh, const SchemeConfig& cfg) {
  SpectralOps ops(p.grid);
  return run_trajectory(ops, p.initial, mesh, cfg).phi;
}

// Runs tasks with at most `jobs` in flight, preserving order.
template <typename T>
std::vector<T> run_batched(std::vector<std::function<T()>> tasks, unsigned jobs) {
  std::vector<T> out;
  out.reserve(tasks.size());
  if (jobs <= 1) {
    for (auto& t : tasks) out.push_back(t());
    return out;
  }
  for (std::size_t start = 0; start < tasks.size(); start += jobs) {
    std::vector<std::future<T>> batch;
    const std::size_t stop = std::min(tasks.size(), start + jobs);
    for (std::size_t k = start; k < stop; ++k)
      batch.push_back(std::async(std::launch::async, tasks[k]));
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

}  // namespace

ConvergenceReport run_convergence(const ConvergenceStudy& study) {
  if (study.steps.empty()) throw std::invalid_argument("convergence study needs step counts");
  const Problem& p = study.problem;
  p.cfg.validate();
  if (!p.exact && study.mode == ErrorMode::Max)
    throw std::invalid_argument(
        "max-in-time error needs an exact solution; use the final error mode");
  if (p.initial.grid != p.grid)
    throw std::invalid_argument("initial field and problem grid differ");

  std::vector<TimeMesh> meshes;
  for (std::size_t M : study.steps) meshes.push_back(study.mesh.build(M));

  std::vector<std::function<RunOutcome()>> tasks;
  for (const TimeMesh& mesh : meshes) {
    if (p.exact)
      tasks.emplace_back([&p, &mesh, &study] { return run_against_exact(p, mesh, study.mode); });
    else
      tasks.emplace_back([&p, &mesh] { return RunOutcome{0.0, run_final(p, mesh, p.cfg)}; });
  }

  std::optional<TimeMesh> ref_mesh;
  if (!p.exact) {
    const std::size_t M_max = *std::max_element(study.steps.begin(), study.steps.end());
    ref_mesh = build_graded_mesh(study.mesh.final_time, study.reference_multiplier * M_max,
                                 study.reference_grading);
    SchemeConfig ref_cfg = p.cfg;
    ref_cfg.scheme = Scheme::L1CN;
    tasks.emplace_back([&p, &ref_mesh, ref_cfg] {
      return RunOutcome{0.0, run_final(p, *ref_mesh, ref_cfg)};
    });
  }

  std::vector<RunOutcome> outcomes = run_batched(std::move(tasks), std::max(1u, study.jobs));

  ConvergenceReport report;
  report.reference = p.exact ? "exact" : "fine-run";
  for (std::size_t k = 0; k < meshes.size(); ++k) {
    double error = outcomes[k].error;
    if (!p.exact) {
      const Field& ref = outcomes.back().final_field;
      require_same_grid(outcomes[k].final_field, ref, "convergence reference");
      error = (outcomes[k].final_field.values - ref.values).abs().maxCoeff();
    }
    report.rows.push_back({study.steps[k], meshes[k].max_step(), error});
  }
  std::vector<double> taus, errors;
  for (const auto& r : report.rows) {
    taus.push_back(r.tau_max);
    errors.push_back(r.error);
  }
  const auto orders = observed_orders<double>(taus, errors);
  for (std::size_t k = 0; k < report.rows.size(); ++k) report.rows[k].order = orders[k];
  return report;
}

namespace {

Eigen::Index nearest_index(double lo, double h, Eigen::Index n, double x) {
  const auto i = static_cast<Eigen::Index>(std::lround((x - lo) / h));
  return std::clamp<Eigen::Index>(i, 0, n - 1);
}

// Distance from the centre node to the first sign change walking in
// direction (di, dj).
double ray_radius(const Array2& v, Eigen::Index ic, Eigen::Index jc, int di, int dj,
                  double h) {
  if (v(ic, jc) <= 0.0) return 0.0;
  Eigen::Index i = ic, j = jc;
  Eigen::Index steps = 0;
  while (true) {
    const Eigen::Index ni = i + di, nj = j + dj;
    if (ni < 0 || nj < 0 || ni >= v.rows() || nj >= v.cols())
      return static_cast<double>(steps) * h;
    const double a = v(i, j), b = v(ni, nj);
    if (b <= 0.0) return (static_cast<double>(steps) + a / (a - b)) * h;
    i = ni;
    j = nj;
    ++steps;
  }
}

}  // namespace

double extract_radius(const Field& f, int rays) {
  if (rays != 1 && rays != 4) throw std::invalid_argument("extract_radius: rays must be 1 or 4");
  const Grid& g = f.grid;
  const Eigen::Index ic = nearest_index(g.x0, g.hx(), g.nx, 0.5 * (g.x0 + g.x1));
  const Eigen::Index jc = nearest_index(g.y0, g.hy(), g.ny, 0.5 * (g.y0 + g.y1));
  double r = ray_radius(f.values, ic, jc, 1, 0, g.hx());
  if (rays == 4) {
    r += ray_radius(f.values, ic, jc, -1, 0, g.hx());
    r += ray_radius(f.values, ic, jc, 0, 1, g.hy());
    r += ray_radius(f.values, ic, jc, 0, -1, g.hy());
    r *= 0.25;
  }
  return r;
}

CircleResult run_benchmark_circle(const CircleBenchmark& b) {
  if (!(b.alpha > 0.0 && b.alpha <= 1.0))
    throw std::invalid_argument("circle benchmark: alpha must lie in (0,1]");
  const Grid grid = Grid::neumann(b.grid_n);
  SchemeConfig cfg;
  cfg.alpha = b.alpha;
  cfg.eps2 = b.eps * b.eps;
  cfg.theta = b.theta;
  cfg.c0 = b.c0;
  cfg.scheme = b.scheme;

  const TimeMesh mesh = build_composite_mesh(b.final_time, b.graded_steps,
                                             b.grading.value_or(singular_grading(b.alpha)), b.dt);
  InitialCondition ic;
  ic.kind = b.smooth_initial ? InitialKind::SmoothCircle : InitialKind::Circle;
  ic.radius = b.initial_radius;
  ic.eps = b.eps;

  SpectralOps ops(grid);
  CircleResult result;
  result.radius.reserve(mesh.steps() + 1);
  result.energy.reserve(mesh.steps() + 1);
  result.min_sigma = std::numeric_limits<double>::infinity();
  run_trajectory(ops, initial_condition(ic, grid), mesh, cfg,
                 [&](const SavState& s, const StepDiagnostics& d) {
                   const double r = b.length_scale * extract_radius(s.phi, b.rays);
                   result.radius.push_back({mesh.t(s.n), r, r * r});
                   result.energy.push_back(energy_record(ops, s, mesh, cfg));
                   if (s.n > 0) result.min_sigma = std::min(result.min_sigma, d.sigma);
                 });
  return result;
}

CoarseningResult run_coarsening(const CoarseningRun& run) {
  if (!(run.alpha > 0.0 && run.alpha <= 1.0))
    throw std::invalid_argument("coarsening: alpha must lie in (0,1]");
  const Grid grid = Grid::neumann(run.grid_n);
  SchemeConfig cfg;
  cfg.alpha = run.alpha;
  cfg.eps2 = run.eps2;
  cfg.theta = run.theta;
  cfg.c0 = run.c0;
  cfg.scheme = run.scheme;

  const TimeMesh mesh = build_composite_mesh(run.final_time, run.graded_steps,
                                             run.grading.value_or(singular_grading(run.alpha)),
                                             run.dt);
  InitialCondition ic;
  ic.kind = InitialKind::RandomUniform;

  // mesh node closest to each requested snapshot time
  std::vector<std::size_t> wanted;
  for (double ts : run.snapshot_times) {
    if (ts < 0.0 || ts > run.final_time) continue;
    const auto nodes = mesh.nodes();
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), ts);
    std::size_t n = static_cast<std::size_t>(it - nodes.begin());
    if (n == nodes.size() || (n > 0 && ts - nodes[n - 1] < nodes[n] - ts)) --n;
    wanted.push_back(n);
  }

  SpectralOps ops(grid);
  CoarseningResult result;
  result.uniform_start = mesh.graded_steps();
  result.energy.reserve(mesh.steps() + 1);
  result.min_phi = std::numeric_limits<double>::infinity();
  result.max_phi = -std::numeric_limits<double>::infinity();
  run_trajectory(ops, initial_condition(ic, grid, run.seed), mesh, cfg,
                 [&](const SavState& s, const StepDiagnostics&) {
                   result.energy.push_back(energy_record(ops, s, mesh, cfg));
                   result.min_phi = std::min(result.min_phi, s.phi.values.minCoeff());
                   result.max_phi = std::max(result.max_phi, s.phi.values.maxCoeff());
                   for (std::size_t n : wanted)
                     if (n == s.n) result.snapshots.emplace_back(mesh.t(n), s.phi);
                 });
  return result;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

void write_header(std::ostream& os, std::span<const std::string> header) {
  for (const auto& line : header) os << "# " << line << '\n';
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report,
                           std::span<const std::string> header) {
  write_header(os, header);
  os << "# reference=" << report.reference << '\n';
  os << "M,tau_max,error,order\n";
  for (const auto& r : report.rows)
    os << r.M << ',' << fmt(r.tau_max) << ',' << fmt(r.error) << ','
       << (std::isnan(r.order) ? std::string("nan") : fmt(r.order)) << '\n';
}

void write_radius_csv(std::ostream& os, const RadiusTrace& trace,
                      std::span<const std::string> header) {
  write_header(os, header);
  os << "t,R,R2\n";
  for (const auto& s : trace) os << fmt(s.t) << ',' << fmt(s.R) << ',' << fmt(s.R2) << '\n';
}

void write_energy_csv(std::ostream& os, std::span<const EnergyRecord> energy,
                      std::span<const std::string> header) {
  write_header(os, header);
  os << "step,t,E,E_mod,R\n";
  for (const auto& e : energy)
    os << e.step << ',' << fmt(e.t) << ',' << fmt(e.E) << ',' << fmt(e.E_mod) << ','
       << fmt(e.R) << '\n';
}

}  // namespace fracsav
