#include "fracsav/sav.hpp"

#include <algorithm>
#include <cmath>

#include "fracsav/weights.hpp"

namespace fracsav {

std::string to_string(Scheme s) { return s == Scheme::L1 ? "l1" : "l1cn"; }

Scheme scheme_from_string(const std::string& s) {
  if (s == "l1") return Scheme::L1;
  if (s == "l1cn") return Scheme::L1CN;
  throw std::invalid_argument("unknown scheme '" + s + "' (expected l1 or l1cn)");
}

void SchemeConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha must lie in (0,1], got " + std::to_string(alpha));
  if (!(eps2 > 0.0))
    throw std::invalid_argument("eps2 must be positive, got " + std::to_string(eps2));
  const double th = theta_value();
  if (!(th >= 0.0 && th <= eps2))
    throw std::invalid_argument("theta must satisfy 0 <= theta <= eps2, got theta=" +
                                std::to_string(th) + " eps2=" + std::to_string(eps2));
  if (!(c0 >= 0.0))
    throw std::invalid_argument("c0 must be nonnegative, got " + std::to_string(c0));
  if (!potential.F || !potential.Fprime)
    throw std::invalid_argument("potential is missing F or F'");
}

void IncrementHistory::reserve(std::size_t columns, Eigen::Index points) {
  if (static_cast<Eigen::Index>(columns) <= columns_.cols()) return;
  columns_.conservativeResize(points, static_cast<Eigen::Index>(columns));
}

void IncrementHistory::push(const Array2& increment) {
  const Eigen::Index points = increment.size();
  if (count_ > 0 && points != columns_.rows())
    throw std::invalid_argument("increment size differs from stored history");
  if (static_cast<Eigen::Index>(count_) == columns_.cols())
    columns_.conservativeResize(points, std::max<Eigen::Index>(8, 2 * columns_.cols()));
  columns_.col(static_cast<Eigen::Index>(count_)) =
      Eigen::Map<const Eigen::VectorXd>(increment.data(), points);
  ++count_;
}

Array2 IncrementHistory::convolve(const Eigen::VectorXd& row, Eigen::Index nx,
                                  Eigen::Index ny) const {
  const auto n = static_cast<Eigen::Index>(count_);
  Array2 out = Array2::Zero(nx, ny);
  if (n == 0) return out;
  // increment k pairs with w_{n-k}; skip exactly-zero tails (alpha = 1)
  Eigen::VectorXd coeff = row.segment(1, n).reverse();
  Eigen::Index first = 0;
  while (first < n && coeff(first) == 0.0) ++first;
  if (first == n) return out;
  Eigen::Map<Eigen::VectorXd>(out.data(), nx * ny).noalias() =
      columns_.middleCols(first, n - first) * coeff.tail(n - first);
  return out;
}

Eigen::Map<const Array2> IncrementHistory::increment(std::size_t k, Eigen::Index nx,
                                                     Eigen::Index ny) const {
  return {columns_.col(static_cast<Eigen::Index>(k)).data(), nx, ny};
}

double theta_energy(SpectralOps& ops, const Field& phi, const SchemeConfig& cfg) {
  return 0.5 * cfg.theta_value() * ops.grad_norm_sq(phi) +
         integrate_potential(phi, cfg.potential);
}

double original_energy(SpectralOps& ops, const Field& phi, const SchemeConfig& cfg) {
  return 0.5 * cfg.eps2 * ops.grad_norm_sq(phi) + integrate_potential(phi, cfg.potential);
}

SavState init_state(SpectralOps& ops, const Field& phi0, const SchemeConfig& cfg,
                    std::size_t capacity) {
  cfg.validate();
  const double shifted = theta_energy(ops, phi0, cfg) + cfg.c0;
  if (!(shifted > 0.0))
    throw std::invalid_argument("E_theta(phi0) + C0 = " + std::to_string(shifted) +
                                " must be positive; raise c0");
  SavState state;
  state.phi = phi0;
  state.phi_prev = phi0;
  state.R = std::sqrt(shifted);
  if (capacity > 0) state.history.reserve(capacity, phi0.grid.size());
  return state;
}

namespace {

struct Nonlinear {
  Field gamma;      // -theta Lap phi* + F'(phi*)
  Field theta_lap;  // theta Lap phi*
  double denominator;
};

Nonlinear linearize(SpectralOps& ops, const Field& phi, const SchemeConfig& cfg,
                    std::size_t step) {
  const double theta = cfg.theta_value();
  Field lap = ops.laplacian(phi);
  // (-Lap phi, phi) equals the spectral gradient norm by Parseval
  const double grad2 = -inner(lap, phi);
  const double denominator = 0.5 * theta * grad2 + integrate_potential(phi, cfg.potential) +
                             cfg.c0;
  if (!(denominator > 0.0))
    throw SolverError(step, "E_theta + C0 = " + std::to_string(denominator) +
                                " is not positive; raise c0");
  Field fprime{phi.grid, phi.values.unaryExpr(cfg.potential.Fprime)};
  if (cfg.dealias) fprime = ops.dealias(fprime);
  Field theta_lap{phi.grid, theta * lap.values};
  Field gamma{phi.grid, fprime.values - theta_lap.values};
  return {std::move(gamma), std::move(theta_lap), denominator};
}

// Solves A u + (gamma, u) * coupling * gamma = g for u with two Helmholtz
// solves, where A = a - kappa Lap.
struct Coupled {
  Field solution;
  double sigma;
};

Coupled solve_coupled(SpectralOps& ops, double a, double kappa, const Field& gamma,
                      double coupling, const Field& g, std::size_t step) {
  Field phi1 = ops.solve_helmholtz(a, kappa, Field{gamma.grid, -coupling * gamma.values});
  Field phi2 = ops.solve_helmholtz(a, kappa, g);
  const double sigma = -inner(gamma, phi1);
  if (sigma < -1e-12)
    throw SolverError(step, "sigma = " + std::to_string(sigma) +
                                " is negative; Helmholtz operator lost positivity");
  const double projection = inner(gamma, phi2) / (1.0 + sigma);
  return {Field{g.grid, projection * phi1.values + phi2.values}, sigma};
}

void commit(SavState& state, Field next, double R_next, double dt) {
  state.history.push((next.values - state.phi.values) / dt);
  state.phi_prev = std::move(state.phi);
  state.phi = std::move(next);
  state.R = R_next;
  ++state.n;
}

void check_step(const SavState& state, const TimeMesh& mesh) {
  if (state.n >= mesh.steps())
    throw SolverError(state.n, "state is already at the final mesh node");
  if (state.history.size() != state.n)
    throw SolverError(state.n, "increment history is out of sync with the step count");
}

}  // namespace

StepDiagnostics step_first_order(SpectralOps& ops, SavState& state, const TimeMesh& mesh,
                                 const SchemeConfig& cfg) {
  check_step(state, mesh);
  const std::size_t n = state.n;
  const Grid& grid = state.phi.grid;
  const double dt = mesh.dt(n + 1);
  const auto row = l1_weights(mesh, n, cfg.alpha);
  const double a = row.values(0) / dt;

  const Nonlinear nl = linearize(ops, state.phi, cfg, n);
  const double S = std::sqrt(nl.denominator);
  const double scalar = state.R / S - inner(nl.gamma, state.phi) / (2.0 * nl.denominator);

  Array2 g = a * state.phi.values - state.history.convolve(row.values, grid.nx, grid.ny) -
             nl.theta_lap.values - scalar * nl.gamma.values;
  if (cfg.source) g += cfg.source(grid, mesh.t(n + 1)).values;

  Coupled c = solve_coupled(ops, a, cfg.eps2, nl.gamma, 1.0 / (2.0 * nl.denominator),
                            Field{grid, std::move(g)}, n);
  const double R_next =
      state.R + (inner(nl.gamma, c.solution) - inner(nl.gamma, state.phi)) / (2.0 * S);
  commit(state, std::move(c.solution), R_next, dt);
  return {c.sigma, nl.denominator};
}

StepDiagnostics step_l1cn(SpectralOps& ops, SavState& state, const TimeMesh& mesh,
                          const SchemeConfig& cfg) {
  check_step(state, mesh);
  const std::size_t n = state.n;
  const Grid& grid = state.phi.grid;
  const double dt = mesh.dt(n + 1);
  const auto row = l1cn_weights(mesh, n, cfg.alpha);
  const double a = row.values(0) / dt;

  Field half = state.phi;
  if (n > 0) half.values += (dt / (2.0 * mesh.dt(n))) * (state.phi.values - state.phi_prev.values);

  const Nonlinear nl = linearize(ops, half, cfg, n);
  const double S = std::sqrt(nl.denominator);
  const double four_s2 = 4.0 * nl.denominator;
  const double scalar = state.R / S - inner(nl.gamma, state.phi) / four_s2;
  const Field lap_now = ops.laplacian(state.phi);

  Array2 g = a * state.phi.values + 0.5 * cfg.eps2 * lap_now.values -
             state.history.convolve(row.values, grid.nx, grid.ny) - nl.theta_lap.values -
             scalar * nl.gamma.values;
  if (cfg.source) g += cfg.source(grid, 0.5 * (mesh.t(n) + mesh.t(n + 1))).values;

  Coupled c = solve_coupled(ops, a, 0.5 * cfg.eps2, nl.gamma, 1.0 / four_s2,
                            Field{grid, std::move(g)}, n);
  const double R_next =
      state.R + (inner(nl.gamma, c.solution) - inner(nl.gamma, state.phi)) / (2.0 * S);
  commit(state, std::move(c.solution), R_next, dt);
  return {c.sigma, nl.denominator};
}

StepDiagnostics step(SpectralOps& ops, SavState& state, const TimeMesh& mesh,
                     const SchemeConfig& cfg) {
  return cfg.scheme == Scheme::L1 ? step_first_order(ops, state, mesh, cfg)
                                  : step_l1cn(ops, state, mesh, cfg);
}

double modified_energy(SpectralOps& ops, const SavState& state, const SchemeConfig& cfg,
                       Scheme scheme) {
  const double theta = cfg.theta_value();
  double e = state.R * state.R;
  if (cfg.eps2 != theta) e += 0.5 * (cfg.eps2 - theta) * ops.grad_norm_sq(state.phi);
  if (scheme == Scheme::L1CN && theta != 0.0 && state.n > 0) {
    const Field jump{state.phi.grid, state.phi.values - state.phi_prev.values};
    e += 0.25 * theta * ops.grad_norm_sq(jump);
  }
  return e;
}

EnergyRecord energy_record(SpectralOps& ops, const SavState& state, const TimeMesh& mesh,
                           const SchemeConfig& cfg) {
  return {state.n, mesh.t(state.n), original_energy(ops, state.phi, cfg),
          modified_energy(ops, state, cfg, cfg.scheme), state.R};
}

}  // namespace fracsav
