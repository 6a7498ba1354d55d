#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fracsav/models.hpp"
#include "fracsav/sav.hpp"
#include "fracsav/spectral.hpp"
#include "fracsav/time_mesh.hpp"

namespace fracsav {

// ---------------------------------------------------------------------------
// Order estimation

/// Consecutive observed orders log(e_{k-1}/e_k) / log(tau_{k-1}/tau_k);
/// entry 0 is NaN.
template <typename Scalar>
std::vector<Scalar> observed_orders(std::span<const Scalar> taus,
                                    std::span<const Scalar> errors) {
  if (taus.size() != errors.size())
    throw std::invalid_argument("observed_orders: size mismatch");
  std::vector<Scalar> orders(taus.size(), std::numeric_limits<Scalar>::quiet_NaN());
  for (std::size_t k = 1; k < taus.size(); ++k)
    orders[k] = std::log(errors[k - 1] / errors[k]) / std::log(taus[k - 1] / taus[k]);
  return orders;
}

/// Slope of the least-squares line through (log tau, log e).
template <typename Scalar>
Scalar least_squares_order(std::span<const Scalar> taus, std::span<const Scalar> errors) {
  if (taus.size() != errors.size() || taus.size() < 2)
    throw std::invalid_argument("least_squares_order: need two or more matching samples");
  const auto m = static_cast<Eigen::Index>(taus.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> design(m, 2);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    design(k, 0) = std::log(taus[static_cast<std::size_t>(k)]);
    design(k, 1) = Scalar(1);
    rhs(k) = std::log(errors[static_cast<std::size_t>(k)]);
  }
  return design.colPivHouseholderQr().solve(rhs)(0);
}

/// Slope of the least-squares line through (x, y).
double linear_fit_slope(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Problems and trajectories

struct Problem {
  std::string name;
  Grid grid;
  Field initial;
  SchemeConfig cfg;
  std::optional<ManufacturedSolution> exact;
};

/// 0.2 t^5 sin x cos y on an n x n periodic grid over (0, 2pi)^2.
Problem smooth_periodic_problem(SchemeConfig cfg, Eigen::Index n);
/// 0.2 (t^mu + 1) cos(pi x) cos(pi y) on an n-interval Neumann grid over (-1, 1)^2.
Problem weakly_singular_problem(SchemeConfig cfg, Eigen::Index n, double mu);
/// Unforced double-well flow from cos(4 pi x) cos(4 pi y) on (-1, 1)^2, Neumann.
Problem cosine_problem(SchemeConfig cfg, Eigen::Index n);

using StepObserver = std::function<void(const SavState&, const StepDiagnostics&)>;

/// Steps `phi0` across the whole mesh. The observer sees the initial state
/// (with zero diagnostics) and every state after a step.
SavState run_trajectory(SpectralOps& ops, const Field& phi0, const TimeMesh& mesh,
                        const SchemeConfig& cfg, const StepObserver& observer = {});

// ---------------------------------------------------------------------------
// Convergence studies

enum class ErrorMode { Max, Final };

std::string to_string(ErrorMode m);
ErrorMode error_mode_from_string(const std::string& s);

struct MeshSpec {
  MeshFamily family = MeshFamily::Uniform;
  double final_time = 1.0;
  double grading = 1.0;
  /// Uniform step after t = 1 (composite meshes only).
  double dt = 0.01;

  /// Mesh with M steps (M graded steps on [0,1] for composite meshes).
  TimeMesh build(std::size_t steps) const;
};

std::string to_string(MeshFamily f);
MeshFamily mesh_family_from_string(const std::string& s);

struct ConvergenceRow {
  std::size_t M = 0;
  double tau_max = 0.0;
  double error = 0.0;
  double order = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// "exact" or "fine-run".
  std::string reference;

  /// Least-squares order over rows [first, rows.size()).
  double least_squares_order(std::size_t first = 0) const;
};

struct ConvergenceStudy {
  Problem problem;
  MeshSpec mesh;
  std::vector<std::size_t> steps;
  ErrorMode mode = ErrorMode::Max;
  /// Reference run for problems without an exact solution: L1-CN on a
  /// graded mesh with this exponent and multiplier * max(steps) steps.
  double reference_grading = 3.0;
  std::size_t reference_multiplier = 16;
  unsigned jobs = 1;
};

ConvergenceReport run_convergence(const ConvergenceStudy& study);

// ---------------------------------------------------------------------------
// Interface tracking and long runs

/// Zero-level-set radius along rays from the domain centre, by linear
/// interpolation between the straddling nodes. Averages +x,-x,+y,-y when
/// rays == 4. Returns 0 when the centre value is <= 0.
double extract_radius(const Field& f, int rays = 1);

struct RadiusSample {
  double t = 0.0;
  double R = 0.0;
  double R2 = 0.0;
};
using RadiusTrace = std::vector<RadiusSample>;

struct CircleBenchmark {
  double alpha = 1.0;
  Eigen::Index grid_n = 128;
  double eps = 0.0313;
  double final_time = 32.0;
  double dt = 0.01;
  std::size_t graded_steps = 100;
  /// Original-domain half width; radii are reported in these units.
  double length_scale = 32.0;
  double initial_radius = 8.0 / 32.0;
  bool smooth_initial = false;
  int rays = 1;
  Scheme scheme = Scheme::L1CN;
  /// Graded exponent on [0,1]; (2 - alpha)/alpha when unset.
  std::optional<double> grading;
  std::optional<double> theta;
  double c0 = 0.0;
};

struct CircleResult {
  RadiusTrace radius;
  std::vector<EnergyRecord> energy;
  double min_sigma = 0.0;
};

/// Composite mesh run, by default L1-CN graded with r = (2 - alpha)/alpha on [0,1].
CircleResult run_benchmark_circle(const CircleBenchmark& b);

struct CoarseningRun {
  double alpha = 1.0;
  std::uint64_t seed = 0;
  Eigen::Index grid_n = 128;
  double eps2 = 0.001;
  double final_time = 100.0;
  double dt = 0.01;
  std::size_t graded_steps = 100;
  std::vector<double> snapshot_times{0, 2, 5, 20, 50, 80, 100};
  Scheme scheme = Scheme::L1CN;
  std::optional<double> grading;
  std::optional<double> theta;
  double c0 = 0.0;
};

struct CoarseningResult {
  std::vector<std::pair<double, Field>> snapshots;
  std::vector<EnergyRecord> energy;
  /// Index into `energy` of the first record on the uniform part (t >= 1).
  std::size_t uniform_start = 0;
  double min_phi = 0.0;
  double max_phi = 0.0;
};

CoarseningResult run_coarsening(const CoarseningRun& run);

/// Default composite-mesh grading for a fractional order: (2 - alpha)/alpha.
inline double singular_grading(double alpha) { return (2.0 - alpha) / alpha; }

// ---------------------------------------------------------------------------
// CSV output; every file starts with '#'-prefixed header lines.

void write_header(std::ostream& os, std::span<const std::string> header);
void write_convergence_csv(std::ostream& os, const ConvergenceReport& report,
                           std::span<const std::string> header = {});
void write_radius_csv(std::ostream& os, const RadiusTrace& trace,
                      std::span<const std::string> header = {});
void write_energy_csv(std::ostream& os, std::span<const EnergyRecord> energy,
                      std::span<const std::string> header = {});

}  // namespace fracsav
