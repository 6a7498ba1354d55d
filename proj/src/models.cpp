#include "fracsav/models.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace fracsav {

double caputo_power(double mu, double alpha, double t) {
  if (!(mu > 0.0))
    throw std::invalid_argument("caputo_power: exponent mu must be positive, got " +
                                std::to_string(mu));
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("caputo_power: alpha must lie in (0,1], got " +
                                std::to_string(alpha));
  if (t < 0.0) throw std::invalid_argument("caputo_power: t must be nonnegative");
  if (t == 0.0) return mu > alpha ? 0.0 : (mu == alpha ? std::tgamma(mu + 1.0) : INFINITY);
  return std::exp(std::lgamma(mu + 1.0) - std::lgamma(mu + 1.0 - alpha) +
                  (mu - alpha) * std::log(t));
}

double ManufacturedSolution::time_factor(double t) const {
  return std::pow(t, mu) + offset;
}

double ManufacturedSolution::value(double x, double y, double t) const {
  return amplitude * time_factor(t) * shape(x, y);
}

double ManufacturedSolution::caputo(double alpha, double x, double y, double t) const {
  return amplitude * caputo_power(mu, alpha, t) * shape(x, y);
}

double ManufacturedSolution::laplacian(double x, double y, double t) const {
  return shape_eigenvalue * value(x, y, t);
}

Field ManufacturedSolution::sample(const Grid& grid, double t) const {
  return Field::from_function(grid, [&](double x, double y) { return value(x, y, t); });
}

ManufacturedSolution ManufacturedSolution::smooth_periodic() {
  return {"smooth_periodic", 0.2, 5.0, 0.0,
          [](double x, double y) { return std::sin(x) * std::cos(y); }, -2.0};
}

ManufacturedSolution ManufacturedSolution::weakly_singular_neumann(double mu) {
  constexpr double pi = std::numbers::pi;
  return {"weakly_singular_neumann", 0.2, mu, 1.0,
          [](double x, double y) { return std::cos(pi * x) * std::cos(pi * y); },
          -2.0 * pi * pi};
}

double source_term(const ManufacturedSolution& sol, double alpha, double eps2,
                   const Potential& potential, double x, double y, double t) {
  const double phi = sol.value(x, y, t);
  return sol.caputo(alpha, x, y, t) - eps2 * sol.laplacian(x, y, t) + potential.Fprime(phi);
}

Field source_field(const ManufacturedSolution& sol, double alpha, double eps2,
                   const Potential& potential, const Grid& grid, double t) {
  const double d = sol.amplitude * caputo_power(sol.mu, alpha, t);
  const double v = sol.amplitude * sol.time_factor(t);
  const double lap = sol.shape_eigenvalue;
  return Field::from_function(grid, [&](double x, double y) {
    const double s = sol.shape(x, y);
    return d * s - eps2 * lap * v * s + potential.Fprime(v * s);
  });
}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::Cosine44: return "cosine44";
    case InitialKind::Circle: return "circle";
    case InitialKind::SmoothCircle: return "smooth_circle";
    case InitialKind::RandomUniform: return "random_uniform";
  }
  return "unknown";
}

InitialKind initial_kind_from_string(const std::string& s) {
  if (s == "cosine44") return InitialKind::Cosine44;
  if (s == "circle") return InitialKind::Circle;
  if (s == "smooth_circle") return InitialKind::SmoothCircle;
  if (s == "random_uniform") return InitialKind::RandomUniform;
  throw std::invalid_argument("unknown initial condition kind '" + s + "'");
}

Field initial_condition(const InitialCondition& ic, const Grid& grid, std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  const double cx = 0.5 * (grid.x0 + grid.x1);
  const double cy = 0.5 * (grid.y0 + grid.y1);
  switch (ic.kind) {
    case InitialKind::Cosine44:
      return Field::from_function(grid, [](double x, double y) {
        return std::cos(4.0 * pi * x) * std::cos(4.0 * pi * y);
      });
    case InitialKind::Circle:
      return Field::from_function(grid, [&](double x, double y) {
        const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        return r2 < ic.radius * ic.radius ? 1.0 : -1.0;
      });
    case InitialKind::SmoothCircle:
      return Field::from_function(grid, [&](double x, double y) {
        const double r = std::hypot(x - cx, y - cy);
        return std::tanh((ic.radius - r) / (std::numbers::sqrt2 * ic.eps));
      });
    case InitialKind::RandomUniform: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> dist(-ic.amplitude, ic.amplitude);
      Array2 v(grid.nx, grid.ny);
      for (Eigen::Index i = 0; i < grid.nx; ++i)
        for (Eigen::Index j = 0; j < grid.ny; ++j) v(i, j) = dist(rng);
      return {grid, std::move(v)};
    }
  }
  throw std::invalid_argument("unknown initial condition kind");
}

}  // namespace fracsav
