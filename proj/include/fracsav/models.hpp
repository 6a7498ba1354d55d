#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "fracsav/potential.hpp"
#include "fracsav/spectral.hpp"

namespace fracsav {

/// Caputo derivative of t^mu: Gamma(mu+1)/Gamma(mu+1-alpha) t^(mu-alpha).
double caputo_power(double mu, double alpha, double t);

/// Separable exact solution amplitude * (t^mu + offset) * X(x, y), where X
/// is a Laplacian eigenfunction with eigenvalue `shape_eigenvalue`.
struct ManufacturedSolution {
  std::string name;
  double amplitude = 1.0;
  double mu = 1.0;
  double offset = 0.0;
  std::function<double(double, double)> shape;
  double shape_eigenvalue = 0.0;

  double time_factor(double t) const;
  double value(double x, double y, double t) const;
  double caputo(double alpha, double x, double y, double t) const;
  double laplacian(double x, double y, double t) const;
  Field sample(const Grid& grid, double t) const;

  /// 0.2 t^5 sin(x) cos(y) on the periodic square (0, 2pi)^2.
  static ManufacturedSolution smooth_periodic();
  /// 0.2 (t^mu + 1) cos(pi x) cos(pi y) on the Neumann square (-1, 1)^2.
  static ManufacturedSolution weakly_singular_neumann(double mu);
};

/// Forcing that makes `sol` exact for
///   D^alpha phi - eps2 Lap phi + F'(phi) = s.
double source_term(const ManufacturedSolution& sol, double alpha, double eps2,
                   const Potential& potential, double x, double y, double t);
Field source_field(const ManufacturedSolution& sol, double alpha, double eps2,
                   const Potential& potential, const Grid& grid, double t);

enum class InitialKind { Cosine44, Circle, SmoothCircle, RandomUniform };

std::string to_string(InitialKind kind);
InitialKind initial_kind_from_string(const std::string& s);

struct InitialCondition {
  InitialKind kind = InitialKind::Cosine44;
  /// Circle radius in grid units, centred at the domain centre.
  double radius = 8.0 / 32.0;
  /// Interface width parameter for SmoothCircle.
  double eps = 0.0313;
  /// Half-width of the RandomUniform range.
  double amplitude = 0.05;
};

/// Nodal initial data. RandomUniform draws i.i.d. values on
/// [-amplitude, amplitude] from std::mt19937_64 seeded with `seed`.
Field initial_condition(const InitialCondition& ic, const Grid& grid, std::uint64_t seed = 0);

}  // namespace fracsav
