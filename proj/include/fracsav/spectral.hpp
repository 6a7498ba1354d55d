#pragma once

// Tensor-grid fields and the spectral operators the time steppers need.
//
// Periodic grids hold n equispaced points per direction (right endpoint
// excluded) and use the Fourier basis. Neumann grids hold n+1 points
// including both endpoints and use the cosine basis cos(k pi (x - x0) / L),
// k = 0..n. In both cases the L2 inner product is the nodal quadrature that
// makes the basis discretely orthogonal (rectangle rule for periodic,
// trapezoidal rule for Neumann), so Parseval holds exactly.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "fracsav/potential.hpp"

namespace fracsav {

enum class Boundary { Periodic, Neumann };

std::string to_string(Boundary bc);
Boundary boundary_from_string(const std::string& s);

/// Row-major node array; entry (i, j) is the value at (x_i, y_j).
using Array2 = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Grid {
  Boundary bc = Boundary::Periodic;
  Eigen::Index nx = 0;  // points along x
  Eigen::Index ny = 0;  // points along y
  double x0 = 0, x1 = 0, y0 = 0, y1 = 0;

  /// n x n points on [lo, hi)^2.
  static Grid periodic(Eigen::Index n, double lo = 0.0, double hi = 2.0 * std::numbers::pi);
  /// (n+1) x (n+1) points on [lo, hi]^2, n intervals per direction.
  static Grid neumann(Eigen::Index n, double lo = -1.0, double hi = 1.0);

  double lx() const { return x1 - x0; }
  double ly() const { return y1 - y0; }
  double area() const { return lx() * ly(); }
  double hx() const;
  double hy() const;
  double x(Eigen::Index i) const { return x0 + static_cast<double>(i) * hx(); }
  double y(Eigen::Index j) const { return y0 + static_cast<double>(j) * hy(); }
  Eigen::Index size() const { return nx * ny; }

  /// Per-direction quadrature weights; the 2D weight is wx(i) * wy(j).
  Eigen::VectorXd weights_x() const;
  Eigen::VectorXd weights_y() const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

struct Field {
  Grid grid;
  Array2 values;

  Field() = default;
  Field(Grid g, Array2 v);

  static Field constant(const Grid& g, double c);
  template <typename Fn>
  static Field from_function(const Grid& g, Fn&& fn) {
    Array2 v(g.nx, g.ny);
    for (Eigen::Index i = 0; i < g.nx; ++i)
      for (Eigen::Index j = 0; j < g.ny; ++j) v(i, j) = fn(g.x(i), g.y(j));
    return {g, std::move(v)};
  }
};

void require_same_grid(const Field& a, const Field& b, const char* what);

/// L2 inner product under the grid's nodal quadrature.
double inner(const Field& f, const Field& g);
double norm_sq(const Field& f);
double max_abs(const Field& f);
/// Nodal quadrature of F(phi).
double integrate_potential(const Field& f, const Potential& potential);

/// Transform-space operators for one grid.
///
/// Owns FFTW plans and scratch buffers, so an instance must not be shared
/// between threads; build one per worker. Plan construction is serialized
/// internally and execution touches only this object's buffers.
class SpectralOps {
 public:
  explicit SpectralOps(const Grid& grid);
  ~SpectralOps();
  SpectralOps(SpectralOps&&) noexcept;
  SpectralOps& operator=(SpectralOps&&) noexcept;
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;

  const Grid& grid() const;

  Field laplacian(const Field& f);
  /// Returns u solving (a - kappa*Lap) u = rhs; needs a > 0, kappa >= 0.
  Field solve_helmholtz(double a, double kappa, const Field& rhs);
  /// (a - kappa*Lap) f.
  Field apply_helmholtz(double a, double kappa, const Field& f);
  /// Mode sum of (-lambda_k) |f_k|^2 with Parseval weights, i.e. (-Lap f, f).
  double grad_norm_sq(const Field& f);
  /// Mode sum of |f_k|^2 with Parseval weights, i.e. (f, f).
  double spectral_norm_sq(const Field& f);
  /// Zero modes above two thirds of the resolved band.
  Field dealias(const Field& f);

  /// Laplacian eigenvalues laid out like the transform buffer.
  const Array2& eigenvalues() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Row-major CSV snapshot: '#' header lines with nx, ny, domain, bc and an
/// optional caption, then one line of ny values per x index.
void write_field_csv(std::ostream& os, const Field& f, const std::string& caption = {});
Field read_field_csv(std::istream& is);

}  // namespace fracsav
