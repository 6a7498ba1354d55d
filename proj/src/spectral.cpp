#include "fracsav/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>

namespace fracsav {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::string to_string(Boundary bc) {
  return bc == Boundary::Periodic ? "periodic" : "neumann";
}

Boundary boundary_from_string(const std::string& s) {
  if (s == "periodic") return Boundary::Periodic;
  if (s == "neumann") return Boundary::Neumann;
  throw std::invalid_argument("unknown boundary condition '" + s +
                              "' (expected periodic or neumann)");
}

Grid Grid::periodic(Eigen::Index n, double lo, double hi) {
  if (n < 2) throw std::invalid_argument("periodic grid needs at least 2 points");
  if (!(hi > lo)) throw std::invalid_argument("grid domain must have positive length");
  return {Boundary::Periodic, n, n, lo, hi, lo, hi};
}

Grid Grid::neumann(Eigen::Index n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("neumann grid needs at least 1 interval");
  if (!(hi > lo)) throw std::invalid_argument("grid domain must have positive length");
  return {Boundary::Neumann, n + 1, n + 1, lo, hi, lo, hi};
}

double Grid::hx() const {
  return lx() / static_cast<double>(bc == Boundary::Periodic ? nx : nx - 1);
}

double Grid::hy() const {
  return ly() / static_cast<double>(bc == Boundary::Periodic ? ny : ny - 1);
}

namespace {

Eigen::VectorXd axis_weights(Boundary bc, Eigen::Index n, double h) {
  Eigen::VectorXd w = Eigen::VectorXd::Constant(n, h);
  if (bc == Boundary::Neumann) {
    w(0) *= 0.5;
    w(n - 1) *= 0.5;
  }
  return w;
}

}  // namespace

Eigen::VectorXd Grid::weights_x() const { return axis_weights(bc, nx, hx()); }
Eigen::VectorXd Grid::weights_y() const { return axis_weights(bc, ny, hy()); }

Field::Field(Grid g, Array2 v) : grid(g), values(std::move(v)) {
  if (values.rows() != grid.nx || values.cols() != grid.ny)
    throw std::invalid_argument("field values do not match grid shape");
}

Field Field::constant(const Grid& g, double c) {
  return {g, Array2::Constant(g.nx, g.ny, c)};
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
  if (!(a.grid == b.grid))
    throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f, g, "inner");
  if (f.grid.bc == Boundary::Periodic)
    return f.grid.hx() * f.grid.hy() * (f.values * g.values).sum();
  const Eigen::VectorXd wx = f.grid.weights_x();
  const Eigen::VectorXd wy = f.grid.weights_y();
  return wx.dot((f.values * g.values).matrix() * wy);
}

double norm_sq(const Field& f) { return inner(f, f); }

double max_abs(const Field& f) { return f.values.abs().maxCoeff(); }

double integrate_potential(const Field& f, const Potential& potential) {
  const Field density{f.grid, f.values.unaryExpr(potential.F)};
  return inner(density, Field::constant(f.grid, 1.0));
}

struct SpectralOps::Impl {
  Grid grid;
  Eigen::Index cols = 0;  // spectral columns
  double* real = nullptr;
  double* coef = nullptr;           // neumann coefficients
  fftw_complex* cplx = nullptr;     // periodic half spectrum
  fftw_plan forward_plan = nullptr;
  fftw_plan backward_plan = nullptr;
  double inverse_scale = 1.0;
  Array2 lambda;    // Laplacian eigenvalue per mode
  Array2 parseval;  // (f, f) = sum parseval * |F|^2
  Array2 keep;      // 2/3-rule mask

  explicit Impl(const Grid& g) : grid(g) {
    const Eigen::Index nx = g.nx, ny = g.ny;
    real = fftw_alloc_real(static_cast<std::size_t>(nx * ny));
    if (g.bc == Boundary::Periodic) {
      cols = ny / 2 + 1;
      cplx = fftw_alloc_complex(static_cast<std::size_t>(nx * cols));
      std::lock_guard lock(planner_mutex());
      forward_plan = fftw_plan_dft_r2c_2d(static_cast<int>(nx), static_cast<int>(ny), real,
                                          cplx, FFTW_ESTIMATE);
      backward_plan = fftw_plan_dft_c2r_2d(static_cast<int>(nx), static_cast<int>(ny), cplx,
                                           real, FFTW_ESTIMATE);
      inverse_scale = 1.0 / static_cast<double>(nx * ny);
    } else {
      cols = ny;
      coef = fftw_alloc_real(static_cast<std::size_t>(nx * ny));
      std::lock_guard lock(planner_mutex());
      forward_plan = fftw_plan_r2r_2d(static_cast<int>(nx), static_cast<int>(ny), real, coef,
                                      FFTW_REDFT00, FFTW_REDFT00, FFTW_ESTIMATE);
      backward_plan = fftw_plan_r2r_2d(static_cast<int>(nx), static_cast<int>(ny), coef, real,
                                       FFTW_REDFT00, FFTW_REDFT00, FFTW_ESTIMATE);
      inverse_scale = 1.0 / (4.0 * static_cast<double>((nx - 1) * (ny - 1)));
    }
    if (forward_plan == nullptr || backward_plan == nullptr)
      throw std::runtime_error("FFTW failed to create a plan");
    build_tables();
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan) fftw_destroy_plan(forward_plan);
    if (backward_plan) fftw_destroy_plan(backward_plan);
    fftw_free(real);
    fftw_free(coef);
    fftw_free(cplx);
  }

  void build_tables() {
    const Eigen::Index nx = grid.nx, ny = grid.ny;
    lambda.resize(nx, cols);
    parseval.resize(nx, cols);
    keep.resize(nx, cols);
    if (grid.bc == Boundary::Periodic) {
      const double sx = 2.0 * std::numbers::pi / grid.lx();
      const double sy = 2.0 * std::numbers::pi / grid.ly();
      const double base = grid.area() / static_cast<double>(nx * ny) /
                          static_cast<double>(nx * ny);
      for (Eigen::Index i = 0; i < nx; ++i) {
        const Eigen::Index kx = i <= nx / 2 ? i : i - nx;
        for (Eigen::Index j = 0; j < cols; ++j) {
          const double ky = static_cast<double>(j);
          lambda(i, j) = -(sx * sx * static_cast<double>(kx * kx) + sy * sy * ky * ky);
          const bool self_conjugate = j == 0 || (ny % 2 == 0 && j == ny / 2);
          parseval(i, j) = base * (self_conjugate ? 1.0 : 2.0);
          keep(i, j) = (3 * std::abs(kx) < nx && 3 * j < ny) ? 1.0 : 0.0;
        }
      }
    } else {
      const double sx = std::numbers::pi / grid.lx();
      const double sy = std::numbers::pi / grid.ly();
      const Eigen::Index mx = nx - 1, my = ny - 1;
      for (Eigen::Index i = 0; i < nx; ++i) {
        const double cx = (i == 0 || i == mx) ? 1.0 : 2.0;
        const double wx = (i == 0 || i == mx) ? grid.lx() : 0.5 * grid.lx();
        for (Eigen::Index j = 0; j < ny; ++j) {
          const double cy = (j == 0 || j == my) ? 1.0 : 2.0;
          const double wy = (j == 0 || j == my) ? grid.ly() : 0.5 * grid.ly();
          const auto ki = static_cast<double>(i), kj = static_cast<double>(j);
          lambda(i, j) = -(sx * sx * ki * ki + sy * sy * kj * kj);
          const double a = cx * cy * inverse_scale;
          parseval(i, j) = a * a * wx * wy;
          keep(i, j) = (3 * i < 2 * mx && 3 * j < 2 * my) ? 1.0 : 0.0;
        }
      }
    }
  }

  void forward(const Field& f) {
    if (!(f.grid == grid))
      throw std::invalid_argument("spectral operator applied to a field on another grid");
    Eigen::Map<Array2>(real, grid.nx, grid.ny) = f.values;
    fftw_execute(forward_plan);
  }

  Field backward() {
    fftw_execute(backward_plan);
    return {grid, Eigen::Map<Array2>(real, grid.nx, grid.ny) * inverse_scale};
  }

  template <typename Multiplier>
  Field apply(const Field& f, Multiplier&& m) {
    forward(f);
    const Eigen::Index n = grid.nx * cols;
    if (cplx != nullptr) {
      for (Eigen::Index k = 0; k < n; ++k) {
        const double s = m(k);
        cplx[k][0] *= s;
        cplx[k][1] *= s;
      }
    } else {
      for (Eigen::Index k = 0; k < n; ++k) coef[k] *= m(k);
    }
    return backward();
  }

  template <typename Weight>
  double mode_sum(const Field& f, Weight&& w) {
    forward(f);
    const Eigen::Index n = grid.nx * cols;
    const double* pw = parseval.data();
    double sum = 0.0;
    if (cplx != nullptr) {
      for (Eigen::Index k = 0; k < n; ++k)
        sum += w(k) * pw[k] * (cplx[k][0] * cplx[k][0] + cplx[k][1] * cplx[k][1]);
    } else {
      for (Eigen::Index k = 0; k < n; ++k) sum += w(k) * pw[k] * coef[k] * coef[k];
    }
    return sum;
  }
};

SpectralOps::SpectralOps(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
SpectralOps::~SpectralOps() = default;
SpectralOps::SpectralOps(SpectralOps&&) noexcept = default;
SpectralOps& SpectralOps::operator=(SpectralOps&&) noexcept = default;

const Grid& SpectralOps::grid() const { return impl_->grid; }
const Array2& SpectralOps::eigenvalues() const { return impl_->lambda; }

Field SpectralOps::laplacian(const Field& f) {
  const double* lam = impl_->lambda.data();
  return impl_->apply(f, [lam](Eigen::Index k) { return lam[k]; });
}

Field SpectralOps::solve_helmholtz(double a, double kappa, const Field& rhs) {
  if (!(a > 0.0))
    throw std::invalid_argument("helmholtz solve needs a > 0, got " + std::to_string(a));
  if (!(kappa >= 0.0))
    throw std::invalid_argument("helmholtz solve needs kappa >= 0, got " +
                                std::to_string(kappa));
  const double* lam = impl_->lambda.data();
  return impl_->apply(rhs, [=](Eigen::Index k) { return 1.0 / (a - kappa * lam[k]); });
}

Field SpectralOps::apply_helmholtz(double a, double kappa, const Field& f) {
  const double* lam = impl_->lambda.data();
  return impl_->apply(f, [=](Eigen::Index k) { return a - kappa * lam[k]; });
}

double SpectralOps::grad_norm_sq(const Field& f) {
  const double* lam = impl_->lambda.data();
  return impl_->mode_sum(f, [lam](Eigen::Index k) { return -lam[k]; });
}

double SpectralOps::spectral_norm_sq(const Field& f) {
  return impl_->mode_sum(f, [](Eigen::Index) { return 1.0; });
}

Field SpectralOps::dealias(const Field& f) {
  const double* keep = impl_->keep.data();
  return impl_->apply(f, [keep](Eigen::Index k) { return keep[k]; });
}

}  // namespace fracsav
