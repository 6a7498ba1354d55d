#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "fracsav/spectral.hpp"
#include "oracles.hpp"

namespace fracsav {
namespace {

using std::numbers::pi;

Field random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return Field::from_function(g, [&](double, double) { return u(rng); });
}

Grid odd_periodic() { return {Boundary::Periodic, 8, 6, 0.0, 3.0, -1.0, 1.5}; }
Grid odd_neumann() { return {Boundary::Neumann, 7, 5, -1.0, 2.0, 0.0, 1.0}; }

double max_diff(const Field& a, const Field& b) { return (a.values - b.values).abs().maxCoeff(); }

TEST(Grid, Layout) {
  const Grid p = Grid::periodic(32);
  EXPECT_EQ(p.nx, 32);
  EXPECT_DOUBLE_EQ(p.hx(), 2.0 * pi / 32.0);
  const Grid n = Grid::neumann(32);
  EXPECT_EQ(n.nx, 33);
  EXPECT_DOUBLE_EQ(n.x(0), -1.0);
  EXPECT_DOUBLE_EQ(n.x(32), 1.0);
  EXPECT_DOUBLE_EQ(n.x(16), 0.0);
  EXPECT_DOUBLE_EQ(n.weights_x().sum(), 2.0);
  EXPECT_EQ(boundary_from_string(to_string(Boundary::Neumann)), Boundary::Neumann);
  EXPECT_THROW(boundary_from_string("dirichlet"), std::invalid_argument);
}

TEST(Spectral, PeriodicEigenfunction) {
  const Grid g = Grid::periodic(32);
  SpectralOps ops(g);
  const Field f = Field::from_function(g, [](double x, double y) { return std::sin(2 * x) * std::cos(3 * y); });
  const Field lap = ops.laplacian(f);
  EXPECT_LE(max_diff(lap, Field{g, -13.0 * f.values}), 1e-12 * 13.0);
}

TEST(Spectral, NeumannEigenfunction) {
  const Grid g = Grid::neumann(16);
  SpectralOps ops(g);
  const Field f = Field::from_function(g, [](double x, double y) { return std::cos(2 * pi * x) * std::cos(pi * y); });
  const Field lap = ops.laplacian(f);
  const double lambda = 5.0 * pi * pi;
  EXPECT_LE(max_diff(lap, Field{g, -lambda * f.values}), 1e-12 * lambda);
}

TEST(Spectral, ConstantsAreInTheKernel) {
  for (const Grid& g : {Grid::periodic(16), Grid::neumann(16)}) {
    SpectralOps ops(g);
    EXPECT_LE(max_abs(ops.laplacian(Field::constant(g, 2.5))), 1e-12);
  }
}

TEST(Spectral, LaplacianMatchesDenseMatrix) {
  for (const Grid& g : {odd_periodic(), odd_neumann(), Grid::periodic(8), Grid::neumann(8)}) {
    SpectralOps ops(g);
    const Field f = random_field(g, 3);
    const Eigen::VectorXd expect = oracle::dense_laplacian(g) * oracle::flat(f);
    const Eigen::VectorXd got = oracle::flat(ops.laplacian(f));
    EXPECT_LE((got - expect).cwiseAbs().maxCoeff(), 1e-10 * expect.cwiseAbs().maxCoeff())
        << to_string(g.bc) << ' ' << g.nx << 'x' << g.ny;
  }
}

TEST(Spectral, HelmholtzResidualAndDenseSolve) {
  for (const Grid& g : {odd_periodic(), odd_neumann()}) {
    SpectralOps ops(g);
    const Field rhs = random_field(g, 5);
    const double a = 40.0, kappa = 0.3;
    const Field u = ops.solve_helmholtz(a, kappa, rhs);
    EXPECT_LE(max_diff(ops.apply_helmholtz(a, kappa, u), rhs), 1e-12);
    const Eigen::MatrixXd A =
        a * Eigen::MatrixXd::Identity(g.size(), g.size()) - kappa * oracle::dense_laplacian(g);
    const Eigen::VectorXd dense = A.fullPivLu().solve(oracle::flat(rhs));
    EXPECT_LE((oracle::flat(u) - dense).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Spectral, HelmholtzRejectsBadCoefficients) {
  const Grid g = Grid::periodic(8);
  SpectralOps ops(g);
  const Field f = Field::constant(g, 1.0);
  EXPECT_THROW(ops.solve_helmholtz(0.0, 1.0, f), std::invalid_argument);
  EXPECT_THROW(ops.solve_helmholtz(1.0, -1.0, f), std::invalid_argument);
}

TEST(Spectral, ParsevalAndGradientNorm) {
  for (const Grid& g : {odd_periodic(), odd_neumann(), Grid::periodic(32), Grid::neumann(32)}) {
    SpectralOps ops(g);
    const Field f = random_field(g, 9);
    const double l2 = norm_sq(f);
    EXPECT_NEAR(ops.spectral_norm_sq(f), l2, 1e-12 * l2);
    const Eigen::VectorXd w = oracle::dense_weights(g);
    const Eigen::VectorXd v = oracle::flat(f);
    const double grad = -v.dot(w.asDiagonal() * (oracle::dense_laplacian(g) * v));
    EXPECT_GT(grad, 0.0);
    EXPECT_NEAR(ops.grad_norm_sq(f), grad, 1e-10 * grad);
    EXPECT_NEAR(-inner(ops.laplacian(f), f), grad, 1e-10 * grad);
  }
}

TEST(Spectral, LaplacianIsSymmetricInTheQuadratureProduct) {
  for (const Grid& g : {odd_periodic(), odd_neumann()}) {
    SpectralOps ops(g);
    const Field f = random_field(g, 21), h = random_field(g, 22);
    const double lhs = inner(ops.laplacian(f), h), rhs = inner(f, ops.laplacian(h));
    EXPECT_NEAR(lhs, rhs, 1e-11 * std::abs(lhs));
  }
}

TEST(Spectral, DealiasKeepsLowModesOnly) {
  const Grid p = Grid::periodic(32);
  SpectralOps po(p);
  const Field low = Field::from_function(p, [](double x, double y) { return std::cos(10 * x) * std::sin(3 * y); });
  const Field high = Field::from_function(p, [](double x, double) { return std::cos(11 * x); });
  EXPECT_LE(max_diff(po.dealias(low), low), 1e-13);
  EXPECT_LE(max_abs(po.dealias(high)), 1e-13);

  const Grid n = Grid::neumann(16);
  SpectralOps no(n);
  const Field nlow = Field::from_function(n, [](double x, double) { return std::cos(10 * pi * (x + 1) / 2); });
  const Field nhigh = Field::from_function(n, [](double, double y) { return std::cos(11 * pi * (y + 1) / 2); });
  EXPECT_LE(max_diff(no.dealias(nlow), nlow), 1e-13);
  EXPECT_LE(max_abs(no.dealias(nhigh)), 1e-13);
}

TEST(Spectral, InnerProductChecksGrids) {
  const Field a = Field::constant(Grid::periodic(8), 1.0);
  const Field b = Field::constant(Grid::periodic(16), 1.0);
  EXPECT_THROW(inner(a, b), std::invalid_argument);
  const Grid g = Grid::neumann(8);
  EXPECT_NEAR(integrate_potential(Field::constant(g, 0.0), Potential::double_well()), 1.0, 1e-14);
  EXPECT_NEAR(norm_sq(Field::constant(g, 1.0)), 4.0, 1e-14);
}

TEST(FieldCsv, RoundTrip) {
  for (const Grid& g : {odd_periodic(), odd_neumann()}) {
    const Field f = random_field(g, 77);
    std::stringstream ss;
    write_field_csv(ss, f, "t=0.5");
    EXPECT_EQ(ss.str().rfind("# t=0.5", 0), 0u);
    const Field back = read_field_csv(ss);
    EXPECT_TRUE(back.grid == g);
    EXPECT_EQ(max_diff(back, f), 0.0);
  }
}

TEST(FieldCsv, RejectsTruncatedInput) {
  std::stringstream ss;
  write_field_csv(ss, random_field(Grid::periodic(4), 1));
  std::string text = ss.str();
  text.resize(text.size() - 20);
  std::stringstream cut(text);
  EXPECT_THROW(read_field_csv(cut), std::runtime_error);
}

}  // namespace
}  // namespace fracsav
