#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "fracsav/weights.hpp"
#include "oracles.hpp"

namespace fracsav {
namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(Gamma, KnownValues) {
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  EXPECT_LE(rel(std::tgamma(1.0), 1.0), 1e-13);
  EXPECT_LE(rel(std::tgamma(1.5), 0.5 * sqrt_pi), 1e-13);
  EXPECT_LE(rel(std::tgamma(2.5), 0.75 * sqrt_pi), 1e-13);
  EXPECT_LE(rel(std::tgamma(5.0), 24.0), 1e-13);
}

TEST(L1Weights, UniformLeadingWeight) {
  const TimeMesh mesh = build_uniform_mesh(1.0, 4);  // tau = 0.25
  const auto row = l1_weights(mesh, 0, 0.5);
  const double expected = std::sqrt(0.25) / std::tgamma(1.5);
  EXPECT_NEAR(row.values(0), 0.5641896, 1e-7);
  EXPECT_LE(rel(row.values(0), expected), 1e-14);
  EXPECT_LE(rel(row.values(0), oracle::kernel_integral(0.0, 0.25, 0.25, 0.5)), 1e-10);
}

TEST(L1Weights, BackwardEulerAtAlphaOne) {
  const TimeMesh mesh = build_uniform_mesh(2.0, 7);
  const auto row = l1_weights(mesh, 5, 1.0);
  EXPECT_EQ(row.values(0), 1.0);
  for (Eigen::Index j = 1; j <= 5; ++j) EXPECT_EQ(row.values(j), 0.0);
  const auto general = l1_weights_general(mesh, 5, 1.0);
  EXPECT_EQ(general.values(0), 1.0);
  for (Eigen::Index j = 1; j <= 5; ++j) EXPECT_EQ(general.values(j), 0.0);
}

TEST(L1Weights, GradedUnitExponentMatchesUniform) {
  const TimeMesh u = build_uniform_mesh(1.0, 4);
  const TimeMesh g = build_graded_mesh(1.0, 4, 1.0);
  for (std::size_t n = 0; n < 4; ++n) {
    const auto a = l1_weights(u, n, 0.3);
    const auto b = l1_weights(g, n, 0.3);
    for (Eigen::Index j = 0; j <= static_cast<Eigen::Index>(n); ++j)
      EXPECT_LE(rel(b.values(j), a.values(j)), 1e-14);
  }
}

TEST(L1Weights, RejectsBadInput) {
  const TimeMesh mesh = build_uniform_mesh(1.0, 4);
  EXPECT_THROW(l1_weights(mesh, 0, 0.0), std::invalid_argument);
  EXPECT_THROW(l1_weights(mesh, 0, 1.5), std::invalid_argument);
  EXPECT_THROW(l1cn_weights(mesh, 0, -0.2), std::invalid_argument);
  EXPECT_THROW(l1_weights(mesh, 4, 0.5), std::out_of_range);
}

TEST(L1CNWeights, UniformLeadingWeight) {
  const TimeMesh mesh = build_uniform_mesh(1.0, 4);
  const auto row = l1cn_weights(mesh, 0, 0.5);
  const double expected = std::sqrt(0.25) / (std::tgamma(1.5) * std::sqrt(2.0));
  EXPECT_NEAR(row.values(0), 0.3989423, 1e-7);
  EXPECT_LE(rel(row.values(0), expected), 1e-14);
  EXPECT_LE(rel(row.values(0), oracle::kernel_integral(0.0, 0.125, 0.125, 0.5)), 1e-10);
}

TEST(L1CNWeights, CrankNicolsonAtAlphaOne) {
  const TimeMesh mesh = build_uniform_mesh(1.0, 6);
  const auto row = l1cn_weights(mesh, 4, 1.0);
  EXPECT_EQ(row.values(0), 1.0);
  for (Eigen::Index k = 1; k <= 4; ++k) EXPECT_EQ(row.values(k), 0.0);
}

TEST(L1CNWeights, GradedUnitExponentMatchesUniform) {
  const TimeMesh u = build_uniform_mesh(1.0, 5);
  const TimeMesh g = build_graded_mesh(1.0, 5, 1.0);
  for (std::size_t n = 0; n < 5; ++n) {
    const auto a = l1cn_weights(u, n, 0.8);
    const auto b = l1cn_weights(g, n, 0.8);
    for (Eigen::Index j = 0; j <= static_cast<Eigen::Index>(n); ++j)
      EXPECT_LE(rel(b.values(j), a.values(j)), 1e-14);
  }
}

// The printed graded L1-CN coefficients divide each kernel integral by the
// scaled step (j+1)^r - j^r; undoing that factor must reproduce our rows.
TEST(L1CNWeights, GradedMatchesPrintedFormUpToStepNormalization) {
  const double T = 1.3, r = 2.5, alpha = 0.35;
  const std::size_t M = 40;
  const TimeMesh mesh = build_graded_mesh(T, M, r);
  const double p = 1.0 - alpha;
  const double pref = std::pow(T, p) / (std::tgamma(2.0 - alpha) *
                                        std::pow(2.0 * std::pow(double(M), r), p));
  for (std::size_t n : {0u, 1u, 7u, 39u}) {
    const auto row = l1cn_weights(mesh, n, alpha);
    const double nn = double(n);
    const double printed0 =
        pref / std::pow(std::pow(nn + 1, r) - std::pow(nn, r), alpha);
    EXPECT_LE(rel(printed0 * (std::pow(nn + 1, r) - std::pow(nn, r)), row.values(0)), 1e-12);
    for (std::size_t k = 1; k <= n; ++k) {
      const double j = double(n - k);
      const double top = std::pow(std::pow(nn + 1, r) + std::pow(nn, r) - 2 * std::pow(j, r), p) -
                         std::pow(std::pow(nn + 1, r) + std::pow(nn, r) - 2 * std::pow(j + 1, r), p);
      const double step = std::pow(j + 1, r) - std::pow(j, r);
      const double printed = pref * top / step;
      EXPECT_LE(rel(printed * step, row.values(Eigen::Index(k))), 1e-10) << n << ' ' << k;
    }
  }
}

TEST(HatWeights, KnownValues) {
  const auto row = hat_weights(3, 0.5, 1.0);
  EXPECT_NEAR(row.values(0), 0.7522528, 1e-7);
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  EXPECT_LE(rel(row.values(0), 1.0 / (0.75 * sqrt_pi)), 1e-13);
  const auto one = hat_weights(3, 1.0, 1.0);
  EXPECT_EQ(one.values(1), 0.0);
}

TEST(HatWeights, StrictlyDecreasingPositive) {
  for (int a = 1; a <= 9; ++a) {
    const double alpha = 0.1 * a;
    const auto row = hat_weights(1001, alpha, 1.0);
    for (Eigen::Index k = 1; k < 1001; ++k) {
      ASSERT_GT(row.values(k), row.values(k + 1)) << "alpha=" << alpha << " k=" << k;
      ASSERT_GT(row.values(k + 1), 0.0);
    }
  }
}

TEST(Weights, RowsMatchQuadratureOnEveryFamily) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha_dist(0.05, 0.95);
  const TimeMesh meshes[] = {build_uniform_mesh(1.0, 200), build_graded_mesh(2.0, 200, 2.7),
                             build_composite_mesh(3.0, 60, 3.0, 0.02)};
  for (const TimeMesh& mesh : meshes) {
    std::uniform_int_distribution<std::size_t> n_dist(0, std::min<std::size_t>(199, mesh.steps() - 1));
    for (int trial = 0; trial < 8; ++trial) {
      const double alpha = alpha_dist(rng);
      const std::size_t n = n_dist(rng);
      const Eigen::VectorXd q1 = oracle::l1_row(mesh, n, alpha);
      const Eigen::VectorXd q2 = oracle::l1cn_row(mesh, n, alpha);
      const auto w1 = l1_weights(mesh, n, alpha);
      const auto w2 = l1cn_weights(mesh, n, alpha);
      const auto g1 = l1_weights_general(mesh, n, alpha);
      const auto g2 = l1cn_weights_general(mesh, n, alpha);
      for (Eigen::Index j = 0; j <= Eigen::Index(n); ++j) {
        ASSERT_LE(rel(w1.values(j), q1(j)), 1e-10) << "l1 n=" << n << " j=" << j;
        ASSERT_LE(rel(w2.values(j), q2(j)), 1e-10) << "l1cn n=" << n << " j=" << j;
        ASSERT_LE(rel(g1.values(j), q1(j)), 1e-10);
        ASSERT_LE(rel(g2.values(j), q2(j)), 1e-10);
      }
    }
  }
}

TEST(Weights, UniformRowsDecreaseMonotonically) {
  const TimeMesh mesh = build_uniform_mesh(1.0, 300);
  for (int a = 1; a <= 9; ++a) {
    const auto row = l1_weights(mesh, 299, 0.1 * a);
    for (Eigen::Index j = 0; j < 299; ++j) ASSERT_GT(row.values(j), row.values(j + 1));
    EXPECT_GT(row.values(299), 0.0);
  }
}

double lower_form(const Eigen::VectorXd& w, const Eigen::VectorXd& u) {
  double q = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k)
    for (Eigen::Index j = 0; j <= k; ++j) q += w(k - j) * u(j) * u(k);
  return q;
}

TEST(Positivity, L1QuadraticForm) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int a = 1; a <= 9; ++a) {
    const double alpha = 0.1 * a;
    for (std::size_t n : {1u, 10u, 100u, 512u}) {
      const auto row = l1_weights_uniform(n, alpha, 1.0);
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd u(Eigen::Index(n + 1));
        for (auto& v : u) v = nd(rng);
        ASSERT_GT(lower_form(row.values, u), 0.0);
      }
    }
  }
}

TEST(Positivity, L1CNQuadraticFormAndProofMatrix) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> nd;
  for (int a = 1; a <= 9; ++a) {
    const double alpha = 0.1 * a;
    for (std::size_t n : {1u, 10u, 100u, 512u}) {
      const auto row = l1cn_weights_uniform(n, alpha, 1.0);
      for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd u(Eigen::Index(n + 1));
        for (auto& v : u) v = nd(rng);
        ASSERT_GT(lower_form(row.values, u), 0.0);
      }
    }
    for (std::size_t n : {1u, 8u, 32u, 128u}) {
      const auto tilde = l1cn_weights_uniform(n, alpha, 1.0);
      const auto hat = hat_weights(n, alpha, 1.0);
      Eigen::VectorXd c = tilde.values - hat.values;
      for (Eigen::Index k = 1; k <= Eigen::Index(n); ++k) ASSERT_LT(c(k), 0.0);
      c(0) = (std::pow(2.0, alpha) - 2.0 / (2.0 - alpha) -
              alpha * (1.0 - alpha) / 12.0 * std::pow(double(n + 1), -alpha - 1.0)) /
             std::tgamma(2.0 - alpha);
      Eigen::MatrixXd C(n + 1, n + 1);
      for (Eigen::Index i = 0; i <= Eigen::Index(n); ++i)
        for (Eigen::Index j = 0; j <= Eigen::Index(n); ++j) C(i, j) = c(std::abs(i - j));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
      EXPECT_GT(es.eigenvalues().minCoeff(), 0.0) << "alpha=" << alpha << " n=" << n;
    }
  }
}

}  // namespace
}  // namespace fracsav
