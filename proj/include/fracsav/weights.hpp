#pragma once

// Discrete Caputo weights for the L1 and L1-CN operators.
//
// A weight row for step n holds w_0 ... w_n, where w_{n-k} multiplies the
// increment (phi^{k+1} - phi^k) / dt_{k+1}. Every entry is a kernel integral
//   w_{n-k} = 1/Gamma(1-a) * int_{t_k}^{t_{k+1}} (t_* - s)^{-a} ds
// with t_* = t_{n+1} (L1) or t_{n+1/2} (L1-CN, whose last interval is cut at
// t_{n+1/2}). Values carry units of time^{1-a}.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "fracsav/time_mesh.hpp"

namespace fracsav {

template <typename Scalar>
struct WeightRow {
  std::size_t n = 0;
  Scalar alpha = 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
};

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("fractional order alpha must lie in (0,1], got " +
                                std::to_string(alpha));
}

inline void check_step(const TimeMesh& mesh, std::size_t n) {
  if (n >= mesh.steps())
    throw std::out_of_range("weight row index " + std::to_string(n) +
                            " outside mesh with " + std::to_string(mesh.steps()) +
                            " steps");
}

// (base + delta)^p - base^p without cancellation; base^p is read as 0 when
// base == 0, which is the a -> 1 limit that gives the backward-Euler row.
template <typename Scalar>
Scalar power_difference(Scalar base, Scalar delta, Scalar p) {
  using std::expm1, std::log1p, std::pow;
  if (base <= Scalar(0)) return pow(delta, p);
  return pow(base, p) * expm1(p * log1p(delta / base));
}

template <typename Scalar>
Scalar inv_gamma_2ma(Scalar alpha) {
  using std::tgamma;
  return Scalar(1) / tgamma(Scalar(2) - alpha);
}

}  // namespace detail

/// L1 row on a uniform mesh: w_j = tau^{1-a}/Gamma(2-a) [(j+1)^{1-a} - j^{1-a}].
template <typename Scalar = double>
WeightRow<Scalar> l1_weights_uniform(std::size_t n, Scalar alpha, Scalar tau) {
  detail::check_alpha(static_cast<double>(alpha));
  using std::pow;
  const Scalar p = Scalar(1) - alpha;
  const Scalar scale = pow(tau, p) * detail::inv_gamma_2ma(alpha);
  WeightRow<Scalar> row{n, alpha, {}};
  row.values.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t j = 0; j <= n; ++j)
    row.values(static_cast<Eigen::Index>(j)) =
        scale * detail::power_difference(Scalar(j), Scalar(1), p);
  return row;
}

/// L1-CN row on a uniform mesh (kernel centred at t_{n+1/2}).
template <typename Scalar = double>
WeightRow<Scalar> l1cn_weights_uniform(std::size_t n, Scalar alpha, Scalar tau) {
  detail::check_alpha(static_cast<double>(alpha));
  using std::pow;
  const Scalar p = Scalar(1) - alpha;
  const Scalar scale = pow(tau, p) * detail::inv_gamma_2ma(alpha);
  WeightRow<Scalar> row{n, alpha, {}};
  row.values.resize(static_cast<Eigen::Index>(n + 1));
  row.values(0) = scale * pow(Scalar(0.5), p);
  for (std::size_t k = 1; k <= n; ++k)
    row.values(static_cast<Eigen::Index>(k)) =
        scale * detail::power_difference(Scalar(k) - Scalar(0.5), Scalar(1), p);
  return row;
}

/// L1 row on t_j = (j/M)^r T, written in the integer node indices.
template <typename Scalar = double>
WeightRow<Scalar> l1_weights_graded(std::size_t n, Scalar alpha, Scalar final_time,
                                    std::size_t steps, Scalar grading) {
  detail::check_alpha(static_cast<double>(alpha));
  using std::pow;
  const Scalar p = Scalar(1) - alpha;
  const Scalar scale =
      pow(final_time / pow(Scalar(steps), grading), p) * detail::inv_gamma_2ma(alpha);
  const auto node = [grading](std::size_t j) { return pow(Scalar(j), grading); };
  const Scalar end = node(n + 1);
  WeightRow<Scalar> row{n, alpha, {}};
  row.values.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t k = 0; k <= n; ++k) {
    const Scalar right = node(k + 1);
    row.values(static_cast<Eigen::Index>(n - k)) =
        scale * detail::power_difference(end - right, right - node(k), p);
  }
  return row;
}

/// L1-CN row on t_j = (j/M)^r T. Entries are the raw kernel integrals; the
/// familiar printed graded form divides each by the scaled step
/// (j+1)^r - j^r, which this row does not.
template <typename Scalar = double>
WeightRow<Scalar> l1cn_weights_graded(std::size_t n, Scalar alpha, Scalar final_time,
                                      std::size_t steps, Scalar grading) {
  detail::check_alpha(static_cast<double>(alpha));
  using std::pow;
  const Scalar p = Scalar(1) - alpha;
  const Scalar scale = pow(final_time / (Scalar(2) * pow(Scalar(steps), grading)), p) *
                       detail::inv_gamma_2ma(alpha);
  const auto node = [grading](std::size_t j) { return pow(Scalar(j), grading); };
  // 2 t_{n+1/2} in index units
  const Scalar mid2 = node(n + 1) + node(n);
  WeightRow<Scalar> row{n, alpha, {}};
  row.values.resize(static_cast<Eigen::Index>(n + 1));
  row.values(0) = scale * pow(node(n + 1) - node(n), p);
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar right = node(k + 1);
    row.values(static_cast<Eigen::Index>(n - k)) =
        scale * detail::power_difference(mid2 - Scalar(2) * right,
                                         Scalar(2) * (right - node(k)), p);
  }
  return row;
}

/// L1 row from the kernel antiderivative on an arbitrary mesh.
template <typename Scalar = double>
WeightRow<Scalar> l1_weights_general(const TimeMesh& mesh, std::size_t n, Scalar alpha) {
  detail::check_alpha(static_cast<double>(alpha));
  detail::check_step(mesh, n);
  const Scalar p = Scalar(1) - alpha;
  const Scalar g = detail::inv_gamma_2ma(alpha);
  const Scalar end = Scalar(mesh.t(n + 1));
  WeightRow<Scalar> row{n, alpha, {}};
  row.values.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t k = 0; k <= n; ++k)
    row.values(static_cast<Eigen::Index>(n - k)) =
        g * detail::power_difference(end - Scalar(mesh.t(k + 1)), Scalar(mesh.dt(k + 1)), p);
  return row;
}

/// L1-CN row from the kernel antiderivative on an arbitrary mesh.
template <typename Scalar = double>
WeightRow<Scalar> l1cn_weights_general(const TimeMesh& mesh, std::size_t n,
                                       Scalar alpha) {
  detail::check_alpha(static_cast<double>(alpha));
  detail::check_step(mesh, n);
  using std::pow;
  const Scalar p = Scalar(1) - alpha;
  const Scalar g = detail::inv_gamma_2ma(alpha);
  const Scalar half = Scalar(mesh.dt(n + 1)) / Scalar(2);
  const Scalar mid = Scalar(mesh.t(n)) + half;
  WeightRow<Scalar> row{n, alpha, {}};
  row.values.resize(static_cast<Eigen::Index>(n + 1));
  row.values(0) = g * pow(half, p);
  for (std::size_t k = 0; k < n; ++k)
    row.values(static_cast<Eigen::Index>(n - k)) =
        g * detail::power_difference(mid - Scalar(mesh.t(k + 1)), Scalar(mesh.dt(k + 1)), p);
  return row;
}

/// L1 weights b^{(n)}_0 ... b^{(n)}_n for step n -> n+1 of `mesh`.
template <typename Scalar = double>
WeightRow<Scalar> l1_weights(const TimeMesh& mesh, std::size_t n, Scalar alpha) {
  detail::check_step(mesh, n);
  switch (mesh.family()) {
    case MeshFamily::Uniform:
      return l1_weights_uniform<Scalar>(n, alpha, Scalar(mesh.dt(1)));
    case MeshFamily::Graded:
      return l1_weights_graded<Scalar>(n, alpha, Scalar(mesh.final_time()), mesh.steps(),
                                       Scalar(mesh.grading()));
    case MeshFamily::Composite:
      break;
  }
  return l1_weights_general<Scalar>(mesh, n, alpha);
}

/// L1-CN weights b~^{(n)}_0 ... b~^{(n)}_n for step n -> n+1 of `mesh`.
template <typename Scalar = double>
WeightRow<Scalar> l1cn_weights(const TimeMesh& mesh, std::size_t n, Scalar alpha) {
  detail::check_step(mesh, n);
  switch (mesh.family()) {
    case MeshFamily::Uniform:
      return l1cn_weights_uniform<Scalar>(n, alpha, Scalar(mesh.dt(1)));
    case MeshFamily::Graded:
      return l1cn_weights_graded<Scalar>(n, alpha, Scalar(mesh.final_time()), mesh.steps(),
                                         Scalar(mesh.grading()));
    case MeshFamily::Composite:
      break;
  }
  return l1cn_weights_general<Scalar>(mesh, n, alpha);
}

/// Coefficients of the symmetric |t - s|^{-a} quadratic form on a uniform
/// mesh; used to audit positivity of the L1-CN weights.
template <typename Scalar = double>
WeightRow<Scalar> hat_weights(std::size_t n, Scalar alpha, Scalar tau) {
  detail::check_alpha(static_cast<double>(alpha));
  using std::pow, std::tgamma;
  const Scalar q = Scalar(2) - alpha;
  const Scalar scale = pow(tau, Scalar(1) - alpha) / tgamma(Scalar(3) - alpha);
  WeightRow<Scalar> row{n, alpha, {}};
  row.values.resize(static_cast<Eigen::Index>(n + 1));
  row.values(0) = scale;
  for (std::size_t k = 1; k <= n; ++k) {
    const Scalar kk = Scalar(k);
    row.values(static_cast<Eigen::Index>(k)) =
        scale * (pow(kk + 1, q) - Scalar(2) * pow(kk, q) + pow(kk - 1, q));
  }
  return row;
}

}  // namespace fracsav
