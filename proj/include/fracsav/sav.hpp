#pragma once

// Scalar-auxiliary-variable time steppers for
//   D^alpha phi - eps2 Lap phi + F'(phi) = s.
//
// Both schemes carry R ~ sqrt(E_theta(phi) + C0) alongside phi, treat the
// nonlinear term and a theta-share of the diffusion explicitly, and reduce
// every step to two constant-coefficient Helmholtz solves plus a scalar
// recovery of (gamma, phi^{n+1}).

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fracsav/potential.hpp"
#include "fracsav/spectral.hpp"
#include "fracsav/time_mesh.hpp"

namespace fracsav {

enum class Scheme { L1, L1CN };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct SchemeConfig {
  double alpha = 1.0;
  double eps2 = 1.0;
  /// Defaults to eps2 when unset.
  std::optional<double> theta;
  double c0 = 0.0;
  Scheme scheme = Scheme::L1CN;
  Potential potential = Potential::double_well();
  /// Manufactured forcing s(grid, t); absent for the homogeneous problem.
  std::function<Field(const Grid&, double)> source;
  /// Apply the 2/3 rule to F'(phi).
  bool dealias = false;

  double theta_value() const { return theta.value_or(eps2); }
  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;
};

/// Raised when a run cannot continue, e.g. E_theta + C0 <= 0.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Stored increments d_k = (phi^{k+1} - phi^k) / dt_{k+1}, one column each.
class IncrementHistory {
 public:
  void reserve(std::size_t columns, Eigen::Index points);
  void push(const Array2& increment);
  std::size_t size() const { return count_; }
  /// sum_{k=0}^{n-1} w_{n-k} d_k for a weight row w_0..w_n with n = size().
  Array2 convolve(const Eigen::VectorXd& row, Eigen::Index nx, Eigen::Index ny) const;
  Eigen::Map<const Array2> increment(std::size_t k, Eigen::Index nx, Eigen::Index ny) const;

 private:
  Eigen::MatrixXd columns_;
  std::size_t count_ = 0;
};

struct SavState {
  std::size_t n = 0;
  Field phi;       // phi^n
  Field phi_prev;  // phi^{n-1}, equal to phi^0 at n = 0
  double R = 0.0;
  IncrementHistory history;
};

struct StepDiagnostics {
  double sigma = 0.0;
  /// E_theta + C0 at the explicit level used by the step.
  double denominator = 0.0;
};

struct EnergyRecord {
  std::size_t step = 0;
  double t = 0.0;
  double E = 0.0;
  double E_mod = 0.0;
  double R = 0.0;
};

/// E(phi) = eps2/2 |grad phi|^2 + int F(phi).
double original_energy(SpectralOps& ops, const Field& phi, const SchemeConfig& cfg);
/// E_theta(phi) = theta/2 |grad phi|^2 + int F(phi).
double theta_energy(SpectralOps& ops, const Field& phi, const SchemeConfig& cfg);

/// R^0 = sqrt(E_theta(phi0) + C0), phi^{-1} = phi^0. Reserves history for
/// `capacity` steps when nonzero.
SavState init_state(SpectralOps& ops, const Field& phi0, const SchemeConfig& cfg,
                    std::size_t capacity = 0);

/// Advance state from t_n to t_{n+1} with the first-order L1 scheme.
StepDiagnostics step_first_order(SpectralOps& ops, SavState& state, const TimeMesh& mesh,
                                 const SchemeConfig& cfg);
/// Advance state from t_n to t_{n+1} with the L1-CN scheme.
StepDiagnostics step_l1cn(SpectralOps& ops, SavState& state, const TimeMesh& mesh,
                          const SchemeConfig& cfg);
/// Dispatch on cfg.scheme.
StepDiagnostics step(SpectralOps& ops, SavState& state, const TimeMesh& mesh,
                     const SchemeConfig& cfg);

/// Scheme-specific discrete energy whose boundedness the stability theory
/// gives: ((eps2-theta)/2)|grad phi^n|^2 + R^2, plus
/// (theta/4)|grad(phi^n - phi^{n-1})|^2 for L1-CN.
double modified_energy(SpectralOps& ops, const SavState& state, const SchemeConfig& cfg,
                       Scheme scheme);

EnergyRecord energy_record(SpectralOps& ops, const SavState& state, const TimeMesh& mesh,
                           const SchemeConfig& cfg);

}  // namespace fracsav
