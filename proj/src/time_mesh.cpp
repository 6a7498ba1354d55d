#include "fracsav/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracsav {

double TimeMesh::max_step() const {
  double tau = 0.0;
  for (std::size_t n = 1; n < nodes_.size(); ++n) tau = std::max(tau, dt(n));
  return tau;
}

TimeMesh build_uniform_mesh(double final_time, std::size_t steps) {
  if (!(final_time > 0.0))
    throw std::invalid_argument("uniform mesh: final time must be positive, got " +
                                std::to_string(final_time));
  if (steps == 0) throw std::invalid_argument("uniform mesh: need at least one step");

  TimeMesh mesh;
  mesh.nodes_.resize(steps + 1);
  const auto m = static_cast<double>(steps);
  for (std::size_t n = 0; n <= steps; ++n)
    mesh.nodes_[n] = static_cast<double>(n) * final_time / m;
  mesh.nodes_.back() = final_time;
  mesh.family_ = MeshFamily::Uniform;
  mesh.graded_steps_ = steps;
  return mesh;
}

TimeMesh build_graded_mesh(double final_time, std::size_t steps, double grading) {
  if (!(grading >= 1.0))
    throw std::invalid_argument("graded mesh: grading exponent r must be >= 1, got " +
                                std::to_string(grading));
  TimeMesh mesh = build_uniform_mesh(final_time, steps);
  mesh.family_ = MeshFamily::Graded;
  mesh.grading_ = grading;
  if (grading == 1.0) return mesh;

  const auto m = static_cast<double>(steps);
  for (std::size_t n = 1; n < steps; ++n)
    mesh.nodes_[n] = std::pow(static_cast<double>(n) / m, grading) * final_time;
  return mesh;
}

TimeMesh build_composite_mesh(double final_time, std::size_t graded_steps,
                              double grading, double uniform_dt) {
  constexpr double split = 1.0;
  if (!(final_time > split))
    throw std::invalid_argument("composite mesh: final time must exceed 1, got " +
                                std::to_string(final_time));
  if (!(uniform_dt > 0.0))
    throw std::invalid_argument("composite mesh: uniform step must be positive");

  const double span = final_time - split;
  const double ratio = span / uniform_dt;
  const double count = std::round(ratio);
  if (count < 1.0 || std::abs(ratio - count) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("composite mesh: (T - 1)/dt = " + std::to_string(ratio) +
                                " is not an integer");

  TimeMesh mesh = build_graded_mesh(split, graded_steps, grading);
  const auto uniform_steps = static_cast<std::size_t>(count);
  mesh.nodes_.reserve(graded_steps + uniform_steps + 1);
  for (std::size_t k = 1; k <= uniform_steps; ++k)
    mesh.nodes_.push_back(split + static_cast<double>(k) * span / count);
  mesh.nodes_.back() = final_time;

  mesh.family_ = MeshFamily::Composite;
  mesh.split_time_ = split;
  mesh.graded_steps_ = graded_steps;
  return mesh;
}

}  // namespace fracsav
