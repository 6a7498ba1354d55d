#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracsav {

enum class MeshFamily { Uniform, Graded, Composite };

/// Time grid 0 = t_0 < t_1 < ... < t_M = T.
///
/// Composite meshes are graded on [0, split_time] and uniform after it.
/// `grading` is the exponent r of the graded part (1 for uniform meshes).
class TimeMesh {
 public:
  MeshFamily family() const { return family_; }
  double grading() const { return grading_; }
  double split_time() const { return split_time_; }
  /// Number of graded steps on [0, split_time] (composite), or M otherwise.
  std::size_t graded_steps() const { return graded_steps_; }

  std::size_t steps() const { return nodes_.size() - 1; }
  double final_time() const { return nodes_.back(); }
  double t(std::size_t n) const { return nodes_[n]; }
  /// Step size Δt_n = t_n − t_{n−1}, for n ≥ 1.
  double dt(std::size_t n) const { return nodes_[n] - nodes_[n - 1]; }
  double max_step() const;
  std::span<const double> nodes() const { return nodes_; }

  friend TimeMesh build_uniform_mesh(double final_time, std::size_t steps);
  friend TimeMesh build_graded_mesh(double final_time, std::size_t steps,
                                    double grading);
  friend TimeMesh build_composite_mesh(double final_time,
                                       std::size_t graded_steps,
                                       double grading, double uniform_dt);

 private:
  std::vector<double> nodes_;
  MeshFamily family_ = MeshFamily::Uniform;
  double grading_ = 1.0;
  double split_time_ = 0.0;
  std::size_t graded_steps_ = 0;
};

/// t_n = nT/M.
TimeMesh build_uniform_mesh(double final_time, std::size_t steps);

/// t_n = (n/M)^r T with r ≥ 1; r = 1 reproduces the uniform mesh exactly.
TimeMesh build_graded_mesh(double final_time, std::size_t steps,
                           double grading);

/// Graded on [0,1] with `graded_steps` steps, then uniform steps of
/// `uniform_dt` up to `final_time`. Requires (T − 1)/dt to be an integer.
TimeMesh build_composite_mesh(double final_time, std::size_t graded_steps,
                              double grading, double uniform_dt);

}  // namespace fracsav
