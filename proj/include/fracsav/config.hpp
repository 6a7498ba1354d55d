#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsav/experiments.hpp"
#include "fracsav/sav.hpp"
#include "fracsav/spectral.hpp"

namespace fracsav {

enum class Command { Converge, Circle, Coarsen, SingleRun };
enum class ProblemId { Ex1, Ex2, Ex3, Circle, Coarsen };

std::string to_string(Command c);
Command command_from_string(const std::string& s);
std::string to_string(ProblemId p);
ProblemId problem_from_string(const std::string& s);

/// Rejected command line or config file; the message is one line.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fully resolved run description. Every field holds a concrete value once
/// parse_config returns.
struct RunConfig {
  Command command = Command::SingleRun;
  ProblemId problem = ProblemId::Ex3;
  double alpha = 0.5;
  double eps2 = 0.001;
  double theta = 0.001;
  double c0 = 0.0;
  Scheme scheme = Scheme::L1CN;
  Boundary bc = Boundary::Neumann;
  Eigen::Index grid = 64;
  MeshFamily mesh = MeshFamily::Graded;
  double r = 1.0;
  std::size_t M = 100;
  double dt = 0.01;
  double T = 1.0;
  double mu = 0.4;
  std::uint64_t seed = 0;
  ErrorMode error_mode = ErrorMode::Max;
  std::string out = ".";
  unsigned jobs = 1;
  /// Step counts of a convergence study.
  std::vector<std::size_t> levels;

  SchemeConfig scheme_config() const;
  MeshSpec mesh_spec() const;
  /// `key = value` lines in a fixed order; parse_config reads them back.
  std::string canonical() const;
  /// Version line followed by the canonical lines, for CSV headers.
  std::vector<std::string> header() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses flags (argv without the program name). `--config FILE` reads
/// `key = value` lines first; flags given on the command line win.
/// Throws ConfigError on unknown keys, malformed values or violated
/// constraints.
RunConfig parse_config(const std::vector<std::string>& args);

/// Same keys as the flags, read from config text alone.
RunConfig parse_config_text(const std::string& text);

/// Runs the configured experiment, writes its CSV files under cfg.out and
/// returns a one-line summary.
std::string execute(const RunConfig& cfg);

const char* version();

}  // namespace fracsav
