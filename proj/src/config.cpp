#include "fracsav/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "CLI11.hpp"

namespace fracsav {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Values of every flag as given, before defaults are resolved.
struct Raw {
  std::string command, problem, scheme, bc, mesh, error_mode, out;
  double alpha = 0.5, eps2 = 0, theta = 0, c0 = 0, r = 1, dt = 0.01, T = 1, mu = 0.4;
  long long grid = 0;
  long long M = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<long long> levels;
};

struct Parser {
  CLI::App app{"Time-fractional Allen-Cahn solver with SAV time stepping", "fracsav"};
  Raw raw;

  Parser() {
    app.allow_config_extras(false);
    app.set_config("--config", "", "Read key = value settings from FILE");
    app.add_option("command,--command", raw.command, "converge | circle | coarsen | single-run");
    app.add_option("--problem", raw.problem, "ex1 | ex2 | ex3 | circle | coarsen");
    app.add_option("--alpha", raw.alpha, "Fractional order in (0,1]");
    app.add_option("--eps2", raw.eps2, "Interface parameter eps^2");
    app.add_option("--theta", raw.theta, "Stabilization share, 0 <= theta <= eps2 (default eps2)");
    app.add_option("--c0", raw.c0, "Energy shift C0 >= 0");
    app.add_option("--scheme", raw.scheme, "l1 | l1cn");
    app.add_option("--bc", raw.bc, "periodic | neumann");
    app.add_option("--grid", raw.grid, "Points (periodic) or intervals (neumann) per direction");
    app.add_option("--mesh", raw.mesh, "uniform | graded | composite");
    app.add_option("--r", raw.r, "Grading exponent r >= 1");
    app.add_option("--M", raw.M, "Time steps (graded steps on [0,1] for composite meshes)");
    app.add_option("--dt", raw.dt, "Uniform step after t = 1 on composite meshes");
    app.add_option("--T", raw.T, "Final time");
    app.add_option("--mu", raw.mu, "Regularity exponent of the ex2 solution");
    app.add_option("--seed", raw.seed, "Random seed for coarsening data");
    app.add_option("--error-mode", raw.error_mode, "max | final");
    app.add_option("--out", raw.out, "Output directory");
    app.add_option("--jobs", raw.jobs, "Concurrent runs in a convergence study");
    app.add_option("--levels", raw.levels, "Step counts of a convergence study, comma separated")
        ->delimiter(',');
  }

  bool given(const std::string& name) const { return app.get_option(name)->count() > 0; }
};

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

template <typename Fn>
auto enum_value(const std::string& key, const std::string& value, Fn&& parse) {
  try {
    return parse(value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("--" + key + ": " + e.what());
  }
}

Eigen::Index default_grid(ProblemId p) {
  switch (p) {
    case ProblemId::Ex1:
    case ProblemId::Ex2: return 32;
    case ProblemId::Ex3: return 64;
    case ProblemId::Circle:
    case ProblemId::Coarsen: return 128;
  }
  return 64;
}

double default_eps2(ProblemId p) {
  switch (p) {
    case ProblemId::Ex1:
    case ProblemId::Ex2: return 1.0;
    case ProblemId::Circle: return 0.0313 * 0.0313;
    case ProblemId::Ex3:
    case ProblemId::Coarsen: return 0.001;
  }
  return 0.001;
}

RunConfig resolve(const Parser& p) {
  const Raw& raw = p.raw;
  RunConfig c;
  if (raw.command.empty())
    throw ConfigError("missing command; give one of converge, circle, coarsen, single-run");
  c.command = enum_value("command", raw.command, command_from_string);

  if (p.given("--problem")) {
    c.problem = enum_value("problem", raw.problem, problem_from_string);
  } else {
    c.problem = c.command == Command::Circle    ? ProblemId::Circle
                : c.command == Command::Coarsen ? ProblemId::Coarsen
                : c.command == Command::Converge ? ProblemId::Ex1
                                                 : ProblemId::Ex3;
  }
  const bool study_problem = c.problem == ProblemId::Ex1 || c.problem == ProblemId::Ex2 ||
                             c.problem == ProblemId::Ex3;
  if ((c.command == Command::Converge || c.command == Command::SingleRun) && !study_problem)
    throw ConfigError(to_string(c.command) + " runs ex1, ex2 or ex3; use the " +
                      to_string(c.problem) + " command for problem " + to_string(c.problem));
  if (c.command == Command::Circle && c.problem != ProblemId::Circle)
    throw ConfigError("the circle command only runs --problem circle");
  if (c.command == Command::Coarsen && c.problem != ProblemId::Coarsen)
    throw ConfigError("the coarsen command only runs --problem coarsen");

  const Boundary natural_bc = c.problem == ProblemId::Ex1 ? Boundary::Periodic : Boundary::Neumann;
  c.bc = p.given("--bc") ? enum_value("bc", raw.bc, boundary_from_string) : natural_bc;
  if (c.bc != natural_bc)
    throw ConfigError("problem " + to_string(c.problem) + " is posed with " + to_string(natural_bc) +
                      " boundaries; drop --bc or set it to " + to_string(natural_bc));

  c.alpha = raw.alpha;
  if (!(c.alpha > 0.0 && c.alpha <= 1.0))
    throw ConfigError("--alpha " + num(c.alpha) + " is outside (0,1]; pick a fractional order in (0,1]");
  c.eps2 = p.given("--eps2") ? raw.eps2 : default_eps2(c.problem);
  if (!(c.eps2 > 0.0)) throw ConfigError("--eps2 must be positive, got " + num(c.eps2));
  c.theta = p.given("--theta") ? raw.theta : c.eps2;
  if (!(c.theta >= 0.0 && c.theta <= c.eps2))
    throw ConfigError("--theta " + num(c.theta) + " must satisfy 0 <= theta <= eps2 = " +
                      num(c.eps2) + "; lower it or omit it to use eps2");
  c.c0 = raw.c0;
  if (!(c.c0 >= 0.0)) throw ConfigError("--c0 must be nonnegative, got " + num(c.c0));
  c.scheme = p.given("--scheme") ? enum_value("scheme", raw.scheme, scheme_from_string) : Scheme::L1CN;

  c.grid = p.given("--grid") ? static_cast<Eigen::Index>(raw.grid) : default_grid(c.problem);
  if (c.grid < 4) throw ConfigError("--grid must be at least 4, got " + std::to_string(c.grid));

  const bool long_run = c.command == Command::Circle || c.command == Command::Coarsen;
  if (p.given("--mesh")) {
    c.mesh = enum_value("mesh", raw.mesh, mesh_family_from_string);
  } else {
    c.mesh = long_run ? MeshFamily::Composite
             : c.problem == ProblemId::Ex1 ? MeshFamily::Uniform
                                           : MeshFamily::Graded;
  }
  if (long_run && c.mesh != MeshFamily::Composite)
    throw ConfigError(to_string(c.command) + " runs on a composite mesh; drop --mesh or use --mesh composite");

  if (p.given("--r")) {
    c.r = raw.r;
    if (!(c.r >= 1.0)) throw ConfigError("--r " + num(c.r) + " is below 1; grading exponents start at 1");
    if (c.mesh == MeshFamily::Uniform && c.r != 1.0)
      throw ConfigError("--r only applies to graded and composite meshes; drop it or pick --mesh graded");
  } else {
    c.r = c.mesh == MeshFamily::Uniform ? 1.0 : singular_grading(c.alpha);
  }

  if (raw.M < 1) throw ConfigError("--M must be at least 1, got " + std::to_string(raw.M));
  c.M = static_cast<std::size_t>(raw.M);
  c.dt = raw.dt;
  if (!(c.dt > 0.0)) throw ConfigError("--dt must be positive, got " + num(c.dt));
  if (p.given("--T")) {
    c.T = raw.T;
  } else {
    c.T = c.problem == ProblemId::Circle ? 32.0 : c.problem == ProblemId::Coarsen ? 100.0 : 1.0;
  }
  if (!(c.T > 0.0)) throw ConfigError("--T must be positive, got " + num(c.T));
  if (c.mesh == MeshFamily::Composite) {
    if (!(c.T > 1.0)) throw ConfigError("composite meshes need --T > 1, got " + num(c.T));
    const double count = (c.T - 1.0) / c.dt;
    if (std::abs(count - std::round(count)) > 1e-9 * std::max(1.0, count))
      throw ConfigError("--dt " + num(c.dt) + " does not divide T - 1 = " + num(c.T - 1.0) +
                        " into whole steps");
  }
  c.mu = raw.mu;
  if (!(c.mu > 0.0)) throw ConfigError("--mu must be positive, got " + num(c.mu));
  c.seed = raw.seed;

  const bool exact = c.problem == ProblemId::Ex1 || c.problem == ProblemId::Ex2;
  c.error_mode = p.given("--error-mode") ? enum_value("error-mode", raw.error_mode, error_mode_from_string)
                 : exact                 ? ErrorMode::Max
                                         : ErrorMode::Final;
  if (c.command == Command::Converge && !exact && c.error_mode == ErrorMode::Max)
    throw ConfigError("ex3 has no exact solution; use --error-mode final");

  c.out = p.given("--out") ? raw.out : ".";
  if (c.out.empty()) throw ConfigError("--out must name a directory");
  c.jobs = raw.jobs;
  if (c.jobs < 1) throw ConfigError("--jobs must be at least 1");

  if (c.command == Command::Converge) {
    if (p.given("--levels")) {
      for (long long m : raw.levels) {
        if (m < 1) throw ConfigError("--levels entries must be positive step counts");
        c.levels.push_back(static_cast<std::size_t>(m));
      }
      for (std::size_t k = 1; k < c.levels.size(); ++k)
        if (c.levels[k] <= c.levels[k - 1])
          throw ConfigError("--levels must be strictly increasing");
      if (c.levels.size() < 2) throw ConfigError("--levels needs at least two step counts");
    } else {
      c.levels = {16, 32, 64, 128, 256};
    }
  } else if (p.given("--levels")) {
    throw ConfigError("--levels only applies to the converge command");
  }
  return c;
}

RunConfig run_parser(Parser& p, const std::function<void()>& parse) {
  try {
    parse();
  } catch (const CLI::ParseError& e) {
    throw ConfigError(first_line(e.what()));
  }
  return resolve(p);
}

}  // namespace

const char* version() { return FRACSAV_VERSION; }

std::string to_string(Command c) {
  switch (c) {
    case Command::Converge: return "converge";
    case Command::Circle: return "circle";
    case Command::Coarsen: return "coarsen";
    case Command::SingleRun: return "single-run";
  }
  return "unknown";
}

Command command_from_string(const std::string& s) {
  if (s == "converge") return Command::Converge;
  if (s == "circle") return Command::Circle;
  if (s == "coarsen") return Command::Coarsen;
  if (s == "single-run") return Command::SingleRun;
  throw std::invalid_argument("unknown command '" + s +
                              "' (expected converge, circle, coarsen or single-run)");
}

std::string to_string(ProblemId p) {
  switch (p) {
    case ProblemId::Ex1: return "ex1";
    case ProblemId::Ex2: return "ex2";
    case ProblemId::Ex3: return "ex3";
    case ProblemId::Circle: return "circle";
    case ProblemId::Coarsen: return "coarsen";
  }
  return "unknown";
}

ProblemId problem_from_string(const std::string& s) {
  if (s == "ex1") return ProblemId::Ex1;
  if (s == "ex2") return ProblemId::Ex2;
  if (s == "ex3") return ProblemId::Ex3;
  if (s == "circle") return ProblemId::Circle;
  if (s == "coarsen") return ProblemId::Coarsen;
  throw std::invalid_argument("unknown problem '" + s +
                              "' (expected ex1, ex2, ex3, circle or coarsen)");
}

SchemeConfig RunConfig::scheme_config() const {
  SchemeConfig s;
  s.alpha = alpha;
  s.eps2 = eps2;
  s.theta = theta;
  s.c0 = c0;
  s.scheme = scheme;
  return s;
}

MeshSpec RunConfig::mesh_spec() const { return {mesh, T, r, dt}; }

std::string RunConfig::canonical() const {
  std::ostringstream os;
  auto str = [&](const char* k, const std::string& v) { os << k << " = \"" << v << "\"\n"; };
  auto val = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
  str("command", to_string(command));
  str("problem", to_string(problem));
  val("alpha", num(alpha));
  val("eps2", num(eps2));
  val("theta", num(theta));
  val("c0", num(c0));
  str("scheme", to_string(scheme));
  str("bc", to_string(bc));
  val("grid", std::to_string(grid));
  str("mesh", to_string(mesh));
  val("r", num(r));
  val("M", std::to_string(M));
  val("dt", num(dt));
  val("T", num(T));
  val("mu", num(mu));
  val("seed", std::to_string(seed));
  str("error-mode", to_string(error_mode));
  str("out", out);
  val("jobs", std::to_string(jobs));
  if (!levels.empty()) {
    std::string list = "[";
    for (std::size_t k = 0; k < levels.size(); ++k)
      list += (k ? ", " : "") + std::to_string(levels[k]);
    val("levels", list + "]");
  }
  return os.str();
}

std::vector<std::string> RunConfig::header() const {
  std::vector<std::string> lines{std::string("fracsav ") + version()};
  std::istringstream is(canonical());
  for (std::string line; std::getline(is, line);) lines.push_back(line);
  return lines;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  return run_parser(p, [&] { p.app.parse(reversed); });
}

RunConfig parse_config_text(const std::string& text) {
  Parser p;
  std::istringstream is(text);
  return run_parser(p, [&] { p.app.parse_from_stream(is); });
}

}  // namespace fracsav
