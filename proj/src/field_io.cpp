#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracsav/spectral.hpp"

namespace fracsav {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Parses "key=value" out of a header line such as "# nx=65".
bool header_value(const std::string& line, const std::string& key, std::string& out) {
  const std::string tag = key + "=";
  const auto pos = line.find(tag);
  if (pos == std::string::npos) return false;
  out = line.substr(pos + tag.size());
  return true;
}

}  // namespace

void write_field_csv(std::ostream& os, const Field& f, const std::string& caption) {
  const Grid& g = f.grid;
  if (!caption.empty()) os << "# " << caption << '\n';
  os << "# nx=" << g.nx << '\n'
     << "# ny=" << g.ny << '\n'
     << "# domain=" << format_double(g.x0) << ',' << format_double(g.x1) << ','
     << format_double(g.y0) << ',' << format_double(g.y1) << '\n'
     << "# bc=" << to_string(g.bc) << '\n';
  for (Eigen::Index i = 0; i < g.nx; ++i) {
    for (Eigen::Index j = 0; j < g.ny; ++j) {
      if (j > 0) os << ',';
      os << format_double(f.values(i, j));
    }
    os << '\n';
  }
}

Field read_field_csv(std::istream& is) {
  Grid g;
  bool have_nx = false, have_ny = false, have_domain = false, have_bc = false;
  std::vector<double> data;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string v;
      if (header_value(line, "nx", v)) {
        g.nx = std::stol(v);
        have_nx = true;
      } else if (header_value(line, "ny", v)) {
        g.ny = std::stol(v);
        have_ny = true;
      } else if (header_value(line, "domain", v)) {
        std::istringstream ss(v);
        char c1, c2, c3;
        ss >> g.x0 >> c1 >> g.x1 >> c2 >> g.y0 >> c3 >> g.y1;
        have_domain = static_cast<bool>(ss);
      } else if (header_value(line, "bc", v)) {
        g.bc = boundary_from_string(v);
        have_bc = true;
      }
      continue;
    }
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0) throw std::runtime_error("field snapshot has a non-numeric cell '" + cell + "'");
      data.push_back(v);
    }
  }
  if (!(have_nx && have_ny && have_domain && have_bc))
    throw std::runtime_error("field snapshot is missing one of the nx/ny/domain/bc headers");
  if (static_cast<Eigen::Index>(data.size()) != g.nx * g.ny)
    throw std::runtime_error("field snapshot holds " + std::to_string(data.size()) +
                             " values, header promises " + std::to_string(g.nx * g.ny));
  return {g, Eigen::Map<Array2>(data.data(), g.nx, g.ny)};
}

}  // namespace fracsav
