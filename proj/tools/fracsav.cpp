#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "fracsav/config.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  for (const auto& a : args) {
    if (a == "--help" || a == "-h") {
      std::cout << "usage: fracsav <converge|circle|coarsen|single-run> [--config FILE] [--key value ...]\n"
                   "keys: problem alpha eps2 theta c0 scheme bc grid mesh r M dt T mu seed\n"
                   "      error-mode out jobs levels\n";
      return 0;
    }
    if (a == "--version") {
      std::cout << "fracsav " << fracsav::version() << '\n';
      return 0;
    }
  }
  try {
    const fracsav::RunConfig cfg = fracsav::parse_config(args);
    std::cout << fracsav::execute(cfg) << '\n';
    return 0;
  } catch (const fracsav::ConfigError& e) {
    std::cerr << "fracsav: invalid configuration: " << e.what() << '\n';
    return 2;
  } catch (const fracsav::SolverError& e) {
    std::cerr << "fracsav: solver stopped at " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "fracsav: " << e.what() << '\n';
    return 1;
  }
}
