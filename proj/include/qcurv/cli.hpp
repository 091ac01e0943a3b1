#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qcurv/quadrature.hpp"

namespace qcurv::cli {

struct RunConfig {
  int n = 4;
  std::string profile = "sphere:0.5";
  QuadratureSpec quadrature;
  double r = 1.0;
  double r_min = 0.0;  // 0 selects the subcommand default
  double r_max = 0.0;
  int points = 0;
  std::vector<double> grid;  // explicit radii override r_min/r_max/points
  double eps = 0.1;
  std::string format = "json";
  std::string suite = "all";
};

// Applies a TOML file onto cfg. Recognized keys (optionally under [quadrature]
// or [grid] tables): n, profile, rel_tol, abs_tol, max_subdivisions, tail_cut,
// sphere_nodes, r, rmin, rmax, points, grid, eps, format, suite.
void load_config_file(const std::string& path, RunConfig& cfg);

// Runs one command line. Exit status: 0 success, 1 computation error,
// 2 usage error; `verify` returns 1 when any check fails.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qcurv::cli
