#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcurv/dimension.hpp"
#include "qcurv/quadrature.hpp"

namespace qcurv::cli {

using Json = nlohmann::ordered_json;

// Rounded to 12 significant digits; null when not finite.
Json number(double value);
Json pairs(const std::vector<std::pair<double, double>>& rows, const char* x, const char* y);

struct Report {
  Json body = Json::object();
  std::vector<std::string> columns;  // CSV table, optional
  std::vector<std::vector<double>> rows;
};

void set_table(Report& report, std::vector<std::string> columns,
               const std::vector<std::pair<double, double>>& rows);
void write_report(const std::string& command, const Report& report, const std::string& format,
                  std::ostream& out);

struct Check {
  std::string suite;
  std::string name;
  double value;
  double tolerance;
  bool passed;
};

// Suites: constants, quadrature, pizzetti, layer-cake, curvature, or all.
std::vector<Check> run_suite(const std::string& suite, const QuadratureSpec& spec);
std::vector<std::string> suite_names();

}  // namespace qcurv::cli
