#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qcurv/cli.hpp"
#include "qcurv/errors.hpp"

namespace qcurv::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Drops a trailing # comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

double parse_number(const std::string& key, const std::string& text) {
  std::string cleaned;
  for (char c : text) {
    if (c != '_') cleaned.push_back(c);
  }
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cleaned, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cleaned.size()) throw DomainError("config: '" + key + "' expects a number");
  return value;
}

std::string parse_string(const std::string& key, const std::string& text) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"') {
    throw DomainError("config: '" + key + "' expects a quoted string");
  }
  return text.substr(1, text.size() - 2);
}

int parse_int(const std::string& key, const std::string& text) {
  const double value = parse_number(key, text);
  if (value != static_cast<double>(static_cast<int>(value))) {
    throw DomainError("config: '" + key + "' expects an integer");
  }
  return static_cast<int>(value);
}

std::vector<double> parse_array(const std::string& key, const std::string& text) {
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw DomainError("config: '" + key + "' expects an array of numbers");
  }
  std::vector<double> values;
  std::stringstream items(text.substr(1, text.size() - 2));
  std::string item;
  while (std::getline(items, item, ',')) {
    item = trim(item);
    if (!item.empty()) values.push_back(parse_number(key, item));
  }
  return values;
}

}  // namespace

void load_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw DomainError("config: cannot open " + path);
  std::string line;
  std::string table;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw DomainError("config: malformed table header on line " + std::to_string(line_number));
      table = trim(line.substr(1, line.size() - 2));
      if (table != "quadrature" && table != "grid" && table != "run") {
        throw DomainError("config: unknown table [" + table + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DomainError("config: expected key = value on line " + std::to_string(line_number));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") {
      cfg.n = parse_int(key, value);
    } else if (key == "profile") {
      cfg.profile = parse_string(key, value);
    } else if (key == "rel_tol") {
      cfg.quadrature.rel_tol = parse_number(key, value);
    } else if (key == "abs_tol") {
      cfg.quadrature.abs_tol = parse_number(key, value);
    } else if (key == "max_subdivisions") {
      cfg.quadrature.max_subdivisions = parse_int(key, value);
    } else if (key == "tail_cut") {
      cfg.quadrature.tail_cut = parse_number(key, value);
    } else if (key == "sphere_nodes") {
      cfg.quadrature.sphere_nodes = parse_int(key, value);
    } else if (key == "r") {
      cfg.r = parse_number(key, value);
    } else if (key == "rmin") {
      cfg.r_min = parse_number(key, value);
    } else if (key == "rmax") {
      cfg.r_max = parse_number(key, value);
    } else if (key == "points") {
      cfg.points = parse_int(key, value);
    } else if (key == "grid") {
      cfg.grid = parse_array(key, value);
    } else if (key == "eps") {
      cfg.eps = parse_number(key, value);
    } else if (key == "format") {
      cfg.format = parse_string(key, value);
    } else if (key == "suite") {
      cfg.suite = parse_string(key, value);
    } else {
      throw DomainError("config: unknown key '" + key + "'");
    }
  }
}

}  // namespace qcurv::cli
