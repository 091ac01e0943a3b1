#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "internal.hpp"

namespace qcurv::cli {

namespace {

std::string format_number(double value) {
  if (!std::isfinite(value)) return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return buffer;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted.push_back('"');
    quoted.push_back(c);
  }
  return quoted + "\"";
}

// nlohmann's float printer is not always shortest, so numbers are written here.
void dump(const Json& node, int depth, std::ostream& out) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close(static_cast<std::size_t>(2 * depth), ' ');
  if (node.is_object()) {
    if (node.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (const auto& [key, child] : node.items()) {
      out << (first ? "" : ",\n") << pad << Json(key).dump() << ": ";
      dump(child, depth + 1, out);
      first = false;
    }
    out << "\n" << close << "}";
  } else if (node.is_array()) {
    if (node.empty()) {
      out << "[]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < node.size(); ++i) {
      out << (i ? ",\n" : "") << pad;
      dump(node[i], depth + 1, out);
    }
    out << "\n" << close << "]";
  } else if (node.is_number_float()) {
    const double value = node.get<double>();
    std::string text = format_number(value);
    if (text.find_first_of(".en") == std::string::npos) text += ".0";
    out << text;
  } else {
    out << node.dump();
  }
}

void flatten(const std::string& prefix, const Json& node, std::ostream& out) {
  if (node.is_object()) {
    for (const auto& [key, child] : node.items()) {
      flatten(prefix.empty() ? key : prefix + "." + key, child, out);
    }
  } else if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) flatten(prefix + "." + std::to_string(i), node[i], out);
  } else if (node.is_string()) {
    out << prefix << "," << csv_field(node.get<std::string>()) << "\n";
  } else if (node.is_number_float()) {
    out << prefix << "," << format_number(node.get<double>()) << "\n";
  } else {
    out << prefix << "," << node.dump() << "\n";
  }
}

}  // namespace

Json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.12g", value);
  return std::stod(buffer);
}

Json pairs(const std::vector<std::pair<double, double>>& rows, const char* x, const char* y) {
  Json out = Json::array();
  for (const auto& [a, b] : rows) out.push_back(Json{{x, number(a)}, {y, number(b)}});
  return out;
}

void set_table(Report& report, std::vector<std::string> columns,
               const std::vector<std::pair<double, double>>& rows) {
  report.columns = std::move(columns);
  report.rows.clear();
  for (const auto& [a, b] : rows) report.rows.push_back({a, b});
}

void write_report(const std::string& command, const Report& report, const std::string& format,
                  std::ostream& out) {
  if (format == "csv") {
    if (!report.columns.empty()) {
      for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
      out << "\n";
      for (const auto& row : report.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << "\n";
      }
    } else {
      out << "key,value\n";
      flatten("", report.body, out);
    }
    return;
  }
  Json document = Json::object();
  document["schema"] = 1;
  document["command"] = command;
  for (const auto& [key, value] : report.body.items()) document[key] = value;
  dump(document, 0, out);
  out << "\n";
}

}  // namespace qcurv::cli
