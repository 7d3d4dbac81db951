#include "wpvol/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace wpvol {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string format_index(std::span<const int> d) {
  std::string out;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i) out.push_back(';');
    out += std::to_string(d[i]);
  }
  return out;
}

std::string format_reals(std::span<const double> x) {
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out.push_back(';');
    out += format_double(x[i]);
  }
  return out;
}

namespace {

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void csv_line(std::ostringstream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << csv_cell(cells[i]);
  }
  os << '\n';
}

}  // namespace

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error("Table::add_row: " + std::to_string(row.size()) + " cells for " +
                           std::to_string(columns.size()) + " columns");
  }
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::ostringstream os;
  csv_line(os, columns);
  for (const auto& r : rows) csv_line(os, r);
  return os.str();
}

nlohmann::json Table::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o = nlohmann::json::object();
    for (std::size_t i = 0; i < columns.size(); ++i) o[columns[i]] = r[i];
    arr.push_back(std::move(o));
  }
  return arr;
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  os << "# report: " << name << '\n';
  os << "# passed: " << (passed ? "true" : "false") << '\n';
  for (const auto& [k, v] : summary) os << "# " << k << ": " << v << '\n';
  os << table.to_csv();
  return os.str();
}

nlohmann::json SweepReport::to_json() const {
  nlohmann::json s = nlohmann::json::object();
  for (const auto& [k, v] : summary) s[k] = v;
  return {{"report", name}, {"passed", passed}, {"summary", std::move(s)}, {"rows", table.to_json()}};
}

}  // namespace wpvol
