#include "rmt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace rmt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void write_header(std::ostream& os, const ConfigEcho& config) {
  os << "# version=" << kVersion << "\n";
  for (const auto& [k, v] : config) os << "# " << k << "=" << v << "\n";
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

void write_csv(const std::string& path, const ConfigEcho& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  if (!os) throw invalid_argument("write_csv: cannot open " + path);
  write_header(os, config);
  for (std::size_t i = 0; i < columns.size(); ++i)
    os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_grid_csv(const std::string& path, const ConfigEcho& config, const GridMeasure& mu) {
  std::vector<std::vector<double>> rows;
  rows.reserve(mu.cells());
  for (int i = 0; i < mu.cells(); ++i)
    rows.push_back({mu.nodes[i], mu.nodes[i + 1], mu.masses[i]});
  write_csv(path, config, {"node_left", "node_right", "mass"}, rows);
}

void JsonWriter::set(const std::string& key, double value) {
  fields_.emplace_back(key, format_double(value));
}

void JsonWriter::set(const std::string& key, const std::string& value) {
  fields_.emplace_back(key, "\"" + json_escape(value) + "\"");
}

void JsonWriter::set(const std::string& key, const std::vector<double>& values) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < values.size(); ++i)
    os << format_double(values[i]) << (i + 1 < values.size() ? "," : "");
  os << "]";
  fields_.emplace_back(key, os.str());
}

void JsonWriter::set_grid(const std::string& key, const GridMeasure& mu) {
  std::ostringstream os;
  os << "{\"nodes\":[";
  for (std::size_t i = 0; i < mu.nodes.size(); ++i)
    os << format_double(mu.nodes[i]) << (i + 1 < mu.nodes.size() ? "," : "");
  os << "],\"masses\":[";
  for (std::size_t i = 0; i < mu.masses.size(); ++i)
    os << format_double(mu.masses[i]) << (i + 1 < mu.masses.size() ? "," : "");
  os << "]}";
  fields_.emplace_back(key, os.str());
}

std::string JsonWriter::str(const ConfigEcho& config) const {
  std::ostringstream os;
  os << "{\"version\":\"" << kVersion << "\",\"config\":{";
  std::size_t i = 0;
  for (const auto& [k, v] : config) {
    os << "\"" << json_escape(k) << "\":\"" << json_escape(v) << "\"";
    if (++i < config.size()) os << ",";
  }
  os << "}";
  for (const auto& [k, v] : fields_) os << ",\"" << json_escape(k) << "\":" << v;
  os << "}\n";
  return os.str();
}

void JsonWriter::write(const std::string& path, const ConfigEcho& config) const {
  std::ofstream os(path);
  if (!os) throw invalid_argument("JsonWriter: cannot open " + path);
  os << str(config);
}

void write_trajectory_csv(const std::string& path, const ConfigEcho& config,
                          const TrajectoryRecord& record) {
  std::vector<std::vector<double>> rows;
  for (const auto& st : record.states)
    for (int i = 0; i < st.n(); ++i)
      rows.push_back({st.t, static_cast<double>(i), st.positions[i]});
  write_csv(path, config, {"t", "i", "position"}, rows);
}

}  // namespace rmt
