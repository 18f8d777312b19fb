#pragma once

#include <map>
#include <string>
#include <vector>

#include "rmt/dyson.hpp"
#include "rmt/measures.hpp"

namespace rmt {

inline constexpr const char* kVersion = "rmt-lab 0.1.0";

// Key/value run configuration echoed verbatim into every output file.
using ConfigEcho = std::map<std::string, std::string>;

std::string format_double(double v);  // %.17g, stable across runs

// CSV with `# key=value` header lines (config + version), then the column
// header and rows.
void write_csv(const std::string& path, const ConfigEcho& config,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// GridMeasure CSV: node_left,node_right,mass.
void write_grid_csv(const std::string& path, const ConfigEcho& config, const GridMeasure& mu);

// Minimal JSON writer: config object + version + numeric/str payload fields.
class JsonWriter {
 public:
  void set(const std::string& key, double value);
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const std::vector<double>& values);
  void set_grid(const std::string& key, const GridMeasure& mu);
  std::string str(const ConfigEcho& config) const;
  void write(const std::string& path, const ConfigEcho& config) const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

void write_trajectory_csv(const std::string& path, const ConfigEcho& config,
                          const TrajectoryRecord& record);

}  // namespace rmt
