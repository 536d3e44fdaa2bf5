#pragma once

#include <map>
#include <string>
#include <vector>

#include "phj/fspec.hpp"
#include "phj/grid.hpp"
#include "phj/harness.hpp"
#include "phj/metric.hpp"
#include "phj/scheme.hpp"
#include "phj/signal.hpp"

namespace phj {

// Minimal INI reader: [section] headers, key = value lines, # or ;
// comments. Unknown keys are kept (callers decide what they need); missing
// keys raise ConfigError mentioning file and line where possible.
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text,
                             const std::string& origin = "<inline>");

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_str(const std::string& section, const std::string& key) const;
  std::string get_str(const std::string& section, const std::string& key,
                      const std::string& fallback) const;
  double get_num(const std::string& section, const std::string& key) const;
  double get_num(const std::string& section, const std::string& key,
                 double fallback) const;
  long get_int(const std::string& section, const std::string& key) const;
  long get_int(const std::string& section, const std::string& key, long fallback) const;
  // Comma- or space-separated list of numbers.
  std::vector<double> get_list(const std::string& section,
                               const std::string& key) const;
  std::vector<double> get_list(const std::string& section, const std::string& key,
                               const std::vector<double>& fallback) const;

  const std::string& origin() const { return origin_; }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };
  std::string origin_;
  std::map<std::string, std::map<std::string, Entry>> sections_;

  const Entry& lookup(const std::string& section, const std::string& key) const;
};

// Builders for the experiment objects. Section names follow the config
// layout: [metric], [grid], [signal.a], [signal.b], [data.u0], [data.v0],
// [F], [run].
MetricField build_metric(const Config& c);
Grid build_grid(const Config& c);
PathSignal build_signal(const Config& c, const std::string& section, double horizon);
DataGenerator build_data(const Config& c, const std::string& section,
                         const MetricField& m);
FSpec build_fspec(const Config& c, int dim);
SchemeOptions build_scheme(const Config& c);

}  // namespace phj
