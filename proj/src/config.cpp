#include "phj/config.hpp"

#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "phj/errors.hpp"

namespace phj {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, const std::string& where) {
  try {
    size_t used = 0;
    double v = std::stod(text, &used);
    if (trim(text.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(where + ": not a number: '" + text + "'");
}

}  // namespace

Config Config::parse_string(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      c.sections_[section];
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string raw = t.substr(eq + 1);
    // A ';' or '#' at the start of the value or after whitespace opens a
    // trailing comment.
    for (size_t k = 0; k < raw.size(); ++k) {
      if ((raw[k] == ';' || raw[k] == '#') &&
          (k == 0 || std::isspace(static_cast<unsigned char>(raw[k - 1])))) {
        raw.erase(k);
        break;
      }
    }
    std::string value = trim(raw);
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any [section]");
    c.sections_[section][key] = Entry{value, lineno};
  }
  return c;
}

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

bool Config::has_section(const std::string& section) const {
  return sections_.count(section) > 0;
}

const Config::Entry& Config::lookup(const std::string& section,
                                    const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end())
    throw ConfigError(origin_ + ": missing section [" + section + "]");
  auto k = s->second.find(key);
  if (k == s->second.end())
    throw ConfigError(origin_ + ": missing key '" + key + "' in [" + section + "]");
  return k->second;
}

std::string Config::get_str(const std::string& section, const std::string& key) const {
  return lookup(section, key).value;
}

std::string Config::get_str(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
  return has(section, key) ? lookup(section, key).value : fallback;
}

double Config::get_num(const std::string& section, const std::string& key) const {
  const Entry& e = lookup(section, key);
  return parse_number(e.value, origin_ + ":" + std::to_string(e.line));
}

double Config::get_num(const std::string& section, const std::string& key,
                       double fallback) const {
  return has(section, key) ? get_num(section, key) : fallback;
}

long Config::get_int(const std::string& section, const std::string& key) const {
  double v = get_num(section, key);
  long n = static_cast<long>(v);
  if (static_cast<double>(n) != v) {
    const Entry& e = lookup(section, key);
    throw ConfigError(origin_ + ":" + std::to_string(e.line) + ": expected an integer, got '" +
                      e.value + "'");
  }
  return n;
}

long Config::get_int(const std::string& section, const std::string& key,
                     long fallback) const {
  return has(section, key) ? get_int(section, key) : fallback;
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
  const Entry& e = lookup(section, key);
  std::string where = origin_ + ":" + std::to_string(e.line);
  std::vector<double> out;
  std::string item;
  std::istringstream in(e.value);
  while (std::getline(in, item, ',')) {
    std::istringstream parts(item);
    std::string tok;
    while (parts >> tok) out.push_back(parse_number(tok, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty list for '" + key + "'");
  return out;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key,
                                     const std::vector<double>& fallback) const {
  return has(section, key) ? get_list(section, key) : fallback;
}

namespace {

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}

// Scalar field from a key prefix: <p>_lin (list) and up to two sine terms
// <p>_amp / <p>_wave (list) / <p>_phase plus the 2-suffixed set.
ScalarField build_scalar_field(const Config& c, const std::string& section,
                               const std::string& prefix, int dim) {
  ScalarField f = ScalarField::zero(dim);
  if (c.has(section, prefix + "_lin")) {
    std::vector<double> lin = c.get_list(section, prefix + "_lin");
    if (static_cast<int>(lin.size()) != dim)
      throw ConfigError(c.origin() + ": " + prefix + "_lin needs " + std::to_string(dim) +
                        " entries");
    f.add_linear(to_vec(lin));
  }
  for (const std::string& suffix : {std::string(""), std::string("2")}) {
    if (!c.has(section, prefix + "_amp" + suffix)) continue;
    double amp = c.get_num(section, prefix + "_amp" + suffix);
    std::vector<double> wave = c.get_list(section, prefix + "_wave" + suffix);
    if (static_cast<int>(wave.size()) != dim)
      throw ConfigError(c.origin() + ": " + prefix + "_wave" + suffix + " needs " +
                        std::to_string(dim) + " entries");
    f.add_sine(amp, to_vec(wave), c.get_num(section, prefix + "_phase" + suffix, 0.0));
  }
  return f;
}

}  // namespace

MetricField build_metric(const Config& c) {
  int dim = static_cast<int>(c.get_int("metric", "dim", c.get_int("grid", "dim", 1)));
  std::string family = c.get_str("metric", "family", "identity");
  if (family == "identity") return MetricField::identity(dim);
  if (family == "constant") {
    std::vector<double> a = c.get_list("metric", "a");
    Mat g(dim, dim);
    if (dim == 1 && a.size() == 1) {
      g(0, 0) = a[0];
    } else if (dim == 2 && a.size() == 3) {
      g(0, 0) = a[0];
      g(0, 1) = g(1, 0) = a[1];
      g(1, 1) = a[2];
    } else {
      throw ConfigError(c.origin() + ": [metric] a needs 1 entry (1-D) or a11,a12,a22 (2-D)");
    }
    return MetricField::constant(g);
  }
  if (family == "conformal")
    return MetricField::conformal(build_scalar_field(c, "metric", "phi", dim));
  if (family == "diagonal") {
    std::vector<ScalarField> phis;
    for (int i = 1; i <= dim; ++i)
      phis.push_back(build_scalar_field(c, "metric", "phi" + std::to_string(i), dim));
    return MetricField::diagonal(phis);
  }
  throw ConfigError(c.origin() + ": unknown metric family '" + family + "'");
}

Grid build_grid(const Config& c) {
  int dim = static_cast<int>(c.get_int("grid", "dim", 1));
  int nodes = static_cast<int>(c.get_int("grid", "nodes"));
  double box = c.get_num("grid", "box");
  std::vector<double> origin =
      c.get_list("grid", "origin", std::vector<double>(dim, -box / 2));
  if (static_cast<int>(origin.size()) != dim)
    throw ConfigError(c.origin() + ": [grid] origin needs " + std::to_string(dim) + " entries");
  return Grid(dim, nodes, box, to_vec(origin));
}

PathSignal build_signal(const Config& c, const std::string& section, double horizon) {
  std::string kind = c.get_str(section, "kind", "zero");
  if (kind == "zero") return PathSignal::zero(horizon);
  if (kind == "linear") return PathSignal::linear(c.get_num(section, "slope"), horizon);
  if (kind == "zigzag")
    return PathSignal::zigzag(c.get_num(section, "amplitude"),
                              static_cast<int>(c.get_int(section, "periods")), horizon);
  if (kind == "brownian")
    return sample_brownian(static_cast<int>(c.get_int(section, "level")), horizon,
                           static_cast<std::uint64_t>(c.get_int(section, "seed", 1)));
  throw ConfigError(c.origin() + ": unknown signal kind '" + kind + "' in [" + section + "]");
}

DataGenerator build_data(const Config& c, const std::string& section,
                         const MetricField& m) {
  std::string kind = c.get_str(section, "kind", "cone");
  std::string origin = c.origin();
  if (kind == "cone") {
    double offset = c.get_num(section, "offset", 0.0);
    std::vector<double> center = c.get_list(section, "center", {});
    bool euclidean = c.has(section, "slope");
    double s = euclidean ? c.get_num(section, "slope") : c.get_num(section, "lip", 1.0);
    return [=, metric = m](const Grid& g) {
      Vec ctr = center.empty() ? Vec(Vec::Zero(g.dim())) : to_vec(center);
      return euclidean ? make_cone_euclidean(g, metric, ctr, s, offset)
                       : make_cone(g, metric, ctr, s, offset);
    };
  }
  if (kind == "sine") {
    double amp = c.get_num(section, "amp");
    std::vector<double> wave = c.get_list(section, "wave");
    double offset = c.get_num(section, "offset", 0.0);
    return [=, metric = m](const Grid& g) {
      return make_sine(g, metric, to_vec(wave), amp, offset);
    };
  }
  if (kind == "bump") {
    std::vector<double> center = c.get_list(section, "center", {});
    double width = c.get_num(section, "width");
    double height = c.get_num(section, "height");
    return [=, metric = m](const Grid& g) {
      Vec ctr = center.empty() ? Vec(Vec::Zero(g.dim())) : to_vec(center);
      return make_bump(g, metric, ctr, width, height);
    };
  }
  if (kind == "constant") {
    double value = c.get_num(section, "value");
    return [=](const Grid& g) { return make_constant(g, value); };
  }
  throw ConfigError(origin + ": unknown data kind '" + kind + "' in [" + section + "]");
}

FSpec build_fspec(const Config& c, int dim) {
  std::string kind = c.has_section("F") ? c.get_str("F", "kind", "zero") : "zero";
  if (kind == "zero") return FSpec::zero();
  if (kind == "linear_diffusion") {
    std::vector<double> a = c.get_list("F", "a");
    Mat m(dim, dim);
    if (dim == 1 && a.size() == 1) {
      m(0, 0) = a[0];
    } else if (dim == 2 && a.size() == 3) {
      m(0, 0) = a[0];
      m(0, 1) = m(1, 0) = a[1];
      m(1, 1) = a[2];
    } else {
      throw ConfigError(c.origin() + ": [F] a needs 1 entry (1-D) or a11,a12,a22 (2-D)");
    }
    return FSpec::linear_diffusion(m, c.get_num("F", "nu", 1.0), c.get_num("F", "rho"));
  }
  if (kind == "isaacs") {
    int outer = static_cast<int>(c.get_int("F", "branches_outer"));
    int inner = static_cast<int>(c.get_int("F", "branches_inner"));
    // Branch rows are flat number lists: sigma0 sigma1 k_sigma(dim) b0 b1
    // k_b(dim) c0 c1 k_c(dim).
    size_t row_len = static_cast<size_t>(6 + 3 * dim);
    std::vector<std::vector<IsaacsTerm>> families;
    for (int i = 0; i < outer; ++i) {
      std::vector<IsaacsTerm> row;
      for (int j = 0; j < inner; ++j) {
        std::string key = "branch_" + std::to_string(i) + "_" + std::to_string(j);
        std::vector<double> v = c.get_list("F", key);
        if (v.size() != row_len)
          throw ConfigError(c.origin() + ": [F] " + key + " needs " +
                            std::to_string(row_len) + " numbers");
        IsaacsTerm t;
        size_t p = 0;
        auto take_vec = [&]() {
          Vec w(dim);
          for (int d = 0; d < dim; ++d) w[d] = v[p++];
          return w;
        };
        t.sigma0 = v[p++];
        t.sigma1 = v[p++];
        t.k_sigma = take_vec();
        t.b0 = v[p++];
        t.b1 = v[p++];
        t.k_b = take_vec();
        t.c0 = v[p++];
        t.c1 = v[p++];
        t.k_c = take_vec();
        row.push_back(t);
      }
      families.push_back(std::move(row));
    }
    Modulus fm = Modulus::capped(c.get_num("F", "f_lip", 0.0),
                                 c.get_num("F", "f_cap",
                                           std::numeric_limits<double>::infinity()));
    return FSpec::isaacs(std::move(families), fm);
  }
  throw ConfigError(c.origin() + ": unknown F kind '" + kind + "'");
}

SchemeOptions build_scheme(const Config& c) {
  SchemeOptions opt;
  opt.dt_max = c.get_num("run", "dt_max", opt.dt_max);
  opt.cfl_safety = c.get_num("run", "cfl_safety", opt.cfl_safety);
  opt.max_substeps = c.get_int("run", "max_substeps", opt.max_substeps);
  opt.snapshot_stride = static_cast<int>(c.get_int("run", "snapshot_stride", 0));
  return opt;
}

}  // namespace phj
