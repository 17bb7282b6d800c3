#include "crime/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "crime/io.hpp"

namespace crime {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct Entry {
  std::string value;
  int line = 0;
  bool used = false;
};

struct KeyTable {
  std::string name;  // config name for messages
  std::map<std::string, Entry> entries;

  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    auto it = entries.find(key);
    const std::string loc =
        it == entries.end() ? name : name + ":" + std::to_string(it->second.line);
    throw ConfigError(loc + ": key '" + key + "': " + msg);
  }

  bool has(const std::string& key) {
    auto it = entries.find(key);
    if (it == entries.end()) return false;
    it->second.used = true;
    return true;
  }

  std::string raw(const std::string& key) { return entries.at(key).value; }

  double real(const std::string& key, double dflt) {
    if (!has(key)) return dflt;
    const std::string v = raw(key);
    double x = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
      fail(key, "expected a real number, got '" + v + "'");
    return x;
  }

  long long integer(const std::string& key, long long dflt) {
    if (!has(key)) return dflt;
    const std::string v = raw(key);
    long long x = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
      fail(key, "expected an integer, got '" + v + "'");
    return x;
  }

  unsigned long long uinteger(const std::string& key, unsigned long long dflt) {
    if (!has(key)) return dflt;
    const std::string v = raw(key);
    unsigned long long x = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
      fail(key, "expected a nonnegative integer, got '" + v + "'");
    return x;
  }

  bool boolean(const std::string& key, bool dflt) {
    if (!has(key)) return dflt;
    const std::string v = raw(key);
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(key, "expected true/false, got '" + v + "'");
  }

  std::string text(const std::string& key, const std::string& dflt) {
    if (!has(key)) return dflt;
    return raw(key);
  }

  std::vector<double> real_list(const std::string& key, std::vector<double> dflt) {
    if (!has(key)) return dflt;
    std::vector<double> out;
    std::istringstream in(raw(key));
    std::string tok;
    while (std::getline(in, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) fail(key, "empty element in list");
      double x = 0.0;
      auto res = std::from_chars(tok.data(), tok.data() + tok.size(), x);
      if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        fail(key, "expected a comma list of reals, got '" + tok + "'");
      out.push_back(x);
    }
    if (out.empty()) fail(key, "empty list");
    return out;
  }
};

KeyTable tokenize(const std::string& text, const std::string& name) {
  KeyTable table;
  table.name = name;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": expected 'key = value', got '" +
                        line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    if (value.empty())
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty value for key '" + key +
                        "'");
    auto [it, fresh] = table.entries.insert({key, Entry{value, lineno, false}});
    if (!fresh)
      throw ConfigError(name + ":" + std::to_string(lineno) + ": duplicate key '" + key +
                        "' (first at line " + std::to_string(it->second.line) + ")");
  }
  return table;
}

IcKind parse_ic_kind(KeyTable& t) {
  const std::string v = t.text("ic", "gaussian_bump");
  if (v == "constant") return IcKind::constant;
  if (v == "fixed_point") return IcKind::fixed_point;
  if (v == "gaussian_bump") return IcKind::gaussian_bump;
  if (v == "perturbed_homogeneous") return IcKind::perturbed_homogeneous;
  if (v == "seeded_random") return IcKind::seeded_random;
  t.fail("ic",
         "unknown kind '" + v +
             "' (expected constant | fixed_point | gaussian_bump | perturbed_homogeneous | "
             "seeded_random)");
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  KeyTable t = tokenize(text, name);
  RunConfig cfg;

  const int nx = static_cast<int>(t.integer("nx", 64));
  const int ny = static_cast<int>(t.integer("ny", 64));
  const double lx = t.real("lx", 1.0);
  const double ly = t.real("ly", 1.0);
  try {
    cfg.grid = Grid::uniform(nx, ny, lx, ly);
  } catch (const DomainError& e) {
    throw ConfigError(name + ": grid: " + e.what());
  }

  cfg.params.rho = t.real("rho", 2.0);
  cfg.params.mu = t.real("mu", 1.0);
  cfg.params.chi = t.real("chi", 2.0);
  cfg.params.gamma = t.real("gamma", 0.0);
  cfg.params.eps = t.real("eps", 0.0);
  try {
    cfg.params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(name + ": " + e.what());
  }

  cfg.ctrl.dt_init = t.real("dt_init", 1e-3);
  cfg.ctrl.dt_min = t.real("dt_min", 1e-10);
  cfg.ctrl.cfl_safety = t.real("cfl_safety", 0.9);
  cfg.ctrl.v_guard = t.real("v_guard", 0.0);
  cfg.ctrl.t_end = t.real("t_end", 1.0);
  cfg.ctrl.output_every = t.real("output_every", 0.1);
  try {
    cfg.ctrl.validate();
  } catch (const DomainError& e) {
    throw ConfigError(name + ": " + e.what());
  }

  cfg.thresholds.u_sup_max = t.real("u_sup_max", 1e6);
  cfg.thresholds.v_w1inf_max = t.real("v_w1inf_max", 1e6);
  cfg.thresholds.v_min = t.real("v_min_threshold", 0.0);
  if (!(cfg.thresholds.u_sup_max > 0.0))
    throw ConfigError(name + ": u_sup_max must be > 0");
  if (!(cfg.thresholds.v_w1inf_max > 0.0))
    throw ConfigError(name + ": v_w1inf_max must be > 0");
  if (!(cfg.thresholds.v_min >= 0.0))
    throw ConfigError(name + ": v_min_threshold must be >= 0");

  cfg.ic.kind = parse_ic_kind(t);
  cfg.ic.u0 = t.real("ic_u0", cfg.ic.u0);
  cfg.ic.v0 = t.real("ic_v0", cfg.ic.v0);
  cfg.ic.u_floor = t.real("ic_u_floor", cfg.ic.u_floor);
  cfg.ic.u_amp = t.real("ic_u_amp", cfg.ic.u_amp);
  cfg.ic.u_cx = t.real("ic_u_cx", cfg.ic.u_cx);
  cfg.ic.u_cy = t.real("ic_u_cy", cfg.ic.u_cy);
  cfg.ic.u_width = t.real("ic_u_width", cfg.ic.u_width);
  cfg.ic.v_floor = t.real("ic_v_floor", cfg.ic.v_floor);
  cfg.ic.v_amp = t.real("ic_v_amp", cfg.ic.v_amp);
  cfg.ic.v_cx = t.real("ic_v_cx", cfg.ic.v_cx);
  cfg.ic.v_cy = t.real("ic_v_cy", cfg.ic.v_cy);
  cfg.ic.v_width = t.real("ic_v_width", cfg.ic.v_width);
  cfg.ic.perturb = t.real("ic_perturb", cfg.ic.perturb);
  cfg.ic.seed = t.uinteger("ic_seed", cfg.ic.seed);

  cfg.diag.p_set = t.real_list("p_set", cfg.diag.p_set);
  cfg.diag.q = t.real("q", 0.0);
  try {
    cfg.diag.validate();
  } catch (const DomainError& e) {
    throw ConfigError(name + ": " + e.what());
  }

  cfg.output_dir = t.text("output_dir", cfg.output_dir);
  cfg.write_snapshots = t.boolean("snapshots", cfg.write_snapshots);

  for (const auto& [key, entry] : t.entries)
    if (!entry.used)
      throw ConfigError(name + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::vector<std::string> config_key_help() {
  return {
      "nx\t64\tgrid cells in x",
      "ny\t64\tgrid cells in y",
      "lx\t1.0\tdomain length in x",
      "ly\t1.0\tdomain length in y",
      "rho\t2.0\tlinear growth rate (any sign)",
      "mu\t1.0\tlogistic damping (> 0)",
      "chi\t2.0\ttaxis strength (> 0)",
      "gamma\t0.0\tlogistic exponent offset (>= 0)",
      "eps\t0.0\tcutoff level in [0, 1]; 0 disables the cutoff",
      "dt_init\t1e-3\tnominal (max) step size",
      "dt_min\t1e-10\tstep-failure threshold",
      "cfl_safety\t0.9\tfraction of the positivity limit to use, in (0, 1]",
      "v_guard\t0\tdegeneracy floor for v; 0 = auto (1e-12 * min v0)",
      "t_end\t1.0\tfinal time",
      "output_every\t0.1\trecord spacing",
      "u_sup_max\t1e6\tblow-up threshold for max u",
      "v_w1inf_max\t1e6\tblow-up threshold for max |v| + |grad v|",
      "v_min_threshold\t0\tdegeneracy detection threshold for min v; 0 disables",
      "ic\tgaussian_bump\tconstant | fixed_point | gaussian_bump | perturbed_homogeneous | seeded_random",
      "ic_u0\t0.25\tconstant: u value (>= 0)",
      "ic_v0\t1.0\tconstant: v value (> 0)",
      "ic_u_floor\t0.05\tbump/random: additive floor for u",
      "ic_u_amp\t1.0\tbump/random: amplitude for u",
      "ic_u_cx\t0.5\tbump: u center x (domain coordinate)",
      "ic_u_cy\t0.5\tbump: u center y (domain coordinate)",
      "ic_u_width\t0.15\tbump: u width (domain length)",
      "ic_v_floor\t0.5\tbump/random: additive floor for v (> 0)",
      "ic_v_amp\t0.5\tbump/random: amplitude for v",
      "ic_v_cx\t0.5\tbump: v center x (domain coordinate)",
      "ic_v_cy\t0.5\tbump: v center y (domain coordinate)",
      "ic_v_width\t0.2\tbump: v width (domain length)",
      "ic_perturb\t0.1\tperturbed_homogeneous: relative amplitude, in (-1, 1)",
      "ic_seed\t1\tseeded_random: 64-bit seed",
      "p_set\t2,3,5\tdiagnostic exponents for ||v||_p and grad(v^{p/2})",
      "q\t0\texponent for ||grad v||_q; 0 = auto (2 + gamma/2)",
      "output_dir\tout\twhere run/sweep/compare artifacts are written",
      "snapshots\tfalse\twrite u/v field snapshots at every record time",
  };
}

}  // namespace crime
