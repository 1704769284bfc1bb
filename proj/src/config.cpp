#include "cfwd/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cfwd/wasserstein.hpp"
#include "cfwd/xi_measure.hpp"

namespace cfwd {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Simulate: return "simulate";
    case Mode::Verify: return "verify";
    case Mode::SampleXi: return "sample-xi";
  }
  return "?";
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::Ibp: return "ibp";
    case Suite::Martingale: return "martingale";
    case Suite::Varadhan: return "varadhan";
    case Suite::Bernstein: return "bernstein";
    case Suite::XiBounds: return "xi-bounds";
  }
  return "?";
}

std::optional<Suite> parse_suite(const std::string& s) {
  static const std::map<std::string, Suite> table{{"ibp", Suite::Ibp},
                                                  {"martingale", Suite::Martingale},
                                                  {"varadhan", Suite::Varadhan},
                                                  {"bernstein", Suite::Bernstein},
                                                  {"xi-bounds", Suite::XiBounds}};
  const auto it = table.find(s);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

XiChoice make_xi(const std::string& label, std::size_t resolution) {
  XiChoice c;
  c.label = label;
  if (label == "identity") {
    c.xi = xi_identity(resolution);
  } else if (label == "constant") {
    c.xi = PiecewiseConstant::constant(0.0);
  } else if (label == "jump") {
    c.xi = PiecewiseConstant({0.5}, {0.0, 1.0});
  } else {
    throw ValidationError("unknown xi '" + label + "' (identity, constant, jump or a map)");
  }
  return c;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& msg) const {
    std::ostringstream os;
    os << origin_;
    if (!mark.is_null()) os << ":" << mark.line + 1 << ":" << mark.column + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }
  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const { fail(node.Mark(), msg); }

  void require_map(const YAML::Node& node, const std::string& where) const {
    if (!node.IsMap()) fail(node, where + ": expected a mapping");
  }

  void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) const {
    require_map(node, where);
    for (auto it = node.begin(); it != node.end(); ++it) {
      const auto key = it->first.as<std::string>();
      if (!allowed.contains(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(it->first, "unknown key '" + key + "' in " + where + " (allowed: " + list + ")");
      }
    }
  }

  template <class T>
  bool get(const YAML::Node& node, const std::string& key, T& out, const char* type) const {
    const YAML::Node v = node[key];
    if (!v.IsDefined() || v.IsNull()) return false;
    try {
      out = v.as<T>();
    } catch (const YAML::Exception&) {
      fail(v, "'" + key + "': expected " + type);
    }
    return true;
  }

  void positive(const YAML::Node& node, const std::string& key, double& out) const {
    if (get(node, key, out, "a number") && !(out > 0.0)) fail(node[key], "'" + key + "' must be positive");
  }

  template <class T>
  void count(const YAML::Node& node, const std::string& key, T& out) const {
    long long v = 0;
    if (!get(node, key, v, "an integer")) return;
    if (v <= 0) fail(node[key], "'" + key + "' must be a positive integer");
    out = static_cast<T>(v);
  }

  XiChoice xi(const YAML::Node& node, const std::string& key, std::size_t resolution) const {
    const YAML::Node v = node[key];
    if (!v.IsDefined() || v.IsNull()) return make_xi("identity", resolution);
    if (v.IsScalar()) {
      try {
        return make_xi(v.as<std::string>(), resolution);
      } catch (const ValidationError& e) {
        fail(v, e.what());
      }
    }
    check_keys(v, key, {"breakpoints", "values"});
    std::vector<double> bp, vals;
    get(v, "breakpoints", bp, "a list of numbers");
    if (!get(v, "values", vals, "a list of numbers")) fail(v, key + ": 'values' is required");
    XiChoice c;
    c.label = "custom";
    try {
      c.xi = PiecewiseConstant(bp, vals);
    } catch (const ValidationError& e) {
      fail(v, e.what());
    }
    if (!c.xi.is_nondecreasing()) fail(v, key + ": xi must be non-decreasing");
    return c;
  }

  void functions(const YAML::Node& node, const std::string& key, std::vector<std::string>& out) const {
    if (!get(node, key, out, "a list of strings")) return;
    for (std::size_t i = 0; i < out.size(); ++i) {
      try {
        (void)ScalarFunction::parse(out[i]);
      } catch (const std::exception& e) {
        fail(node[key][i], e.what());
      }
    }
  }

 private:
  std::string origin_;
};

void read_simulate(const Reader& rd, const YAML::Node& s, ExperimentConfig& cfg) {
  rd.check_keys(s, "simulate", {"n", "masses", "xi", "xi_resolution", "varsigma", "dt", "T", "merge_tol",
                                "record_every", "initial", "observables", "plot"});
  auto& sec = cfg.simulate;
  auto& sim = sec.sim;
  std::size_t n = 0, resolution = 1024;
  rd.count(s, "n", n);
  rd.count(s, "xi_resolution", resolution);
  std::vector<double> masses;
  if (rd.get(s, "masses", masses, "a list of numbers")) {
    try {
      sim.masses = MassVector(masses);
    } catch (const ValidationError& e) {
      rd.fail(s["masses"], e.what());
    }
    if (n != 0 && n != masses.size()) rd.fail(s["masses"], "'masses' has a different length than 'n'");
  } else {
    sim.masses = MassVector::uniform(n == 0 ? 10 : n);
  }
  sec.xi = rd.xi(s, "xi", resolution);
  std::vector<double> varsigma;
  if (rd.get(s, "varsigma", varsigma, "a list of numbers")) {
    if (s["xi"].IsDefined()) rd.fail(s["varsigma"], "give either 'xi' or 'varsigma', not both");
    if (varsigma.size() != sim.masses.size()) rd.fail(s["varsigma"], "'varsigma' must have one entry per particle");
    for (std::size_t i = 1; i < varsigma.size(); ++i)
      if (!(varsigma[i] > varsigma[i - 1])) rd.fail(s["varsigma"], "'varsigma' must be strictly increasing");
    sim.varsigma = varsigma;
    sec.xi.label = "varsigma";
    sec.xi.xi = xi_on_mass_grid(varsigma, sim.masses);
  } else {
    sim.varsigma = varsigma_from_xi(sec.xi.xi, sim.masses);
  }
  rd.positive(s, "dt", sim.dt);
  rd.positive(s, "T", sim.T);
  rd.positive(s, "merge_tol", sim.merge_tol);
  rd.count(s, "record_every", sim.record_every);
  if (rd.get(s, "initial", sim.initial, "a list of numbers")) {
    if (sim.initial.size() != sim.masses.size()) rd.fail(s["initial"], "'initial' must have one entry per particle");
    for (std::size_t i = 1; i < sim.initial.size(); ++i)
      if (sim.initial[i] < sim.initial[i - 1]) rd.fail(s["initial"], "'initial' must be non-decreasing");
  }
  std::vector<std::string> obs{"linear:1", "quadratic:1:0", "sin:2:0"};
  rd.functions(s, "observables", obs);
  sim.observables.clear();
  for (const auto& o : obs) sim.observables.push_back(ScalarFunction::parse(o));
  rd.get(s, "plot", sec.plot, "true or false");
}

void read_ibp(const Reader& rd, const YAML::Node& s, ExperimentConfig& cfg) {
  rd.check_keys(s, "ibp", {"strata", "samples", "radius", "xi", "xi_resolution"});
  auto& sec = cfg.ibp;
  std::size_t resolution = 1024;
  rd.count(s, "xi_resolution", resolution);
  if (rd.get(s, "strata", sec.strata, "a list of integers"))
    for (int n : sec.strata)
      if (n < 1 || n > kMaxStratum) rd.fail(s["strata"], "strata must lie in 1.." + std::to_string(kMaxStratum));
  rd.count(s, "samples", sec.samples);
  if (sec.samples < 1000) rd.fail(s["samples"], "'samples' must be at least 1000");
  rd.positive(s, "radius", sec.radius);
  sec.xi = rd.xi(s, "xi", resolution);
}

void read_martingale(const Reader& rd, const YAML::Node& s, ExperimentConfig& cfg) {
  rd.check_keys(s, "martingale", {"trajectories", "n", "xi", "xi_resolution", "dt", "T", "merge_tol", "initial",
                                  "functions", "qv_tolerance", "dt_halving"});
  auto& sec = cfg.martingale;
  std::size_t resolution = 1024;
  rd.count(s, "xi_resolution", resolution);
  rd.count(s, "trajectories", sec.trajectories);
  if (sec.trajectories < 2) rd.fail(s["trajectories"], "'trajectories' must be at least 2");
  rd.count(s, "n", sec.n);
  sec.xi = rd.xi(s, "xi", resolution);
  rd.positive(s, "dt", sec.dt);
  rd.positive(s, "T", sec.T);
  rd.positive(s, "merge_tol", sec.merge_tol);
  if (rd.get(s, "initial", sec.initial, "a string") && sec.initial != "zero" && sec.initial != "spread")
    rd.fail(s["initial"], "'initial' must be 'zero' or 'spread'");
  rd.functions(s, "functions", sec.functions);
  rd.positive(s, "qv_tolerance", sec.qv_tolerance);
  rd.get(s, "dt_halving", sec.dt_halving, "true or false");
}

void read_varadhan(const Reader& rd, const YAML::Node& s, ExperimentConfig& cfg) {
  rd.check_keys(s, "varadhan", {"scenario", "times", "paths", "steps_per_path", "epsilon", "radius", "rel_tol"});
  auto& sec = cfg.varadhan;
  if (rd.get(s, "scenario", sec.scenario, "a string") && sec.scenario != "n1" && sec.scenario != "n2")
    rd.fail(s["scenario"], "'scenario' must be 'n1' or 'n2'");
  if (rd.get(s, "times", sec.times, "a list of numbers"))
    for (double t : sec.times)
      if (!(t > 0.0)) rd.fail(s["times"], "times must be positive");
  rd.count(s, "paths", sec.paths);
  if (sec.paths < 2) rd.fail(s["paths"], "'paths' must be at least 2");
  rd.count(s, "steps_per_path", sec.steps_per_path);
  rd.positive(s, "epsilon", sec.epsilon);
  rd.positive(s, "radius", sec.radius);
  rd.positive(s, "rel_tol", sec.rel_tol);
}

void read_bernstein(const Reader& rd, const YAML::Node& s, ExperimentConfig& cfg) {
  rd.check_keys(s, "bernstein", {"M", "degrees", "grid"});
  auto& sec = cfg.bernstein;
  rd.positive(s, "M", sec.M);
  std::vector<long long> degrees;
  if (rd.get(s, "degrees", degrees, "a list of integers")) {
    sec.degrees.clear();
    for (long long d : degrees) {
      if (d < 1 || d > 512) rd.fail(s["degrees"], "degrees must lie in 1..512");
      sec.degrees.push_back(static_cast<std::size_t>(d));
    }
  }
  rd.count(s, "grid", sec.grid);
  if (sec.grid < 2) rd.fail(s["grid"], "'grid' must be at least 2");
}

void read_xi_bounds(const Reader& rd, const YAML::Node& s, ExperimentConfig& cfg) {
  rd.check_keys(s, "xi_bounds", {"strata", "radii", "samples", "xi", "xi_resolution"});
  auto& sec = cfg.xi_bounds;
  std::size_t resolution = 1024;
  rd.count(s, "xi_resolution", resolution);
  if (rd.get(s, "strata", sec.strata, "a list of integers"))
    for (int n : sec.strata)
      if (n < 1 || n > kMaxStratum) rd.fail(s["strata"], "strata must lie in 1.." + std::to_string(kMaxStratum));
  if (rd.get(s, "radii", sec.radii, "a list of numbers"))
    for (double r : sec.radii)
      if (!(r > 0.0)) rd.fail(s["radii"], "radii must be positive");
  rd.count(s, "samples", sec.samples);
  if (sec.samples < 1000) rd.fail(s["samples"], "'samples' must be at least 1000");
  sec.xi = rd.xi(s, "xi", resolution);
}

void read_sample_xi(const Reader& rd, const YAML::Node& s, ExperimentConfig& cfg) {
  rd.check_keys(s, "sample_xi", {"n", "radius", "xi", "xi_resolution", "samples"});
  auto& sec = cfg.sample_xi;
  std::size_t resolution = 1024;
  rd.count(s, "xi_resolution", resolution);
  rd.count(s, "n", sec.n);
  if (sec.n > kMaxStratum) rd.fail(s["n"], "'n' must be at most " + std::to_string(kMaxStratum));
  rd.positive(s, "radius", sec.radius);
  sec.xi = rd.xi(s, "xi", resolution);
  rd.count(s, "samples", sec.samples);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  const Reader rd(origin);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    rd.fail(e.mark, e.msg);
  }
  ExperimentConfig cfg;
  if (root.IsNull()) {
    cfg.simulate.sim.varsigma = varsigma_from_xi(cfg.simulate.xi.xi, cfg.simulate.sim.masses);
    return cfg;
  }
  rd.check_keys(root, "the top level", {"mode", "suite", "seed", "threads", "out", "threshold", "simulate", "ibp",
                                        "martingale", "varadhan", "bernstein", "xi_bounds", "sample_xi"});
  std::string mode;
  if (rd.get(root, "mode", mode, "a string")) {
    if (mode == "simulate") {
      cfg.mode = Mode::Simulate;
    } else if (mode == "verify") {
      cfg.mode = Mode::Verify;
    } else if (mode == "sample-xi") {
      cfg.mode = Mode::SampleXi;
    } else if (mode == "varadhan" || mode == "bernstein") {
      cfg.mode = Mode::Verify;
      cfg.suite = *parse_suite(mode);
    } else {
      rd.fail(root["mode"], "'mode' must be simulate, verify, sample-xi, varadhan or bernstein");
    }
  }
  std::string suite;
  if (rd.get(root, "suite", suite, "a string")) {
    const auto s = parse_suite(suite);
    if (!s) rd.fail(root["suite"], "'suite' must be ibp, martingale, varadhan, bernstein or xi-bounds");
    cfg.suite = *s;
  }
  unsigned long long seed = 1;
  if (rd.get(root, "seed", seed, "a 64-bit unsigned integer")) cfg.seed = seed;
  long long threads = 0;
  if (rd.get(root, "threads", threads, "an integer")) {
    if (threads < 0 || threads > 4096) rd.fail(root["threads"], "'threads' must lie in 0..4096");
    cfg.threads = static_cast<unsigned>(threads);
  }
  rd.get(root, "out", cfg.out, "a path");
  rd.positive(root, "threshold", cfg.threshold);

  if (root["simulate"]) read_simulate(rd, root["simulate"], cfg);
  else cfg.simulate.sim.varsigma = varsigma_from_xi(cfg.simulate.xi.xi, cfg.simulate.sim.masses);
  if (root["ibp"]) read_ibp(rd, root["ibp"], cfg);
  if (root["martingale"]) read_martingale(rd, root["martingale"], cfg);
  if (root["varadhan"]) read_varadhan(rd, root["varadhan"], cfg);
  if (root["bernstein"]) read_bernstein(rd, root["bernstein"], cfg);
  if (root["xi_bounds"]) read_xi_bounds(rd, root["xi_bounds"], cfg);
  if (root["sample_xi"]) read_sample_xi(rd, root["sample_xi"], cfg);
  cfg.simulate.sim.seed = cfg.seed;
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot read configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

PiecewiseConstant load_xi_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot read xi file");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": byte " + std::to_string(e.byte) + ": " + e.what());
  }
  try {
    PiecewiseConstant xi(j.value("breakpoints", std::vector<double>{}), j.at("values").get<std::vector<double>>());
    if (!xi.is_nondecreasing()) throw ConfigError(path.string() + ": xi must be non-decreasing");
    return xi;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace cfwd
