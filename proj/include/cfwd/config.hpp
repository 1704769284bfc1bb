#pragma once

// YAML experiment configuration. Every section has documented defaults and
// unknown keys are rejected with a line:column diagnostic.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfwd/dynamics.hpp"
#include "cfwd/monotone.hpp"
#include "cfwd/xi_measure.hpp"

namespace cfwd {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { Simulate, Verify, SampleXi };
enum class Suite { Ibp, Martingale, Varadhan, Bernstein, XiBounds };

const char* to_string(Mode m);
const char* to_string(Suite s);
std::optional<Suite> parse_suite(const std::string& s);

/// A potential xi: "identity" (K cells), "constant", "jump" (unit jump at 1/2)
/// or explicit {breakpoints, values}.
struct XiChoice {
  std::string label = "identity";
  PiecewiseConstant xi = xi_identity();
};

XiChoice make_xi(const std::string& label, std::size_t resolution = 1024);

struct SimulateSection {
  SimConfig sim;
  XiChoice xi;
  bool plot = false;
};

struct IbpSection {
  std::vector<int> strata{1, 2, 3};
  std::size_t samples = 1'000'000;
  double radius = 1.5;
  XiChoice xi;
};

struct MartingaleSection {
  std::size_t trajectories = 100;
  std::size_t n = 10;
  XiChoice xi;
  double dt = 1e-4;
  double T = 0.5;
  double merge_tol = 1e-9;
  /// "zero" (all particles at 0) or "spread" (x_i = u_i - 1/2 at mass midpoints).
  std::string initial = "zero";
  std::vector<std::string> functions{"linear:1", "quadratic:1:0", "sin:2:0", "bump:0.5:0.5", "sinbump:3:0:1"};
  double qv_tolerance = 0.05;
  bool dt_halving = false;
};

struct VaradhanSection {
  /// "n1": constants, A = [0, eps], B = [1, 1 + eps].
  /// "n2": two particles, A = ball(0, 0.1), B = ball(-1 on [0,1/2), 1 on [1/2,1); 0.1).
  std::string scenario = "n1";
  std::vector<double> times;  // default depends on the scenario
  std::size_t paths = 20000;
  std::size_t steps_per_path = 64;
  double epsilon = 0.05;
  double radius = 0.1;
  double rel_tol = 0.0;  // 0 means 0.10 for n1 and 0.25 for n2
};

struct BernsteinSection {
  double M = 1.0;
  std::vector<std::size_t> degrees{8, 16, 32, 64};
  std::size_t grid = 101;
};

struct XiBoundsSection {
  std::vector<int> strata{1, 2, 3, 4};
  std::vector<double> radii{0.5, 1.0, 2.0};
  std::size_t samples = 200'000;
  XiChoice xi;
};

struct SampleXiSection {
  int n = 2;
  double radius = 1.0;
  XiChoice xi;
  std::size_t samples = 1000;
};

struct ExperimentConfig {
  Mode mode = Mode::Simulate;
  Suite suite = Suite::Martingale;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string out = "cfwd_out";
  double threshold = 4.0;
  SimulateSection simulate;
  IbpSection ibp;
  MartingaleSection martingale;
  VaradhanSection varadhan;
  BernsteinSection bernstein;
  XiBoundsSection xi_bounds;
  SampleXiSection sample_xi;
};

/// Parses YAML text; `origin` prefixes diagnostics ("file:line:col: message").
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads xi from a JSON file {"breakpoints": [...], "values": [...]}.
PiecewiseConstant load_xi_file(const std::filesystem::path& path);

}  // namespace cfwd
