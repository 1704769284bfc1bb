// Acceptance run at desk scale. Prints one PASS/FAIL line per criterion and
// exits non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cfwd/io.hpp"
#include "cfwd/monotone.hpp"
#include "cfwd/random.hpp"
#include "cfwd/verify.hpp"
#include "cfwd/wasserstein.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cfwd;
namespace fs = std::filesystem;

namespace {

int failures = 0;

unsigned threads() { return resolve_threads(); }

void line(int id, const std::string& what, bool pass, const std::string& detail, double seconds) {
  std::printf("%s  %2d  %-28s %s  [%.1fs]\n", pass ? "PASS" : "FAIL", id, what.c_str(), detail.c_str(), seconds);
  std::fflush(stdout);
  failures += !pass;
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

void show(const std::vector<StatReport>& reports) {
  for (const auto& r : reports)
    std::printf("      %s %-40s est %-12s se %-10s z %-8s %s\n", r.pass ? "ok " : "BAD", r.name.c_str(),
                fmt(r.estimate, 6).c_str(), fmt(r.std_error, 3).c_str(), fmt(r.z, 3).c_str(), r.note.c_str());
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

ExperimentConfig martingale_config(const std::string& xi) {
  ExperimentConfig cfg;
  cfg.mode = Mode::Verify;
  cfg.suite = Suite::Martingale;
  cfg.seed = 2024;
  auto& m = cfg.martingale;
  m.trajectories = 10000;
  m.n = 10;
  m.xi = make_xi(xi);
  m.dt = 1e-4;
  m.T = 0.5;
  return cfg;
}

void martingale_criteria() {
  Clock c;
  auto cfg = martingale_config("identity");
  cfg.martingale.dt_halving = true;
  const auto reports = run_suite(cfg, threads());
  show(reports);
  bool drift = true, qv = true, ratio = true, com = true;
  double worst_z = 0.0, worst_half = 0.0, worst_qv = 0.0, worst_ratio = 0.0, com_id = 0.0;
  for (const auto& r : reports) {
    const bool f = starts_with(r.name, "M^f ");
    if (f && r.name.find(" qv") == std::string::npos) {
      drift = drift && r.pass;
      worst_z = std::max(worst_z, std::abs(r.z));
    } else if (f) {
      qv = qv && r.pass;
      worst_qv = std::max(worst_qv, r.estimate);
    } else if (starts_with(r.name, "dt/2 ")) {
      worst_half = std::max(worst_half, std::abs(r.z));
    } else if (starts_with(r.name, "qv error ratio")) {
      ratio = ratio && r.pass;
      worst_ratio = std::max(worst_ratio, r.estimate);
    } else if (starts_with(r.name, "centre of mass")) {
      com = r.pass;
      com_id = r.estimate;
    }
  }
  const double t = c.seconds();
  line(1, "martingale drift", drift, "max |z| " + fmt(worst_z, 3) + " over the f bank, 1e4 paths (" + fmt(worst_half, 3) + " at dt/2)", t);
  line(2, "quadratic variation", qv && ratio,
       "max rel err " + fmt(worst_qv, 3) + " (<= 0.05), max dt/2 ratio " + fmt(worst_ratio, 3) + " (<= 0.8)", t);

  Clock c2;
  const auto flat = run_suite(martingale_config("constant"), threads());
  double com_const = 0.0;
  for (const auto& r : flat)
    if (starts_with(r.name, "centre of mass")) {
      com = com && r.pass;
      com_const = r.estimate;
    }
  line(3, "centre of mass qv", com,
       "qv/T " + fmt(com_id, 5) + " (xi = id), " + fmt(com_const, 5) + " (xi = const), tolerance 3%", c2.seconds());
}

void ibp_criterion() {
  Clock c;
  ExperimentConfig cfg;
  cfg.mode = Mode::Verify;
  cfg.suite = Suite::Ibp;
  cfg.seed = 7;
  const auto reports = run_suite(cfg, threads());
  show(reports);
  bool ok = reports.size() == 30;
  double worst = 0.0;
  for (const auto& r : reports) {
    ok = ok && r.pass;
    worst = std::max(worst, std::abs(r.z));
  }
  line(4, "integration by parts", ok, std::to_string(reports.size()) + " identities, N = 1e6, max |z| " + fmt(worst, 3),
       c.seconds());
}

void xi_criterion() {
  Clock c;
  ExperimentConfig cfg;
  cfg.mode = Mode::Verify;
  cfg.suite = Suite::XiBounds;
  cfg.seed = 11;
  const auto reports = run_suite(cfg, threads());
  show(reports);
  bool ok = reports.size() == 15;
  for (const auto& r : reports) ok = ok && r.pass;
  line(5, "Xi_n ball bound", ok, "12 bounds (n = 1..4, r = 0.5, 1, 2) and 3 single-jump oracles", c.seconds());
}

void wasserstein_criterion() {
  Clock c;
  gen::Engine e(606);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto a = gen::commensurable(e, static_cast<int>(gen::index(e, 1, 8)), 8);
    const auto b = gen::commensurable(e, static_cast<int>(gen::index(e, 1, 8)), 8);
    worst = std::max(worst, std::abs(w2_quantile(iota_inv(a), iota_inv(b)) - w2_bruteforce(a, b, 600)));
  }
  double worst_ex = 0.0;
  for (int D = 1; D <= 6; ++D)
    for (int rep = 0; rep < 50; ++rep) {
      const auto a = gen::commensurable(e, D, 6);
      const auto b = gen::commensurable(e, D, 6);
      worst_ex = std::max(worst_ex, std::abs(w2_quantile(iota_inv(a), iota_inv(b)) - w2_exhaustive(a, b, 6)));
    }
  line(6, "w2 isometry", worst <= 1e-10 && worst_ex <= 1e-10,
       "max |quantile - matching| " + fmt(worst, 3) + " (1000 instances), vs exhaustive " + fmt(worst_ex, 3), c.seconds());
}

void pava_criterion() {
  Clock c;
  gen::Engine e(707);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t n = gen::index(e, 1, 12);
    const auto m = gen::masses(e, n);
    std::vector<double> x(n);
    for (auto& v : x) v = gen::uniform(e, -1, 1);
    const auto got = weighted_isotonic_projection(x, m, 0.0);
    const auto want = oracle::isotonic(x, m);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(got.y[i] - want[i]));
  }
  line(7, "PAVA oracle", worst <= 1e-10, "max deviation " + fmt(worst, 3) + " over 1000 instances, n <= 12", c.seconds());
}

void varadhan_criterion() {
  Clock c;
  ExperimentConfig one;
  one.mode = Mode::Verify;
  one.suite = Suite::Varadhan;
  one.seed = 31;
  const auto r1 = run_suite(one, threads());
  show(r1);
  bool ok1 = true;
  for (const auto& r : r1) ok1 = ok1 && r.pass;

  VaradhanSection sec;
  sec.scenario = "n2";
  sec.paths = 80000;
  const auto times = varadhan_times(sec);
  std::vector<VaradhanResult> res;
  for (std::size_t K : {64, 128}) {
    sec.steps_per_path = K;
    const auto r = varadhan_exponent(varadhan_setup(sec), times, sec.paths, 32, threads(), 0.25);
    std::printf("      n2 K=%-4zu limit %s +- %s  target %s  rel err %s\n", K, fmt(r.limit, 5).c_str(),
                fmt(r.report.std_error, 2).c_str(), fmt(r.target, 5).c_str(), fmt(r.rel_error, 3).c_str());
    for (const auto& p : r.points)
      std::printf("        t %-8s t log P %-10s se %-8s hits %zu\n", fmt(p.t).c_str(), fmt(p.t_log_p, 5).c_str(),
                  fmt(p.std_error, 2).c_str(), p.hits);
    res.push_back(r);
  }
  const bool within = res[0].report.pass && res[1].report.pass;
  const double coarse = std::abs(res[0].limit - res[0].target), fine = std::abs(res[1].limit - res[1].target);
  const double se = std::hypot(res[0].report.std_error, res[1].report.std_error);
  const double z = se > 0.0 ? (coarse - fine) / se : 0.0;
  const bool trend = fine <= coarse;
  line(8, "Varadhan short time", ok1 && within && trend,
       "n1 rel err " + fmt(std::abs(r1.front().estimate / r1.front().target - 1.0), 3) + "; n2 rel err " + fmt(res[0].rel_error, 3) + " (dt = t/64), " +
           fmt(res[1].rel_error, 3) + " (dt = t/128); refinement gain " + fmt(coarse - fine, 2) + ", z " + fmt(z, 2),
       c.seconds());
}

void gradient_criterion() {
  Clock c;
  gen::Engine e(909);
  double worst = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto U = gen::cylinder(e);
    const auto g = gen::inside(e, gen::index(e, 1, 6), U.phi.support);
    const auto f = gen::step(e, gen::index(e, 1, 8));
    worst = std::max(worst, oracle::gradient_error(U, g, f, 1e-4));
  }
  line(9, "gradient consistency", worst <= 1e-5, "max relative error " + fmt(worst, 3) + " over 200 triples, eps 1e-4",
       c.seconds());
}

void bernstein_criterion() {
  Clock c;
  ExperimentConfig cfg;
  cfg.mode = Mode::Verify;
  cfg.suite = Suite::Bernstein;
  const auto reports = run_suite(cfg, threads());
  show(reports);
  bool ok = !reports.empty();
  for (const auto& r : reports) ok = ok && r.pass;
  line(10, "Bernstein approximation", ok, "strict decrease over n = 8..64, affine exact, P(0) = 0", c.seconds());
}

std::map<std::string, std::string> artifacts(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().filename() == "timing.json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    out[fs::relative(entry.path(), dir).string()] =
        std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return out;
}

void determinism_criterion() {
  Clock c;
  const fs::path root = fs::temp_directory_path() / ("cfwd_acceptance_" + std::to_string(::getpid()));
  const std::vector<std::pair<std::string, std::string>> configs{
      {"simulate", "mode: simulate\nseed: 5\nsimulate:\n  n: 12\n  xi: identity\n  dt: 0.001\n  T: 0.5\n"},
      {"martingale", "mode: verify\nsuite: martingale\nseed: 6\nthreads: 2\nmartingale:\n  trajectories: 64\n"
                     "  n: 6\n  dt: 0.001\n  T: 0.2\n"},
      {"ibp", "mode: verify\nsuite: ibp\nseed: 7\nthreads: 2\nibp:\n  strata: [2]\n  samples: 20000\n"},
      {"varadhan", "mode: varadhan\nseed: 8\nvaradhan:\n  scenario: n2\n  paths: 500\n  steps_per_path: 16\n"},
      {"sample-xi", "mode: sample-xi\nseed: 9\nsample_xi:\n  n: 3\n  samples: 200\n"},
  };
  bool ok = true;
  std::size_t files = 0;
  std::string bad;
  for (const auto& [name, text] : configs) {
    const fs::path cfg = root / (name + ".yaml");
    fs::create_directories(root);
    std::ofstream(cfg) << text;
    std::map<std::string, std::string> runs[2];
    for (int k = 0; k < 2; ++k) {
      RunOverrides o;
      o.out = (root / (name + "_" + std::to_string(k))).string();
      std::ostringstream sink;
      auto* saved = std::cout.rdbuf(sink.rdbuf());
      const int code = run(cfg, o);
      std::cout.rdbuf(saved);
      if (code != kExitOk && code != kExitSuiteFailure) {
        ok = false;
        bad += " " + name + " exit " + std::to_string(code);
      }
      runs[k] = artifacts(*o.out);
    }
    const bool same = !runs[0].empty() && runs[0] == runs[1];
    ok = ok && same;
    files += runs[0].size();
    if (!same) bad += " " + name + " differs";
  }
  fs::remove_all(root);
  line(11, "determinism", ok,
       std::to_string(files) + " artifacts byte-identical across reruns (timing.json excluded)" + bad, c.seconds());
}

}  // namespace

int main() {
  Clock total;
  std::cout << "acceptance: one line per criterion\n";
  wasserstein_criterion();
  pava_criterion();
  gradient_criterion();
  bernstein_criterion();
  determinism_criterion();
  xi_criterion();
  ibp_criterion();
  varadhan_criterion();
  martingale_criteria();
  std::printf("%s: %d failing criteria, %.1fs\n", failures == 0 ? "PASS" : "FAIL", failures, total.seconds());
  return failures == 0 ? 0 : 1;
}
