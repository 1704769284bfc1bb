#include "cfwd/io.hpp"

#include <openssl/evp.h>
#include <openssl/opensslv.h>
#include <unistd.h>

#include <boost/version.hpp>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "cfwd/bernstein.hpp"
#include "cfwd/cylinder.hpp"
#include "cfwd/random.hpp"
#include "cfwd/verify.hpp"
#include "cfwd/xi_measure.hpp"

namespace cfwd {

using ojson = nlohmann::ordered_json;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw IoError("SHA-256 computation failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& data) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError(path.parent_path().string() + ": " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(tmp.string() + ": cannot open for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw IoError(tmp.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError(path.string() + ": rename failed: " + ec.message());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "# format_version=" << kFormatVersion << "\n";
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
  os << "t";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i + 1;
  os << ",atom_count,com";
  for (const auto& name : tr.observable_names) os << ",pair:" << name;
  os << "\n";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    os << format_double(tr.times[k]);
    for (double x : tr.states[k].positions) os << "," << format_double(x);
    os << "," << tr.atom_count[k] << "," << format_double(tr.center_of_mass[k]);
    for (double p : tr.pairings[k]) os << "," << format_double(p);
    os << "\n";
  }
  return os.str();
}

std::string partitions_csv(const Trajectory& tr) {
  std::ostringstream os;
  os << "# format_version=" << kFormatVersion << "\n";
  os << "t,block,u_start,u_end,position,mass\n";
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const auto& s = tr.states[k];
    const auto u = s.masses.cumulative();
    for (std::size_t b = 0; b < s.partition.block_count(); ++b) {
      const auto lo = s.partition.block_begin(b), hi = s.partition.block_end(b);
      os << format_double(tr.times[k]) << "," << b << "," << format_double(u[lo]) << "," << format_double(u[hi])
         << "," << format_double(s.positions[lo]) << "," << format_double(u[hi] - u[lo]) << "\n";
    }
  }
  return os.str();
}

std::string measures_jsonl(const Trajectory& tr) {
  std::string out;
  for (std::size_t k = 0; k < tr.states.size(); ++k) {
    const auto mu = empirical_measure(tr.states[k]);
    ojson j;
    j["format_version"] = kFormatVersion;
    j["t"] = tr.times[k];
    j["positions"] = mu.positions();
    j["masses"] = mu.masses();
    out += j.dump() + "\n";
  }
  return out;
}

namespace {

ojson report_to_json(const StatReport& r) {
  ojson j;
  j["name"] = r.name;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["target"] = r.target;
  j["z"] = r.z;
  j["samples"] = r.samples;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace

std::string report_json(const std::string& suite, const std::vector<StatReport>& reports) {
  ojson j;
  j["format_version"] = kFormatVersion;
  j["suite"] = suite;
  bool pass = !reports.empty();
  ojson arr = ojson::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    arr.push_back(report_to_json(r));
  }
  j["pass"] = pass;
  j["reports"] = arr;
  return j.dump(2) + "\n";
}

ArtifactSet::ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

void ArtifactSet::add(const std::string& name, std::string content) { files_[name] = std::move(content); }

void ArtifactSet::commit(const std::string& mode, const std::string& config_text, std::uint64_t seed,
                         double wall_seconds, unsigned threads) {
  ojson artifacts = ojson::object();
  for (const auto& [name, content] : files_) {
    write_atomic(dir_ / name, content);
    artifacts[name] = {{"sha256", sha256_hex(content)}, {"bytes", content.size()}};
  }
  ojson m;
  m["format_version"] = kFormatVersion;
  m["tool"] = "cfwd";
  m["mode"] = mode;
  m["config_sha256"] = sha256_hex(config_text);
  m["seed"] = seed;
  m["versions"] = {{"cfwd", kToolVersion},
                   {"test_bank", kFcBankVersion},
                   {"compiler", __VERSION__},
                   {"boost", BOOST_LIB_VERSION},
                   {"openssl", OPENSSL_VERSION_TEXT},
                   {"rng", "mt19937_64 + ziggurat normal, splitmix64 seed derivation"}};
  m["artifacts"] = artifacts;
  m["timing_file"] = "timing.json";
  write_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
  ojson t;
  t["format_version"] = kFormatVersion;
  t["wall_seconds"] = wall_seconds;
  t["threads"] = threads;
  write_atomic(dir_ / "timing.json", t.dump(2) + "\n");
}

namespace {

std::vector<std::string> csv_columns(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cols.push_back(c);
    return cols;
  }
  throw IoError(what + ": no header row");
}

void require_columns(const std::vector<std::string>& cols, std::initializer_list<const char*> names,
                     const std::string& what) {
  for (const char* n : names)
    if (std::find(cols.begin(), cols.end(), n) == cols.end())
      throw IoError(what + ": missing column '" + std::string(n) + "'");
}

const char* kFigurePositions = R"(import pandas as pd
import matplotlib.pyplot as plt

traj = pd.read_csv("trajectory.csv", comment="#")
parts = pd.read_csv("partitions.csv", comment="#")
fig, ax = plt.subplots(figsize=(8, 4))
shade = 1.0 - parts["mass"] / parts["mass"].max()
ax.scatter(parts["t"], parts["position"], c=shade.astype(str), s=1, linewidths=0)
ax.plot(traj["t"], traj["com"], color="tab:red", lw=1, label="centre of mass")
ax.set_xlabel("t")
ax.set_ylabel("atom position")
ax.legend(loc="upper left")
fig.tight_layout()
fig.savefig("fig_positions.png", dpi=150)
)";

const char* kFigureAtoms = R"(import pandas as pd
import matplotlib.pyplot as plt

traj = pd.read_csv("trajectory.csv", comment="#")
window = max(1, len(traj) // 50)
fig, ax = plt.subplots(figsize=(8, 3))
ax.plot(traj["t"], traj["atom_count"], color="0.6", lw=0.5, label="atoms")
ax.plot(traj["t"], traj["atom_count"].rolling(window, min_periods=1).mean(), color="k", lw=1.2,
        label="moving average")
ax.set_xlabel("t")
ax.set_ylabel("number of atoms")
ax.legend(loc="upper left")
fig.tight_layout()
fig.savefig("fig_atoms.png", dpi=150)
)";

const char* kFigurePartitions = R"(import pandas as pd
import matplotlib.pyplot as plt

parts = pd.read_csv("partitions.csv", comment="#")
inner = parts[parts["u_end"] < 1.0 - 1e-12]
fig, ax = plt.subplots(figsize=(8, 3))
ax.scatter(inner["t"], inner["u_end"], s=1, color="k", linewidths=0)
ax.set_xlim(parts["t"].min(), parts["t"].max())
ax.set_ylim(0.0, 1.0)
ax.set_xlabel("t")
ax.set_ylabel("block boundaries in [0,1]")
fig.tight_layout()
fig.savefig("fig_partitions.png", dpi=150)
)";

std::map<std::string, std::string> figure_scripts(const std::string& trajectory, const std::string& partitions) {
  require_columns(csv_columns(trajectory, "trajectory.csv"), {"t", "x1", "atom_count", "com"}, "trajectory.csv");
  require_columns(csv_columns(partitions, "partitions.csv"), {"t", "block", "u_start", "u_end", "position", "mass"},
                  "partitions.csv");
  return {{"fig_positions.py", kFigurePositions},
          {"fig_atoms.py", kFigureAtoms},
          {"fig_partitions.py", kFigurePartitions}};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p.string() + ": cannot read");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::vector<std::filesystem::path> emit_figures(const std::filesystem::path& dir) {
  const auto scripts = figure_scripts(read_file(dir / "trajectory.csv"), read_file(dir / "partitions.csv"));
  std::vector<std::filesystem::path> out;
  for (const auto& [name, body] : scripts) {
    write_atomic(dir / name, body);
    out.push_back(dir / name);
  }
  return out;
}

namespace {

void print_reports(const std::vector<StatReport>& reports) {
  for (const auto& r : reports) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": estimate " << r.estimate << " target " << r.target
              << " se " << r.std_error << " z " << r.z;
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
  }
}

std::vector<StatReport> suite_ibp(const ExperimentConfig& cfg, unsigned threads) {
  const auto bank = fc_bank();
  std::vector<StatReport> out;
  for (int n : cfg.ibp.strata) {
    auto r = check_ibp_bank(n, bank, cfg.ibp.xi.xi, cfg.ibp.radius, cfg.ibp.samples,
                            derive_seed(cfg.seed, static_cast<std::uint64_t>(n)), threads, cfg.threshold);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

SimConfig martingale_sim(const MartingaleSection& sec, std::uint64_t seed, double dt) {
  SimConfig sim;
  sim.masses = MassVector::uniform(sec.n);
  sim.varsigma = varsigma_from_xi(sec.xi.xi, sim.masses);
  sim.dt = dt;
  sim.T = sec.T;
  sim.merge_tol = sec.merge_tol;
  sim.seed = seed;
  if (sec.initial == "spread") {
    const auto u = sim.masses.cumulative();
    for (std::size_t i = 0; i < sec.n; ++i) sim.initial.push_back(0.5 * (u[i] + u[i + 1]) - 0.5);
  }
  return sim;
}

std::vector<StatReport> suite_martingale(const ExperimentConfig& cfg, unsigned threads) {
  const auto& sec = cfg.martingale;
  std::vector<ScalarFunction> fs;
  for (const auto& s : sec.functions) fs.push_back(ScalarFunction::parse(s));
  const std::vector<PiecewiseConstant> hs{PiecewiseConstant::constant(1.0)};
  const std::vector<std::string> h_names{"h=1"};
  const auto sim = martingale_sim(sec, cfg.seed, sec.dt);
  const auto ens = run_martingale_ensemble(sim, fs, hs, sec.trajectories, threads);
  std::vector<StatReport> out;
  std::vector<double> qv_err(fs.size());
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const auto c = summarize_martingale("M^f " + fs[j].name(), ens.paths_f[j], cfg.threshold, sec.qv_tolerance);
    out.push_back(c.drift);
    out.push_back(c.qv);
    qv_err[j] = c.qv.estimate;
  }
  for (std::size_t j = 0; j < hs.size(); ++j) {
    const auto c = summarize_martingale("M~h " + h_names[j], ens.paths_h[j], cfg.threshold, sec.qv_tolerance);
    out.push_back(c.drift);
    out.push_back(c.qv);
  }
  const auto com = mean_se(ens.com_qv);
  StatReport r;
  r.name = "centre of mass qv / T";
  r.estimate = com.mean / sec.T;
  r.std_error = com.std_error / sec.T;
  r.target = 1.0;
  r.samples = ens.com_qv.size();
  r.threshold = 0.03;
  r.z = r.std_error > 0.0 ? (r.estimate - 1.0) / r.std_error : 0.0;
  r.pass = std::abs(r.estimate - 1.0) <= 0.03;
  r.note = "relative tolerance 3%";
  out.push_back(r);
  if (sec.dt_halving) {
    const auto sim2 = martingale_sim(sec, derive_seed(cfg.seed, 0x68616c66), sec.dt / 2);
    const auto ens2 = run_martingale_ensemble(sim2, fs, {}, sec.trajectories, threads);
    for (std::size_t j = 0; j < fs.size(); ++j) {
      const auto c = summarize_martingale("M^f " + fs[j].name(), ens2.paths_f[j], cfg.threshold, sec.qv_tolerance);
      auto d = c.drift;
      d.name = "dt/2 " + d.name;
      out.push_back(d);
      StatReport h;
      h.name = "qv error ratio dt/2 " + fs[j].name();
      h.estimate = qv_err[j] > 0.0 ? c.qv.estimate / qv_err[j] : 0.0;
      h.target = 0.8;
      h.threshold = 0.8;
      h.samples = sec.trajectories;
      h.pass = h.estimate <= 0.8;
      h.note = "halved-step qv error over full-step qv error";
      out.push_back(h);
    }
  }
  return out;
}

}  // namespace

VaradhanSetup varadhan_setup(const VaradhanSection& sec) {
  VaradhanSetup s;
  s.steps_per_path = sec.steps_per_path;
  if (sec.scenario == "n1") {
    s.masses = MassVector::uniform(1);
    s.varsigma = {0.0};
    s.A = {PiecewiseConstant::constant(sec.epsilon / 2), sec.epsilon / 2};
    s.B = {PiecewiseConstant::constant(1.0 + sec.epsilon / 2), sec.epsilon / 2};
  } else {
    s.masses = MassVector::uniform(2);
    s.varsigma = {0.0, 1.0};
    s.A = {PiecewiseConstant::constant(0.0), sec.radius};
    s.B = {PiecewiseConstant({0.5}, {-1.0, 1.0}), sec.radius};
  }
  return s;
}

std::vector<double> varadhan_times(const VaradhanSection& sec) {
  if (!sec.times.empty()) return sec.times;
  if (sec.scenario == "n1") return {1e-3};
  return {0.00125, 0.0025, 0.005, 0.01, 0.02};
}

namespace {

std::vector<StatReport> suite_varadhan(const ExperimentConfig& cfg, unsigned threads) {
  const auto& sec = cfg.varadhan;
  const bool one = sec.scenario == "n1";
  const auto times = varadhan_times(sec);
  const double tol = sec.rel_tol > 0.0 ? sec.rel_tol : (one ? 0.10 : 0.25);
  const auto setup = varadhan_setup(sec);
  const auto res = varadhan_exponent(setup, times, sec.paths, cfg.seed, threads, tol);
  std::vector<StatReport> out{res.report};
  out.front().name = "varadhan " + sec.scenario;
  for (const auto& p : res.points) {
    std::ostringstream name;
    name << "t log P_t at t=" << p.t;
    StatReport r;
    r.name = name.str();
    r.estimate = p.t_log_p;
    r.std_error = p.std_error;
    r.samples = p.paths;
    r.target = one ? varadhan_gaussian_oracle(sec.epsilon, p.t) : res.target;
    r.threshold = cfg.threshold;
    r.z = p.std_error > 0.0 ? (p.t_log_p - r.target) / p.std_error : 0.0;
    r.pass = std::isfinite(p.t_log_p);
    r.note = std::to_string(p.hits) + " paths reached B" +
             (one ? "; target is the exact value" : "; diagnostic only, the limit is compared with -d^2/2");
    if (one) r.pass = r.pass && std::abs(r.z) <= cfg.threshold;
    out.push_back(r);
  }
  return out;
}

std::vector<StatReport> suite_bernstein(const ExperimentConfig& cfg) {
  const auto& sec = cfg.bernstein;
  std::vector<StatReport> out;
  for (const auto& f : bernstein_bank()) {
    const auto rows = convergence_report(f, sec.M, sec.degrees, f.k == 1 ? sec.grid : std::min<std::size_t>(sec.grid, 41));
    double origin = 0.0;
    std::ostringstream note;
    for (const auto& r : rows) {
      origin = std::max(origin, std::abs(r.at_origin));
      note << "n=" << r.n << " sup " << r.sup_error << " grad " << r.grad_sup_error << "; ";
    }
    StatReport r;
    r.name = "bernstein " + f.name;
    r.estimate = rows.back().sup_error;
    r.std_error = 0.0;
    r.target = 0.0;
    r.samples = rows.size();
    r.threshold = 0.0;
    r.pass = strictly_decreasing(rows) && origin == 0.0;
    note << "max |P(0)| " << origin;
    r.note = note.str();
    out.push_back(r);
  }
  double affine = 0.0;
  for (std::size_t n : sec.degrees) {
    const BernsteinPolynomial b([](std::span<const double> s) { return 0.25 + 1.5 * s[0]; }, 1, n);
    for (std::size_t i = 0; i <= 200; ++i) {
      const double s = static_cast<double>(i) / 200.0;
      const double x[] = {s};
      affine = std::max(affine, std::abs(b.value(x) - (0.25 + 1.5 * s)));
    }
  }
  StatReport r;
  r.name = "bernstein reproduces affine";
  r.estimate = affine;
  r.threshold = 1e-12;
  r.samples = sec.degrees.size();
  r.pass = affine <= 1e-12;
  out.push_back(r);
  return out;
}

std::vector<StatReport> suite_xi_bounds(const ExperimentConfig& cfg) {
  const auto& sec = cfg.xi_bounds;
  std::vector<StatReport> out;
  std::uint64_t k = 0;
  for (int n : sec.strata)
    for (double r : sec.radii) out.push_back(check_xi_bound(n, r, sec.xi.xi, sec.samples, derive_seed(cfg.seed, k++)));
  for (double r : sec.radii) out.push_back(check_xi_jump_oracle(r, sec.samples, derive_seed(cfg.seed, k++)));
  return out;
}

std::string sample_xi_jsonl(const ExperimentConfig& cfg, const PiecewiseConstant& xi) {
  const auto& sec = cfg.sample_xi;
  XiStratumSampler sampler(sec.n, sec.radius, xi);
  Rng rng(cfg.seed);
  std::string out;
  for (std::size_t i = 0; i < sec.samples; ++i) {
    const auto s = sampler.sample(rng);
    ojson j;
    j["format_version"] = kFormatVersion;
    j["q"] = s.q;
    j["x"] = s.x;
    j["weight"] = s.weight;
    out += j.dump() + "\n";
  }
  return out;
}

std::string overrides_text(const RunOverrides& o) {
  std::ostringstream os;
  if (o.mode) os << "mode=" << to_string(*o.mode) << ";";
  if (o.suite) os << "suite=" << to_string(*o.suite) << ";";
  if (o.seed) os << "seed=" << *o.seed << ";";
  if (o.plot) os << "plot;";
  if (o.n) os << "n=" << *o.n << ";";
  if (o.radius) os << "radius=" << format_double(*o.radius) << ";";
  if (o.xi_file) os << "xi_file=" << *o.xi_file << ";";
  if (o.samples) os << "samples=" << *o.samples << ";";
  return os.str();
}

int run_impl(const std::filesystem::path& config, const RunOverrides& o) {
  const auto start = std::chrono::steady_clock::now();
  std::string text;
  ExperimentConfig cfg;
  if (!config.empty()) {
    std::ifstream in(config, std::ios::binary);
    if (!in) throw ConfigError(config.string() + ": cannot read configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
    cfg = parse_config(text, config.string());
  } else {
    cfg = parse_config("", "<defaults>");
  }
  if (o.mode) cfg.mode = *o.mode;
  if (o.suite) cfg.suite = *o.suite;
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.simulate.sim.seed = *o.seed;
  }
  if (o.out) cfg.out = *o.out;
  if (o.plot) cfg.simulate.plot = true;
  if (o.n) {
    if (*o.n < 1 || *o.n > kMaxStratum) throw ConfigError("--n must lie in 1.." + std::to_string(kMaxStratum));
    cfg.sample_xi.n = *o.n;
  }
  if (o.radius) {
    if (!(*o.radius > 0.0)) throw ConfigError("--radius must be positive");
    cfg.sample_xi.radius = *o.radius;
  }
  if (o.samples) cfg.sample_xi.samples = *o.samples;
  const unsigned threads = resolve_threads(static_cast<int>(o.threads ? *o.threads : cfg.threads));
  const std::string fingerprint = text + "\n--\n" + overrides_text(o);

  ArtifactSet art(cfg.out);
  bool pass = true;
  std::string mode = to_string(cfg.mode);
  switch (cfg.mode) {
    case Mode::Simulate: {
      const auto tr = simulate(cfg.simulate.sim);
      const auto traj = trajectory_csv(tr), parts = partitions_csv(tr);
      if (cfg.simulate.plot)
        for (auto& [name, body] : figure_scripts(traj, parts)) art.add(name, body);
      art.add("trajectory.csv", traj);
      art.add("partitions.csv", parts);
      art.add("measures.jsonl", measures_jsonl(tr));
      std::cout << "simulated " << tr.states.size() << " snapshots; final atom count " << tr.atom_count.back()
                << "\n";
      break;
    }
    case Mode::Verify: {
      const auto reports = run_suite(cfg, threads);
      print_reports(reports);
      for (const auto& r : reports) pass = pass && r.pass;
      art.add("report.json", report_json(to_string(cfg.suite), reports));
      mode += std::string(" ") + to_string(cfg.suite);
      break;
    }
    case Mode::SampleXi: {
      const auto xi = o.xi_file ? load_xi_file(*o.xi_file) : cfg.sample_xi.xi.xi;
      try {
        art.add("samples.jsonl", sample_xi_jsonl(cfg, xi));
      } catch (const NullStratum& e) {
        throw ConfigError(std::string("sample-xi: ") + e.what());
      }
      break;
    }
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  art.commit(mode, fingerprint, cfg.seed, wall, threads);
  std::cout << "artifacts written to " << art.dir().string() << "\n";
  return pass ? kExitOk : kExitSuiteFailure;
}

}  // namespace

std::vector<StatReport> run_suite(const ExperimentConfig& cfg, unsigned threads) {
  switch (cfg.suite) {
    case Suite::Ibp: return suite_ibp(cfg, threads);
    case Suite::Martingale: return suite_martingale(cfg, threads);
    case Suite::Varadhan: return suite_varadhan(cfg, threads);
    case Suite::Bernstein: return suite_bernstein(cfg);
    case Suite::XiBounds: return suite_xi_bounds(cfg);
  }
  return {};
}

int run(const std::filesystem::path& config, const RunOverrides& overrides) {
  try {
    return run_impl(config, overrides);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
}

}  // namespace cfwd
