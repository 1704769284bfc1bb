#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "cfwd/io.hpp"

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "YAML experiment file");
  app->add_option("--seed", c.seed, "64-bit seed (overrides the config)");
  app->add_option("--threads", c.threads, "worker threads (default: CFWD_THREADS, then all cores)");
  app->add_option("--out", c.out, "output directory");
}

cfwd::RunOverrides overrides(CLI::App* app, const Common& c) {
  cfwd::RunOverrides o;
  if (app->count("--seed")) o.seed = c.seed;
  if (app->count("--threads")) o.threads = c.threads;
  if (app->count("--out")) o.out = c.out;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cfwd: coalescing-fragmentating Wasserstein dynamics"};
  app.require_subcommand(1);

  Common sim_c, ver_c, xi_c;
  bool plot = false;
  auto* sim = app.add_subcommand("simulate", "simulate the particle system");
  add_common(sim, sim_c);
  sim->add_flag("--plot", plot, "also emit plotting scripts");

  std::string suite;
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  add_common(ver, ver_c);
  ver->add_option("suite", suite, "ibp | martingale | varadhan | bernstein | xi-bounds")
      ->required()
      ->check(CLI::IsMember({"ibp", "martingale", "varadhan", "bernstein", "xi-bounds"}));

  int n = 0;
  double radius = 0.0;
  std::string xi_file;
  std::size_t samples = 0;
  auto* sx = app.add_subcommand("sample-xi", "draw weighted samples of Xi_n on a ball");
  add_common(sx, xi_c);
  sx->add_option("--n", n, "stratum");
  sx->add_option("--radius", radius, "ball radius");
  sx->add_option("--xi-file", xi_file, "JSON file {breakpoints, values}")->check(CLI::ExistingFile);
  sx->add_option("--samples", samples, "number of samples");

  auto* emit = app.add_subcommand("emit-figures", "write plotting scripts for a simulate output directory");
  std::string dir;
  emit->add_option("dir", dir, "directory with trajectory.csv and partitions.csv")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cfwd::kExitConfig;
  }

  if (*sim) {
    auto o = overrides(sim, sim_c);
    o.mode = cfwd::Mode::Simulate;
    o.plot = plot;
    return cfwd::run(sim_c.config, o);
  }
  if (*ver) {
    auto o = overrides(ver, ver_c);
    o.mode = cfwd::Mode::Verify;
    o.suite = cfwd::parse_suite(suite);
    return cfwd::run(ver_c.config, o);
  }
  if (*sx) {
    auto o = overrides(sx, xi_c);
    o.mode = cfwd::Mode::SampleXi;
    if (sx->count("--n")) o.n = n;
    if (sx->count("--radius")) o.radius = radius;
    if (sx->count("--xi-file")) o.xi_file = xi_file;
    if (sx->count("--samples")) o.samples = samples;
    return cfwd::run(xi_c.config, o);
  }
  try {
    for (const auto& p : cfwd::emit_figures(dir)) std::cout << p.string() << "\n";
  } catch (const cfwd::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return cfwd::kExitIo;
  }
  return 0;
}
