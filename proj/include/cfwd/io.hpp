#pragma once

// Artifact writing (atomic, versioned), manifests and the experiment runner.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfwd/config.hpp"
#include "cfwd/dynamics.hpp"
#include "cfwd/stats.hpp"
#include "cfwd/verify.hpp"

namespace cfwd {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitOther = 1, kExitConfig = 2, kExitIo = 3, kExitSuiteFailure = 4 };

std::string sha256_hex(const std::string& data);

/// Writes via a temporary file in the same directory and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& data);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

std::string trajectory_csv(const Trajectory& tr);
/// One row per block and snapshot: t, block, u_start, u_end, position, mass.
std::string partitions_csv(const Trajectory& tr);
/// One JSON object per snapshot: {format_version, t, positions, masses}.
std::string measures_jsonl(const Trajectory& tr);
/// {format_version, suite, pass, reports: [...]}.
std::string report_json(const std::string& suite, const std::vector<StatReport>& reports);

/// Collects artifacts and writes them plus manifest.json at the end.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir);
  void add(const std::string& name, std::string content);
  /// Writes all artifacts, then manifest.json (deterministic) and timing.json (wall time).
  void commit(const std::string& mode, const std::string& config_text, std::uint64_t seed,
              double wall_seconds, unsigned threads);
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::map<std::string, std::string> files_;
};

/// Writes three plotting scripts next to simulate outputs: positions vs time,
/// atom count with a moving average, and the partition history.
/// Throws IoError when an input file or a required column is missing.
std::vector<std::filesystem::path> emit_figures(const std::filesystem::path& dir);

struct RunOverrides {
  std::optional<Mode> mode;
  std::optional<Suite> suite;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> out;
  bool plot = false;
  // sample-xi
  std::optional<int> n;
  std::optional<double> radius;
  std::optional<std::string> xi_file;
  std::optional<std::size_t> samples;
};

/// Runs the verification suite selected by cfg.suite and returns its reports.
std::vector<StatReport> run_suite(const ExperimentConfig& cfg, unsigned threads);

/// The short-time scenario described by a varadhan section and its time grid.
VaradhanSetup varadhan_setup(const VaradhanSection& sec);
std::vector<double> varadhan_times(const VaradhanSection& sec);

/// Runs one experiment. An empty config path uses the defaults. Returns an
/// exit code (0 ok, 2 config, 3 I/O, 4 suite failure, 1 other) and prints
/// diagnostics to stderr.
int run(const std::filesystem::path& config, const RunOverrides& overrides = {});

}  // namespace cfwd
