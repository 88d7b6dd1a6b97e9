#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stokes_afem/adapt.hpp"
#include "stokes_afem/mesh.hpp"

namespace stokes_afem {

enum class RunMode { Adaptive, Uniform, SourceVerify };

RunMode parse_run_mode(std::string_view name);
std::string_view to_string(RunMode mode);

struct RunConfig {
  DomainKind domain = DomainKind::Square;
  int k = 1;
  double theta = 0.5;
  double gamma_c1 = 10.0;
  int n = 16;
  RunMode mode = RunMode::Adaptive;
  /// Unset: 200000 in adaptive mode, no budget in the uniform modes.
  std::optional<long> max_dof;
  double eta_tol = 0.0;
  int nev = 1;
  /// Meshes solved by the uniform and source-verify modes.
  int levels = 4;
  int max_levels = 1000;
  int marked_pairs = 1;
  bool half_interior_jump = false;
  bool warm_start = true;
  std::string out = "out";
  bool vtk = false;
  bool dump_matrices = false;
  /// 0 defers to STOKES_AFEM_THREADS, then 1.
  int threads = 0;
  /// Only consumed by randomized property checks.
  unsigned long seed = 0;
};

/// Keys accepted by files, set_config_value and (with '-' for '_') the CLI.
std::span<const std::string_view> config_keys();

/// Assign one key from text. Dashes in the key are read as underscores.
/// Throws Error(Config) naming the key for unknown keys, malformed values
/// and out-of-range values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& config, std::string_view key);

/// Read a flat key=value file ('#' starts a comment) or, if the first
/// non-blank character is '{', a flat JSON object.
void load_config_file(const std::filesystem::path& path, RunConfig& config);

/// Command-line arguments (without program or subcommand name). A --config
/// FILE is applied first, then every flag, so flags win over the file.
RunConfig parse_config(std::span<const std::string> args);

/// Every key as key=value, one per line, in config_keys() order.
std::string format_config(const RunConfig& config);

/// Help text for the run subcommand.
std::string usage();

enum class LogLevel { Info, Warning };
using LogSink = std::function<void(LogLevel, std::string_view)>;

struct SourceLevelRecord {
  int level = 0;
  int n = 0;
  double h = 0.0;
  long dofs = 0;
  double velocity_dg = 0.0;
  double velocity_l2 = 0.0;
  double pressure_l2 = 0.0;
  double seconds = 0.0;
};

struct RunResult {
  RunMode mode = RunMode::Adaptive;
  AdaptiveTrace trace;
  std::vector<SourceLevelRecord> source;
  std::optional<double> reference;
  std::filesystem::path output;
};

/// Run one experiment and write its artifacts below config.out:
/// results.csv (or source_verify.csv), and with the flags set
/// mesh_####.vtk, indicators_####.csv and level_####_{A,B,M}.mtx.
/// Rows are flushed as they are produced, so a failed run keeps its
/// completed levels on disk before the error propagates.
RunResult run(const RunConfig& config, const LogSink& log = {});

}  // namespace stokes_afem
