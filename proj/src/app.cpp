#include "stokes_afem/app.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "stokes_afem/error.hpp"
#include "stokes_afem/io.hpp"
#include "stokes_afem/parallel.hpp"
#include "stokes_afem/solver.hpp"
#include "stokes_afem/verify.hpp"

namespace stokes_afem {

namespace {

constexpr long kDefaultAdaptiveBudget = 200000;

constexpr std::array<std::string_view, 20> kKeys = {
    "domain",     "k",         "theta",        "gamma_c1",     "n",
    "mode",       "max_dof",   "eta_tol",      "nev",          "levels",
    "max_levels", "marked_pairs", "half_interior_jump", "warm_start", "out",
    "vtk",        "dump_matrices", "threads",   "seed",         "config"};

// "config" is only meaningful on the command line.
bool is_file_key(std::string_view key) { return key != "config"; }

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view why) {
  throw Error(ErrorKind::Config,
              fmt::format("invalid value '{}' for '{}': {}", value, key, why));
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    bad_value(key, text, "not a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) bad_value(key, text, "not finite");
  }
  return value;
}

bool parse_bool(std::string_view key, std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  bad_value(key, text, "expected true or false");
}

std::string normalize_key(std::string_view key) {
  std::string k(key);
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string format_double(double v) { return fmt::format("{}", v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RunMode parse_run_mode(std::string_view name) {
  if (name == "adaptive") return RunMode::Adaptive;
  if (name == "uniform") return RunMode::Uniform;
  if (name == "source-verify" || name == "source_verify") return RunMode::SourceVerify;
  throw Error(ErrorKind::Config, "unknown mode '" + std::string(name) + "'");
}

std::string_view to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Adaptive: return "adaptive";
    case RunMode::Uniform: return "uniform";
    case RunMode::SourceVerify: return "source-verify";
  }
  return "unknown";
}

std::span<const std::string_view> config_keys() {
  return std::span<const std::string_view>(kKeys.data(), kKeys.size() - 1);
}

void set_config_value(RunConfig& c, std::string_view raw_key, std::string_view raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string value = trim(raw_value);
  auto positive_int = [&](int lo, int hi) {
    const int v = parse_number<int>(key, value);
    if (v < lo || v > hi) bad_value(key, value, fmt::format("must lie in [{}, {}]", lo, hi));
    return v;
  };
  if (key == "domain") {
    try {
      c.domain = parse_domain_kind(value);
    } catch (const Error&) {
      bad_value(key, value, "expected square, lshape or slit");
    }
  } else if (key == "k") {
    c.k = positive_int(1, 3);
  } else if (key == "theta") {
    const double v = parse_number<double>(key, value);
    if (!(v > 0.0 && v < 1.0)) bad_value(key, value, "must lie in (0, 1)");
    c.theta = v;
  } else if (key == "gamma_c1") {
    const double v = parse_number<double>(key, value);
    if (!(v > 0.0)) bad_value(key, value, "must be positive");
    c.gamma_c1 = v;
  } else if (key == "n") {
    c.n = positive_int(1, 4096);
  } else if (key == "mode") {
    try {
      c.mode = parse_run_mode(value);
    } catch (const Error&) {
      bad_value(key, value, "expected adaptive, uniform or source-verify");
    }
  } else if (key == "max_dof") {
    if (value.empty()) {
      c.max_dof.reset();
      return;
    }
    const long v = parse_number<long>(key, value);
    if (v < 1) bad_value(key, value, "must be positive");
    c.max_dof = v;
  } else if (key == "eta_tol") {
    const double v = parse_number<double>(key, value);
    if (v < 0.0) bad_value(key, value, "must be non-negative");
    c.eta_tol = v;
  } else if (key == "nev") {
    c.nev = positive_int(1, 64);
  } else if (key == "levels") {
    c.levels = positive_int(1, 16);
  } else if (key == "max_levels") {
    c.max_levels = positive_int(1, 1000000);
  } else if (key == "marked_pairs") {
    c.marked_pairs = positive_int(1, 64);
  } else if (key == "half_interior_jump") {
    c.half_interior_jump = parse_bool(key, value);
  } else if (key == "warm_start") {
    c.warm_start = parse_bool(key, value);
  } else if (key == "out") {
    if (value.empty()) bad_value(key, value, "must not be empty");
    c.out = value;
  } else if (key == "vtk") {
    c.vtk = parse_bool(key, value);
  } else if (key == "dump_matrices") {
    c.dump_matrices = parse_bool(key, value);
  } else if (key == "threads") {
    c.threads = positive_int(0, 1024);
  } else if (key == "seed") {
    c.seed = parse_number<unsigned long>(key, value);
  } else {
    throw Error(ErrorKind::Config, "unknown configuration key '" + std::string(raw_key) + "'");
  }
}

std::string get_config_value(const RunConfig& c, std::string_view raw_key) {
  const std::string key = normalize_key(raw_key);
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  if (key == "domain") return std::string(to_string(c.domain));
  if (key == "k") return std::to_string(c.k);
  if (key == "theta") return format_double(c.theta);
  if (key == "gamma_c1") return format_double(c.gamma_c1);
  if (key == "n") return std::to_string(c.n);
  if (key == "mode") return std::string(to_string(c.mode));
  if (key == "max_dof") return c.max_dof ? std::to_string(*c.max_dof) : std::string();
  if (key == "eta_tol") return format_double(c.eta_tol);
  if (key == "nev") return std::to_string(c.nev);
  if (key == "levels") return std::to_string(c.levels);
  if (key == "max_levels") return std::to_string(c.max_levels);
  if (key == "marked_pairs") return std::to_string(c.marked_pairs);
  if (key == "half_interior_jump") return b(c.half_interior_jump);
  if (key == "warm_start") return b(c.warm_start);
  if (key == "out") return c.out;
  if (key == "vtk") return b(c.vtk);
  if (key == "dump_matrices") return b(c.dump_matrices);
  if (key == "threads") return std::to_string(c.threads);
  if (key == "seed") return std::to_string(c.seed);
  throw Error(ErrorKind::Config, "unknown configuration key '" + std::string(raw_key) + "'");
}

std::string format_config(const RunConfig& config) {
  std::string text;
  for (std::string_view key : config_keys()) {
    text += fmt::format("{}={}\n", key, get_config_value(config, key));
  }
  return text;
}

void load_config_file(const std::filesystem::path& path, RunConfig& config) {
  std::ifstream in(path);
  STOKES_AFEM_REQUIRE(in.good(), Config, "cannot read configuration file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");

  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Config, path.string() + ": " + e.what());
    }
    for (const auto& [key, value] : doc.items()) {
      if (!is_file_key(normalize_key(key))) {
        throw Error(ErrorKind::Config, "unknown configuration key '" + key + "'");
      }
      if (value.is_string()) {
        set_config_value(config, key, value.get<std::string>());
      } else if (value.is_number() || value.is_boolean()) {
        set_config_value(config, key, value.dump());
      } else {
        throw Error(ErrorKind::Config, "configuration key '" + key + "' needs a scalar value");
      }
    }
    return;
  }

  std::istringstream lines(text);
  std::string line;
  int number = 0;
  while (std::getline(lines, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Config,
                  fmt::format("{}:{}: expected key=value", path.string(), number));
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    if (!is_file_key(normalize_key(key))) {
      throw Error(ErrorKind::Config, "unknown configuration key '" + key + "'");
    }
    set_config_value(config, key, std::string_view(line).substr(eq + 1));
  }
}

namespace {

struct CliBindings {
  std::vector<std::pair<std::string, std::string>> text;
  std::vector<std::pair<std::string, bool>> flags;
  std::vector<CLI::Option*> text_options;
  std::vector<CLI::Option*> flag_options;
};

constexpr std::array<std::string_view, 4> kFlagKeys = {"half_interior_jump", "warm_start", "vtk",
                                                       "dump_matrices"};

bool is_flag_key(std::string_view key) {
  return std::find(kFlagKeys.begin(), kFlagKeys.end(), key) != kFlagKeys.end();
}

std::string option_name(std::string_view key) {
  std::string name = "--" + std::string(key);
  std::replace(name.begin(), name.end(), '_', '-');
  return name;
}

std::string_view describe(std::string_view key) {
  if (key == "domain") return "square | lshape | slit";
  if (key == "k") return "velocity degree 1, 2 or 3";
  if (key == "theta") return "Doerfler bulk parameter in (0, 1)";
  if (key == "gamma_c1") return "penalty constant, gamma = C1 k^2";
  if (key == "n") return "initial subdivisions per unit length";
  if (key == "mode") return "adaptive | uniform | source-verify";
  if (key == "max_dof") return "dof budget (adaptive default 200000)";
  if (key == "eta_tol") return "stop once eta^2 falls below this (0 = off)";
  if (key == "nev") return "eigenpairs to compute";
  if (key == "levels") return "meshes solved in the uniform modes";
  if (key == "max_levels") return "cap on adaptive iterations";
  if (key == "marked_pairs") return "leading eigenpairs whose indicators drive marking";
  if (key == "half_interior_jump") return "weight interior jump indicators by 1/2";
  if (key == "warm_start") return "seed each eigen solve with the previous eigenvector";
  if (key == "out") return "output directory";
  if (key == "vtk") return "write mesh_####.vtk and indicators_####.csv per level";
  if (key == "dump_matrices") return "write A, B, M per level in MatrixMarket format";
  if (key == "threads") return "worker threads (0: STOKES_AFEM_THREADS or 1)";
  if (key == "seed") return "seed for randomized checks";
  if (key == "config") return "key=value or JSON configuration file";
  return "";
}

void build_cli(CLI::App& app, CliBindings& b) {
  app.set_help_flag();
  app.allow_extras(false);
  b.text.reserve(kKeys.size());
  b.flags.reserve(kFlagKeys.size());
  for (std::string_view key : kKeys) {
    if (is_flag_key(key)) {
      b.flags.emplace_back(std::string(key), false);
      b.flag_options.push_back(
          app.add_flag(option_name(key), b.flags.back().second, std::string(describe(key))));
    } else {
      b.text.emplace_back(std::string(key), std::string());
      b.text_options.push_back(
          app.add_option(option_name(key), b.text.back().second, std::string(describe(key))));
    }
  }
}

}  // namespace

RunConfig parse_config(std::span<const std::string> args) {
  CLI::App app("stokes-afem run", "stokes-afem run");
  CliBindings b;
  build_cli(app, b);
  std::vector<const char*> argv{"stokes-afem-run"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::Config, e.what());
  }

  RunConfig config;
  for (std::size_t i = 0; i < b.text.size(); ++i) {
    if (b.text[i].first == "config" && b.text_options[i]->count() > 0) {
      load_config_file(b.text[i].second, config);
    }
  }
  for (std::size_t i = 0; i < b.text.size(); ++i) {
    if (b.text[i].first != "config" && b.text_options[i]->count() > 0) {
      set_config_value(config, b.text[i].first, b.text[i].second);
    }
  }
  for (std::size_t i = 0; i < b.flags.size(); ++i) {
    if (b.flag_options[i]->count() > 0) {
      set_config_value(config, b.flags[i].first, b.flags[i].second ? "true" : "false");
    }
  }
  return config;
}

std::string usage() {
  CLI::App app("Adaptive mixed DG solver for the Stokes eigenvalue problem", "stokes-afem run");
  CliBindings b;
  build_cli(app, b);
  return app.help();
}

namespace {

void log_line(const LogSink& log, LogLevel level, const std::string& text) {
  if (log) log(level, text);
}

AdaptiveOptions adaptive_options(const RunConfig& c) {
  AdaptiveOptions o;
  o.domain = c.domain;
  o.k = c.k;
  o.theta = c.theta;
  o.gamma_c1 = c.gamma_c1;
  o.n = c.n;
  o.eta_tol = c.eta_tol;
  o.nev = c.nev;
  o.marked_pairs = c.marked_pairs;
  o.max_levels = c.max_levels;
  o.half_interior_jump = c.half_interior_jump;
  o.warm_start = c.warm_start;
  o.threads = resolve_threads(c.threads);
  if (c.mode == RunMode::Adaptive) {
    o.max_dof = c.max_dof.value_or(kDefaultAdaptiveBudget);
  } else {
    o.max_dof = c.max_dof.value_or(std::numeric_limits<long>::max());
  }
  return o;
}

RunResult run_eigen(const RunConfig& c, const LogSink& log) {
  RunResult result;
  result.mode = c.mode;
  result.output = c.out;
  if (const auto ref = ReferenceRegistry::find(c.domain)) result.reference = ref->lambda1;

  const std::filesystem::path dir(c.out);
  ResultsCsv csv(dir / "results.csv");
  AdaptiveOptions o = adaptive_options(c);
  o.on_level = [&](const LevelState& s) {
    const IterationRecord& r = s.record;
    std::optional<double> err;
    if (result.reference) err = std::abs(r.lambda1 - *result.reference);
    csv.append(r.level, r.dofs, r.lambda1, r.eta2, err, r.seconds);
    if (c.vtk) {
      write_vtk(dir / numbered_name("mesh_", r.level, ".vtk"), s.mesh,
                indicator_cell_fields(s.indicators));
      write_indicators_csv(dir / numbered_name("indicators_", r.level, ".csv"), s.indicators);
    }
    if (c.dump_matrices) write_matrices(dir, numbered_name("level_", r.level, "_"), s.system);
    log_line(log, LogLevel::Info,
             fmt::format("level {:3d}  dof {:8d}  lambda1 {:.12f}  eta2 {:.4e}{}  marked {}  {:.2f}s",
                         r.level, r.dofs, r.lambda1, r.eta2,
                         err ? fmt::format("  err {:.4e}", *err) : std::string(), r.marked,
                         r.seconds));
  };
  result.trace = c.mode == RunMode::Adaptive ? adaptive_loop(o) : uniform_loop(o, c.levels);
  log_line(log, LogLevel::Info,
           fmt::format("stopped: {} after {} level(s)", to_string(result.trace.reason),
                       result.trace.records.size()));
  return result;
}

RunResult run_source_verify(const RunConfig& c, const LogSink& log) {
  const ManufacturedCase exact = manufactured_case("MS1");
  STOKES_AFEM_REQUIRE(c.domain == exact.domain, Config,
                      "source-verify uses the manufactured solution on the square");
  RunResult result;
  result.mode = c.mode;
  result.output = c.out;
  const std::filesystem::path dir(c.out);
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / "source_verify.csv";
  std::FILE* f = std::fopen(path.c_str(), "w");
  STOKES_AFEM_REQUIRE(f != nullptr, Io, "cannot open '" + path.string() + "' for writing");
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> guard(f, &std::fclose);
  fmt::print(f, "l,n,h,dof,err_dg,err_l2,err_p,eoc_dg,eoc_l2,eoc_p,seconds\n");
  std::fflush(f);

  AssemblyOptions ao;
  ao.gamma_c1 = c.gamma_c1;
  ao.threads = resolve_threads(c.threads);
  const long budget = c.max_dof.value_or(std::numeric_limits<long>::max());
  for (int level = 0; level < c.levels; ++level) {
    const auto t0 = std::chrono::steady_clock::now();
    SourceLevelRecord r;
    r.level = level;
    r.n = c.n << level;
    r.h = std::sqrt(2.0) / r.n;
    const SimplicialMesh mesh = generate_domain(c.domain, r.n);
    const BrokenSpaceLayout space(mesh, c.k);
    r.dofs = space.num_dofs();
    if (level > 0 && r.dofs > budget) break;
    const AssembledSystem system = assemble(mesh, space, ao);
    const Eigen::VectorXd load = assemble_load(exact.forcing, mesh, space);
    const SourceSolution sol = solve_source(system, load);
    const DgError e = dg_error(mesh, space, sol.velocity, sol.pressure, exact, system.gamma);
    r.velocity_dg = e.velocity_dg;
    r.velocity_l2 = e.velocity_l2;
    r.pressure_l2 = e.pressure_l2;
    r.seconds = seconds_since(t0);

    std::string eoc = ",,";
    if (!result.source.empty()) {
      const SourceLevelRecord& p = result.source.back();
      const double ratio = std::log(p.h / r.h);
      eoc = fmt::format("{:.4f},{:.4f},{:.4f}", std::log(p.velocity_dg / r.velocity_dg) / ratio,
                        std::log(p.velocity_l2 / r.velocity_l2) / ratio,
                        std::log(p.pressure_l2 / r.pressure_l2) / ratio);
    }
    fmt::print(f, "{},{},{:.9e},{},{:.9e},{:.9e},{:.9e},{},{:.3f}\n", r.level, r.n, r.h, r.dofs,
               r.velocity_dg, r.velocity_l2, r.pressure_l2, eoc, r.seconds);
    STOKES_AFEM_REQUIRE(std::fflush(f) == 0, Io, "failed writing source_verify.csv");
    log_line(log, LogLevel::Info,
             fmt::format("level {}  n {}  dof {}  err_dg {:.4e}  err_l2 {:.4e}  err_p {:.4e}",
                         r.level, r.n, r.dofs, r.velocity_dg, r.velocity_l2, r.pressure_l2));
    result.source.push_back(r);
  }
  result.trace.reason = Termination::Completed;
  return result;
}

}  // namespace

RunResult run(const RunConfig& config, const LogSink& log) {
  STOKES_AFEM_REQUIRE(config.marked_pairs <= config.nev || config.mode == RunMode::SourceVerify,
                      Config, "marked_pairs cannot exceed nev");
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  STOKES_AFEM_REQUIRE(!ec, Io, "cannot create output directory '" + config.out + "'");
  {
    std::ofstream snapshot(std::filesystem::path(config.out) / "config.txt");
    snapshot << format_config(config);
  }
  if (config.mode == RunMode::SourceVerify) return run_source_verify(config, log);
  return run_eigen(config, log);
}

}  // namespace stokes_afem
