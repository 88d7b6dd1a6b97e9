#include "stokes_afem.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "stokes_afem/app.hpp"
#include "stokes_afem/error.hpp"

struct stokes_afem_config {
  stokes_afem::RunConfig value;
};

struct stokes_afem_result {
  stokes_afem::RunResult value;
  std::string termination;
  std::string output;
};

namespace {

thread_local std::string last_error;

stokes_afem_status status_of(stokes_afem::ErrorKind kind) {
  using stokes_afem::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidArgument: return STOKES_AFEM_ERR_INVALID_ARGUMENT;
    case ErrorKind::Config: return STOKES_AFEM_ERR_CONFIG;
    case ErrorKind::Mesh: return STOKES_AFEM_ERR_MESH;
    case ErrorKind::Quadrature: return STOKES_AFEM_ERR_QUADRATURE;
    case ErrorKind::Solver: return STOKES_AFEM_ERR_SOLVER;
    case ErrorKind::Io: return STOKES_AFEM_ERR_IO;
  }
  return STOKES_AFEM_ERR_INTERNAL;
}

stokes_afem_status fail(stokes_afem_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Every entry point funnels exceptions through here; none may escape into C.
template <class F>
stokes_afem_status guarded(F&& body) {
  try {
    body();
    return STOKES_AFEM_OK;
  } catch (const stokes_afem::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(STOKES_AFEM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(STOKES_AFEM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(STOKES_AFEM_ERR_INTERNAL, "unknown error");
  }
}

#define STOKES_AFEM_CHECK_ARG(cond, what) \
  if (!(cond)) return fail(STOKES_AFEM_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* stokes_afem_version(void) { return STOKES_AFEM_VERSION; }

const char* stokes_afem_status_name(stokes_afem_status status) {
  switch (status) {
    case STOKES_AFEM_OK: return "ok";
    case STOKES_AFEM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case STOKES_AFEM_ERR_CONFIG: return "configuration error";
    case STOKES_AFEM_ERR_MESH: return "mesh error";
    case STOKES_AFEM_ERR_QUADRATURE: return "quadrature error";
    case STOKES_AFEM_ERR_SOLVER: return "solver error";
    case STOKES_AFEM_ERR_IO: return "i/o error";
    case STOKES_AFEM_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* stokes_afem_last_error(void) { return last_error.c_str(); }

const char* stokes_afem_usage(void) {
  static const std::string text = stokes_afem::usage();
  return text.c_str();
}

stokes_afem_status stokes_afem_config_create(stokes_afem_config** out) {
  STOKES_AFEM_CHECK_ARG(out, "null output pointer");
  *out = nullptr;
  return guarded([&] { *out = new stokes_afem_config{}; });
}

void stokes_afem_config_destroy(stokes_afem_config* config) { delete config; }

stokes_afem_status stokes_afem_config_parse_args(stokes_afem_config* config, int argc,
                                                 const char* const* argv) {
  STOKES_AFEM_CHECK_ARG(config, "null configuration");
  STOKES_AFEM_CHECK_ARG(argc >= 0 && (argc == 0 || argv), "null argument vector");
  return guarded([&] {
    std::vector<std::string> args;
    for (int i = 0; i < argc; ++i) {
      if (!argv[i]) throw stokes_afem::Error(stokes_afem::ErrorKind::InvalidArgument, "null argument");
      args.emplace_back(argv[i]);
    }
    config->value = stokes_afem::parse_config(args);
  });
}

stokes_afem_status stokes_afem_config_load_file(stokes_afem_config* config, const char* path) {
  STOKES_AFEM_CHECK_ARG(config && path, "null argument");
  return guarded([&] {
    stokes_afem::RunConfig updated = config->value;
    stokes_afem::load_config_file(path, updated);
    config->value = std::move(updated);
  });
}

stokes_afem_status stokes_afem_config_set(stokes_afem_config* config, const char* key,
                                          const char* value) {
  STOKES_AFEM_CHECK_ARG(config && key && value, "null argument");
  return guarded([&] { stokes_afem::set_config_value(config->value, key, value); });
}

stokes_afem_status stokes_afem_config_get(const stokes_afem_config* config, const char* key,
                                          char* buffer, size_t size, size_t* required) {
  STOKES_AFEM_CHECK_ARG(config && key, "null argument");
  STOKES_AFEM_CHECK_ARG(buffer || size == 0, "null buffer with nonzero size");
  std::string value;
  const stokes_afem_status s =
      guarded([&] { value = stokes_afem::get_config_value(config->value, key); });
  if (s != STOKES_AFEM_OK) return s;
  if (required) *required = value.size() + 1;
  if (size < value.size() + 1) {
    return fail(STOKES_AFEM_ERR_INVALID_ARGUMENT, "buffer too small for value of '" +
                                                      std::string(key) + "'");
  }
  std::memcpy(buffer, value.c_str(), value.size() + 1);
  return STOKES_AFEM_OK;
}

stokes_afem_status stokes_afem_run(const stokes_afem_config* config, stokes_afem_log_fn log,
                                   void* user_data, stokes_afem_result** out) {
  STOKES_AFEM_CHECK_ARG(config && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    stokes_afem::LogSink sink;
    if (log) {
      sink = [log, user_data](stokes_afem::LogLevel level, std::string_view text) {
        const std::string line(text);
        log(level == stokes_afem::LogLevel::Warning ? STOKES_AFEM_LOG_WARNING
                                                    : STOKES_AFEM_LOG_INFO,
            line.c_str(), user_data);
      };
    }
    auto result = std::make_unique<stokes_afem_result>();
    result->value = stokes_afem::run(config->value, sink);
    result->termination = std::string(stokes_afem::to_string(result->value.trace.reason));
    result->output = result->value.output.string();
    *out = result.release();
  });
}

void stokes_afem_result_destroy(stokes_afem_result* result) { delete result; }

size_t stokes_afem_result_level_count(const stokes_afem_result* result) {
  return result ? result->value.trace.records.size() : 0;
}

stokes_afem_status stokes_afem_result_level(const stokes_afem_result* result, size_t index,
                                            stokes_afem_level* out) {
  STOKES_AFEM_CHECK_ARG(result && out, "null argument");
  STOKES_AFEM_CHECK_ARG(index < result->value.trace.records.size(), "level index out of range");
  const stokes_afem::IterationRecord& r = result->value.trace.records[index];
  out->level = r.level;
  out->dofs = r.dofs;
  out->elements = r.elements;
  out->lambda1 = r.lambda1;
  out->eta2 = r.eta2;
  out->err_vs_ref = result->value.reference ? std::abs(r.lambda1 - *result->value.reference)
                                            : std::numeric_limits<double>::quiet_NaN();
  out->seconds = r.seconds;
  out->marked = r.marked;
  out->max_eta_distance = r.max_eta_distance;
  out->max_eta_diameter = r.max_eta_diameter;
  return STOKES_AFEM_OK;
}

size_t stokes_afem_result_source_count(const stokes_afem_result* result) {
  return result ? result->value.source.size() : 0;
}

stokes_afem_status stokes_afem_result_source_level(const stokes_afem_result* result, size_t index,
                                                   stokes_afem_source_level* out) {
  STOKES_AFEM_CHECK_ARG(result && out, "null argument");
  STOKES_AFEM_CHECK_ARG(index < result->value.source.size(), "level index out of range");
  const stokes_afem::SourceLevelRecord& r = result->value.source[index];
  out->level = r.level;
  out->n = r.n;
  out->h = r.h;
  out->dofs = r.dofs;
  out->err_dg = r.velocity_dg;
  out->err_l2 = r.velocity_l2;
  out->err_p = r.pressure_l2;
  out->seconds = r.seconds;
  return STOKES_AFEM_OK;
}

const char* stokes_afem_result_termination(const stokes_afem_result* result) {
  return result ? result->termination.c_str() : "";
}

const char* stokes_afem_result_output_dir(const stokes_afem_result* result) {
  return result ? result->output.c_str() : "";
}

}  // extern "C"
