#pragma once

#include <stdexcept>
#include <string>

namespace stokes_afem {

enum class ErrorKind {
  InvalidArgument,
  Config,
  Mesh,
  Quadrature,
  Solver,
  Io,
};

/// Exception type thrown by every core module. The kind maps one-to-one onto
/// the status codes of the C interface.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

#define STOKES_AFEM_REQUIRE(cond, kind, msg)                                   \
  do {                                                                         \
    if (!(cond)) throw ::stokes_afem::Error(::stokes_afem::ErrorKind::kind, (msg)); \
  } while (0)

}  // namespace stokes_afem
