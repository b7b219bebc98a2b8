#pragma once

#include <stdexcept>
#include <string>

namespace decosim {

// Base class for library errors. `name()` is the stable machine-readable
// error name the CLI prints on standard error and maps to exit codes.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define DECOSIM_ERROR_TYPE(Type)                          \
  class Type : public Error {                             \
   public:                                                \
    explicit Type(const std::string& what)                \
        : Error(#Type, what) {}                           \
  }

DECOSIM_ERROR_TYPE(DivergentIntegral);
DECOSIM_ERROR_TYPE(InvalidWeight);
DECOSIM_ERROR_TYPE(NonPositiveFrequency);
DECOSIM_ERROR_TYPE(GridMismatch);
DECOSIM_ERROR_TYPE(StepTooLarge);
DECOSIM_ERROR_TYPE(TruncationLeak);
DECOSIM_ERROR_TYPE(WindowTooNarrow);
DECOSIM_ERROR_TYPE(InvalidTarget);
DECOSIM_ERROR_TYPE(InvalidSize);
DECOSIM_ERROR_TYPE(BroadeningTooSmall);
DECOSIM_ERROR_TYPE(WindowOutsideGrid);
DECOSIM_ERROR_TYPE(QuadratureFailure);
DECOSIM_ERROR_TYPE(ConfigError);

#undef DECOSIM_ERROR_TYPE

}  // namespace decosim
