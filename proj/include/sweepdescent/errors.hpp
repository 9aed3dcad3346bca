#pragma once

#include <stdexcept>
#include <string>

namespace sweepdescent {

/// Base of every numerical failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SWEEPDESCENT_ERROR(Name)         \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

SWEEPDESCENT_ERROR(NonConvergence);
SWEEPDESCENT_ERROR(DegenerateNormal);
SWEEPDESCENT_ERROR(EmptySample);
SWEEPDESCENT_ERROR(EmptySublevel);
SWEEPDESCENT_ERROR(DomainError);
SWEEPDESCENT_ERROR(BisectionFailure);
SWEEPDESCENT_ERROR(OutOfReach);
SWEEPDESCENT_ERROR(DegenerateDirection);
SWEEPDESCENT_ERROR(ThetaGuard);
SWEEPDESCENT_ERROR(LevelUnderflow);
SWEEPDESCENT_ERROR(MissingConstants);
SWEEPDESCENT_ERROR(UnboundedSet);
SWEEPDESCENT_ERROR(Unsupported);

#undef SWEEPDESCENT_ERROR

/// Invalid user input (bad function name, malformed option, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A failure inside a time-stepping loop, tagged with the step index.
class StepFailure : public Error {
 public:
  StepFailure(int step, const std::string& what)
      : Error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

}  // namespace sweepdescent
