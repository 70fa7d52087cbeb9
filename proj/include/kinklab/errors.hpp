#pragma once

#include <stdexcept>
#include <string>

namespace kinklab {

// Bad input or configuration. The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical method failed on valid input. Exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define KINKLAB_ERROR(Name, Base)                                   \
  struct Name : Base {                                              \
    explicit Name(const std::string& what) : Base(#Name ": " + what) {} \
  };

KINKLAB_ERROR(GridTooSmall, ValidationError)
KINKLAB_ERROR(UnsupportedDimension, ValidationError)
KINKLAB_ERROR(DecayTooSlow, ValidationError)
KINKLAB_ERROR(BranchCut, ValidationError)
KINKLAB_ERROR(ConfigError, ValidationError)

KINKLAB_ERROR(NonConvergence, NumericalError)
KINKLAB_ERROR(NoConvergence, NumericalError)
KINKLAB_ERROR(StiffBlowup, NumericalError)
KINKLAB_ERROR(DegenerateSolutions, NumericalError)
KINKLAB_ERROR(NoRoot, NumericalError)
KINKLAB_ERROR(AtPole, NumericalError)
KINKLAB_ERROR(BlowUp, NumericalError)

#undef KINKLAB_ERROR

}  // namespace kinklab
