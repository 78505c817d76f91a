#pragma once

#include <stdexcept>
#include <string>

namespace focksynth {

/// Failure categories. The CLI maps these onto process exit codes.
enum class ErrorKind {
  domain,
  truncation,
  degenerate_qubit,
  non_positive_drive,
  zero_bessel,
  phase_unsolvable,
  collision_detected,
  step_size_underflow,
  positivity_loss,
  picture_mismatch,
  eigensolve_failure,
  config,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define FOCKSYNTH_DEFINE_ERROR(Name, Kind)                                   \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

FOCKSYNTH_DEFINE_ERROR(DomainError, domain)
FOCKSYNTH_DEFINE_ERROR(TruncationError, truncation)
FOCKSYNTH_DEFINE_ERROR(DegenerateQubit, degenerate_qubit)
FOCKSYNTH_DEFINE_ERROR(NonPositiveDrive, non_positive_drive)
FOCKSYNTH_DEFINE_ERROR(ZeroBessel, zero_bessel)
FOCKSYNTH_DEFINE_ERROR(PhaseUnsolvable, phase_unsolvable)
FOCKSYNTH_DEFINE_ERROR(CollisionDetected, collision_detected)
FOCKSYNTH_DEFINE_ERROR(StepSizeUnderflow, step_size_underflow)
FOCKSYNTH_DEFINE_ERROR(PositivityLoss, positivity_loss)
FOCKSYNTH_DEFINE_ERROR(PictureMismatch, picture_mismatch)
FOCKSYNTH_DEFINE_ERROR(EigensolveFailure, eigensolve_failure)
FOCKSYNTH_DEFINE_ERROR(ConfigError, config)

#undef FOCKSYNTH_DEFINE_ERROR

}  // namespace focksynth
