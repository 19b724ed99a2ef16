#pragma once

#include <stdexcept>
#include <string>

namespace impulse {

enum class ErrorCode {
  Config,
  ExtinctionRegime,
  NoPersistenceWindow,
  KernelUnsupported,
  AnisotropyUnsupported,
  QuadratureSingularity,
  BoundaryContamination,
  KernelGridMismatch,
  FrontNotFound,
  InsufficientGenerations,
  BracketInvalid,
  GridExhausted,
};

class ModelError : public std::runtime_error {
 public:
  ModelError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

const char* error_code_name(ErrorCode code);

// Process exit codes: 0 ok, 2 configuration, 3 growth regime, 4 numerical.
int exit_code_for(ErrorCode code);

}  // namespace impulse
