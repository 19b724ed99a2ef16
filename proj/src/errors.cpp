#include "impulse/errors.hpp"

namespace impulse {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return "Config";
    case ErrorCode::ExtinctionRegime: return "ExtinctionRegime";
    case ErrorCode::NoPersistenceWindow: return "NoPersistenceWindow";
    case ErrorCode::KernelUnsupported: return "KernelUnsupported";
    case ErrorCode::AnisotropyUnsupported: return "AnisotropyUnsupported";
    case ErrorCode::QuadratureSingularity: return "QuadratureSingularity";
    case ErrorCode::BoundaryContamination: return "BoundaryContamination";
    case ErrorCode::KernelGridMismatch: return "KernelGridMismatch";
    case ErrorCode::FrontNotFound: return "FrontNotFound";
    case ErrorCode::InsufficientGenerations: return "InsufficientGenerations";
    case ErrorCode::BracketInvalid: return "BracketInvalid";
    case ErrorCode::GridExhausted: return "GridExhausted";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config:
    case ErrorCode::KernelUnsupported:
    case ErrorCode::AnisotropyUnsupported:
      return 2;
    case ErrorCode::ExtinctionRegime:
    case ErrorCode::NoPersistenceWindow:
      return 3;
    default:
      return 4;
  }
}

}  // namespace impulse
