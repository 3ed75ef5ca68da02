#include "dualrate/errors.hpp"

namespace dualrate {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::InvalidEntry: return "InvalidEntry";
    case ErrorCode::AsymmetricMatrix: return "AsymmetricMatrix";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EigensolverNoConvergence: return "EigensolverNoConvergence";
    case ErrorCode::RootSolverNoConvergence: return "RootSolverNoConvergence";
    case ErrorCode::OutOfRegime: return "OutOfRegime";
    case ErrorCode::NoFiniteMinimum: return "NoFiniteMinimum";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace dualrate
