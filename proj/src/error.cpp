#include "reebsplit/error.hpp"

namespace reebsplit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorCode::PinchedVertex: return "PinchedVertex";
    case ErrorCode::NonOrientable: return "NonOrientable";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::FlatZone: return "FlatZone";
    case ErrorCode::CriticalBoundary: return "CriticalBoundary";
    case ErrorCode::InvalidFieldClass: return "InvalidFieldClass";
    case ErrorCode::GenusNotZero: return "GenusNotZero";
    case ErrorCode::ValueCollision: return "ValueCollision";
    case ErrorCode::EdgeNotFound: return "EdgeNotFound";
    case ErrorCode::CycleNotLevel: return "CycleNotLevel";
    case ErrorCode::CutNotSeparating: return "CutNotSeparating";
    case ErrorCode::InvalidTree: return "InvalidTree";
    case ErrorCode::SideNotInvariant: return "SideNotInvariant";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InternalInconsistency:
    case ErrorCode::CutNotSeparating:
      return 3;
    default:
      return 1;
  }
}

}  // namespace reebsplit
