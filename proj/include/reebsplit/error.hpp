#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace reebsplit {

enum class ErrorCode {
  // input / structure
  Parse,
  IndexOutOfRange,
  DegenerateTriangle,
  NonManifoldEdge,
  PinchedVertex,
  NonOrientable,
  Disconnected,
  IsolatedVertex,
  // field
  FlatZone,
  CriticalBoundary,
  InvalidFieldClass,
  // reeb / cut
  GenusNotZero,
  ValueCollision,
  EdgeNotFound,
  CycleNotLevel,
  CutNotSeparating,
  // trees and groups
  InvalidTree,
  SideNotInvariant,
  GroupTooLarge,
  // broken invariants: a group with no fixed point, a cut that does not separate
  InternalInconsistency,
};

std::string_view to_string(ErrorCode code);

// Exit code contract of the command line tool: 1 for invalid input, 3 for
// internal inconsistency.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace reebsplit
