#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cotorra {

enum class ErrorCode {
  DuplicateId,
  UnknownNode,
  DuplicateLink,
  SelfLoop,
  Unreachable,
  UnknownRobot,
  NegativeSpeed,
  InvalidArgument,
  UnknownLink,
  InvalidFactor,
  WrongKind,
  OutOfRange,
  HandoverInProgress,
  BrokenPath,
  EndpointMismatch,
  Unattached,
  VnfNotPlaced,
  NonMonotonicTime,
  BadRange,
  UnknownSelector,
  IoError,
  EmptyStore,
  DuplicateName,
  PluginPanic,
  FederationTimeout,
  ParseError,
  ValidationError,
  RuntimeFault,
  MissingTrace,
  SchemaMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the simulator carries one of the codes above so
// callers (and the instruction log) can report it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cotorra
