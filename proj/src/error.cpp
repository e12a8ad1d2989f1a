#include "cotorra/error.hpp"

namespace cotorra {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::DuplicateLink: return "DuplicateLink";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::Unreachable: return "Unreachable";
    case ErrorCode::UnknownRobot: return "UnknownRobot";
    case ErrorCode::NegativeSpeed: return "NegativeSpeed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownLink: return "UnknownLink";
    case ErrorCode::InvalidFactor: return "InvalidFactor";
    case ErrorCode::WrongKind: return "WrongKind";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::HandoverInProgress: return "HandoverInProgress";
    case ErrorCode::BrokenPath: return "BrokenPath";
    case ErrorCode::EndpointMismatch: return "EndpointMismatch";
    case ErrorCode::Unattached: return "Unattached";
    case ErrorCode::VnfNotPlaced: return "VnfNotPlaced";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::UnknownSelector: return "UnknownSelector";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyStore: return "EmptyStore";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::PluginPanic: return "PluginPanic";
    case ErrorCode::FederationTimeout: return "FederationTimeout";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::RuntimeFault: return "RuntimeFault";
    case ErrorCode::MissingTrace: return "MissingTrace";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
  }
  return "Unknown";
}

}  // namespace cotorra
