#include "ethervote/error.hpp"

namespace ethervote {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::InvalidAddress: return "InvalidAddress";
    case ErrorCode::BadSignature: return "BadSignature";
    case ErrorCode::BadNonce: return "BadNonce";
    case ErrorCode::LedgerUninitialized: return "LedgerUninitialized";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyField: return "EmptyField";
    case ErrorCode::SeparatorInField: return "SeparatorInField";
    case ErrorCode::InvalidEncoding: return "InvalidEncoding";
    case ErrorCode::AlreadyInitialized: return "AlreadyInitialized";
    case ErrorCode::NotInitialized: return "NotInitialized";
    case ErrorCode::Unauthorized: return "Unauthorized";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::AlreadyClosed: return "AlreadyClosed";
    case ErrorCode::WrongPhase: return "WrongPhase";
    case ErrorCode::AlreadyRegistered: return "AlreadyRegistered";
    case ErrorCode::InvalidPersonalData: return "InvalidPersonalData";
    case ErrorCode::NotRegistered: return "NotRegistered";
    case ErrorCode::AuthFailed: return "AuthFailed";
    case ErrorCode::AlreadyVoted: return "AlreadyVoted";
    case ErrorCode::NoOtpIssued: return "NoOtpIssued";
    case ErrorCode::OtpInvalid: return "OtpInvalid";
    case ErrorCode::OtpExpired: return "OtpExpired";
    case ErrorCode::UnknownCandidate: return "UnknownCandidate";
    case ErrorCode::NotAVote: return "NotAVote";
    case ErrorCode::DuplicateChannel: return "DuplicateChannel";
    case ErrorCode::NoDeliveryChannel: return "NoDeliveryChannel";
    case ErrorCode::UnknownAccount: return "UnknownAccount";
    case ErrorCode::BadRequest: return "BadRequest";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code) : std::runtime_error(std::string(to_string(code))), code_(code) {}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace ethervote
