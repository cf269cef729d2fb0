#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ethervote {

/// Stable error identifiers. Names double as wire codes in API bodies and
/// run reports, so renaming one is a protocol change.
enum class ErrorCode {
  // encoding / ledger
  Malformed,
  InvalidAddress,
  BadSignature,
  BadNonce,
  LedgerUninitialized,
  NotFound,
  OutOfRange,
  IoError,
  // identity
  EmptyField,
  SeparatorInField,
  InvalidEncoding,
  // contract
  AlreadyInitialized,
  NotInitialized,
  Unauthorized,
  InvalidConfig,
  AlreadyClosed,
  WrongPhase,
  AlreadyRegistered,
  InvalidPersonalData,
  NotRegistered,
  AuthFailed,
  AlreadyVoted,
  NoOtpIssued,
  OtpInvalid,
  OtpExpired,
  UnknownCandidate,
  NotAVote,
  // gateway
  DuplicateChannel,
  NoDeliveryChannel,
  // accounts / service / harness
  UnknownAccount,
  BadRequest,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  explicit Error(ErrorCode code);
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ethervote
