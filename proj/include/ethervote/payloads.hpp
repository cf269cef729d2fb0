#pragma once

#include "ethervote/contract.hpp"

namespace ethervote {

// Canonical payload encodings, one per transaction kind. Decoders throw
// Error(Malformed).

Bytes encode_init_payload(const ElectionConfig& config);
ElectionConfig decode_init_payload(ByteView payload);

struct RegisterPayload {
  Address voter;
  IdentityCommitment commitment;
};
Bytes encode_register_payload(const Address& voter, const IdentityCommitment& commitment);
RegisterPayload decode_register_payload(ByteView payload);

struct OtpIssuePayload {
  Digest otp_digest{};
  Timestamp issued_at = 0;
};
Bytes encode_otp_payload(const Digest& otp_digest, Timestamp issued_at);
OtpIssuePayload decode_otp_payload(ByteView payload);

Bytes encode_vote_payload(std::uint64_t candidate_id);
std::uint64_t decode_vote_payload(ByteView payload);

Bytes encode_phase_payload(ElectionPhase phase);
ElectionPhase decode_phase_payload(ByteView payload);

}  // namespace ethervote
