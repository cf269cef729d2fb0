#include "ethervote/payloads.hpp"

#include "ethervote/codec.hpp"
#include "ethervote/error.hpp"

namespace ethervote {

Bytes encode_init_payload(const ElectionConfig& config) {
  CanonicalWriter w;
  w.u64(config.otp_window_seconds).u64(config.trusted.size());
  for (const auto& a : config.trusted) w.field(a);
  w.u64(config.candidates.size());
  for (const auto& c : config.candidates) w.u64(c.id).field(c.name);
  return std::move(w).take();
}

ElectionConfig decode_init_payload(ByteView payload) {
  CanonicalReader r(payload);
  ElectionConfig config;
  config.otp_window_seconds = r.u64();
  const auto trusted = r.u64();
  for (std::uint64_t i = 0; i < trusted; ++i) {
    if (!config.trusted.insert(r.address()).second) throw Error(ErrorCode::Malformed, "duplicate trusted address");
  }
  const auto candidates = r.u64();
  for (std::uint64_t i = 0; i < candidates; ++i) {
    Candidate c;
    c.id = r.u64();
    c.name = r.text();
    config.candidates.push_back(std::move(c));
  }
  r.expect_end();
  return config;
}

Bytes encode_register_payload(const Address& voter, const IdentityCommitment& commitment) {
  CanonicalWriter w;
  w.field(voter).field(commitment.digest);
  return std::move(w).take();
}

RegisterPayload decode_register_payload(ByteView payload) {
  CanonicalReader r(payload);
  RegisterPayload p;
  p.voter = r.address();
  p.commitment.digest = r.digest();
  r.expect_end();
  return p;
}

Bytes encode_otp_payload(const Digest& otp_digest, Timestamp issued_at) {
  CanonicalWriter w;
  w.field(otp_digest).i64(issued_at);
  return std::move(w).take();
}

OtpIssuePayload decode_otp_payload(ByteView payload) {
  CanonicalReader r(payload);
  OtpIssuePayload p;
  p.otp_digest = r.digest();
  p.issued_at = r.i64();
  r.expect_end();
  return p;
}

Bytes encode_vote_payload(std::uint64_t candidate_id) {
  CanonicalWriter w;
  w.u64(candidate_id);
  return std::move(w).take();
}

std::uint64_t decode_vote_payload(ByteView payload) {
  CanonicalReader r(payload);
  auto id = r.u64();
  r.expect_end();
  return id;
}

Bytes encode_phase_payload(ElectionPhase phase) {
  CanonicalWriter w;
  w.u8(static_cast<std::uint8_t>(phase));
  return std::move(w).take();
}

ElectionPhase decode_phase_payload(ByteView payload) {
  CanonicalReader r(payload);
  auto tag = r.u8();
  r.expect_end();
  if (tag > static_cast<std::uint8_t>(ElectionPhase::Closed)) throw Error(ErrorCode::Malformed, "phase tag");
  return static_cast<ElectionPhase>(tag);
}

}  // namespace ethervote
