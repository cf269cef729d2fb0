#include "ethervote/contract.hpp"
#include "ethervote/error.hpp"
#include "ethervote/payloads.hpp"

namespace ethervote {

namespace {

/// Applies one transaction to `s`; returns a reason when the chain records a
/// transition the contract could not have accepted.
std::string apply(ContractState& s, const TransactionRecord& tx) {
  if (tx.kind == TxKind::ContractInit) {
    if (s.initialized) return "second ContractInit";
    auto config = decode_init_payload(tx.payload);
    try {
      validate(config);
    } catch (const Error& e) {
      return e.what();
    }
    if (!config.trusted.contains(tx.sender)) return "ContractInit from untrusted sender";
    s.initialized = true;
    s.config = std::move(config);
    s.phase = ElectionPhase::Setup;
    return {};
  }
  if (!s.initialized) return "transaction before ContractInit";
  const bool trusted = s.config.trusted.contains(tx.sender);

  switch (tx.kind) {
    case TxKind::PhaseAdvance: {
      if (!trusted) return "PhaseAdvance from untrusted sender";
      if (s.phase == ElectionPhase::Closed) return "PhaseAdvance after Closed";
      auto next = decode_phase_payload(tx.payload);
      if (static_cast<int>(next) != static_cast<int>(s.phase) + 1) return "phase skipped";
      s.phase = next;
      return {};
    }
    case TxKind::Register: {
      if (!trusted) return "Register from untrusted sender";
      if (s.phase != ElectionPhase::Registration) return "Register outside Registration";
      auto p = decode_register_payload(tx.payload);
      if (p.voter.is_null() || s.config.trusted.contains(p.voter)) return "ineligible voter address";
      if (s.voters.contains(p.voter)) return "voter registered twice";
      s.voters.emplace(p.voter, VoterRecord{p.voter, p.commitment, VoterStatus::Registered, {}, {}});
      return {};
    }
    case TxKind::OtpIssue: {
      if (s.phase != ElectionPhase::Voting) return "OtpIssue outside Voting";
      auto it = s.voters.find(tx.sender);
      if (it == s.voters.end()) return "OtpIssue for unregistered sender";
      if (it->second.status == VoterStatus::Voted) return "OtpIssue after vote";
      auto p = decode_otp_payload(tx.payload);
      if (p.issued_at != tx.timestamp) return "OtpIssue time differs from tx time";
      it->second.status = VoterStatus::OtpIssued;
      it->second.otp_digest = p.otp_digest;
      it->second.otp_issued_at = p.issued_at;
      return {};
    }
    case TxKind::VoteCast: {
      if (s.phase != ElectionPhase::Voting) return "VoteCast outside Voting";
      auto it = s.voters.find(tx.sender);
      if (it == s.voters.end()) return "VoteCast from unregistered sender";
      auto& v = it->second;
      if (v.status == VoterStatus::Voted) return "second VoteCast from one address";
      if (v.status != VoterStatus::OtpIssued) return "VoteCast without OTP";
      if (tx.timestamp > *v.otp_issued_at + static_cast<Timestamp>(s.config.otp_window_seconds)) {
        return "VoteCast after OTP window";
      }
      const auto id = decode_vote_payload(tx.payload);
      auto c = std::find_if(s.config.candidates.begin(), s.config.candidates.end(),
                            [&](const Candidate& x) { return x.id == id; });
      if (c == s.config.candidates.end()) return "VoteCast for unknown candidate";
      ++c->vote_count;
      v.status = VoterStatus::Voted;
      v.otp_digest.reset();
      v.otp_issued_at.reset();
      return {};
    }
    case TxKind::ContractInit:
      break;
  }
  return "unknown transaction kind";
}

}  // namespace

ReplayResult replay_chain(const Ledger& ledger) {
  ReplayResult result;
  const auto length = ledger.length();
  for (std::uint64_t i = 1; i < length; ++i) {
    for (const auto& tx : ledger.block_transactions(i)) {
      std::string reason;
      try {
        reason = apply(result.state, tx);
      } catch (const Error& e) {
        reason = std::string("undecodable payload: ") + e.what();
      }
      if (!reason.empty()) {
        result.consistent = false;
        result.first_bad_index = i;
        result.reason = std::move(reason);
        return result;
      }
    }
  }
  return result;
}

}  // namespace ethervote
