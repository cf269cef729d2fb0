#include "ethervote/contract.hpp"

#include <cstdio>
#include <mutex>

#include "ethervote/codec.hpp"
#include "ethervote/error.hpp"
#include "ethervote/payloads.hpp"

namespace ethervote {

std::string_view to_string(ElectionPhase phase) noexcept {
  switch (phase) {
    case ElectionPhase::Setup: return "Setup";
    case ElectionPhase::Registration: return "Registration";
    case ElectionPhase::Voting: return "Voting";
    case ElectionPhase::Closed: return "Closed";
  }
  return "Unknown";
}

std::string_view to_string(VoterStatus status) noexcept {
  switch (status) {
    case VoterStatus::Registered: return "Registered";
    case VoterStatus::OtpIssued: return "OtpIssued";
    case VoterStatus::Voted: return "Voted";
  }
  return "Unknown";
}

ElectionConfig ElectionConfig::make(std::set<Address> trusted, const std::vector<std::string>& names,
                                    std::uint64_t otp_window_seconds) {
  ElectionConfig config;
  config.trusted = std::move(trusted);
  config.otp_window_seconds = otp_window_seconds;
  for (std::size_t i = 0; i < names.size(); ++i) config.candidates.push_back({i, names[i], 0});
  return config;
}

void validate(const ElectionConfig& config) {
  if (config.trusted.empty()) throw Error(ErrorCode::InvalidConfig, "no trusted addresses");
  for (const auto& a : config.trusted) {
    if (a.is_null()) throw Error(ErrorCode::InvalidConfig, "null trusted address");
  }
  if (config.candidates.empty()) throw Error(ErrorCode::InvalidConfig, "no candidates");
  std::set<std::uint64_t> ids;
  for (const auto& c : config.candidates) {
    if (!ids.insert(c.id).second) throw Error(ErrorCode::InvalidConfig, "duplicate candidate id");
    if (c.vote_count != 0) throw Error(ErrorCode::InvalidConfig, "non-zero initial count");
  }
  if (config.otp_window_seconds == 0) throw Error(ErrorCode::InvalidConfig, "otp window must be positive");
}

TallySnapshot ContractState::tally() const {
  TallySnapshot snap;
  snap.phase = phase;
  for (const auto& c : config.candidates) {
    snap.counts.push_back({c.id, c.name, c.vote_count});
    snap.total_votes += c.vote_count;
  }
  return snap;
}

Bytes encode_state(const ContractState& state) {
  CanonicalWriter w;
  w.u8(state.initialized ? 1 : 0);
  w.field(ByteView(encode_init_payload(state.config)));
  w.u8(static_cast<std::uint8_t>(state.phase));
  w.u64(state.config.candidates.size());
  for (const auto& c : state.config.candidates) w.u64(c.id).u64(c.vote_count);
  w.u64(state.voters.size());
  for (const auto& [address, v] : state.voters) {
    w.field(address).field(v.commitment.digest).u8(static_cast<std::uint8_t>(v.status));
    w.u8(v.otp_digest ? 1 : 0);
    if (v.otp_digest) w.field(*v.otp_digest);
    w.u8(v.otp_issued_at ? 1 : 0);
    if (v.otp_issued_at) w.i64(*v.otp_issued_at);
  }
  return std::move(w).take();
}

Digest otp_digest(std::string_view code, const Address& address) {
  Sha256 h;
  h.update(code).update(ByteView(address.bytes));
  return h.finish();
}

Contract::Contract(Ledger& ledger, OtpGateway& gateway, const AccountStore& accounts, Drbg otp_rng,
                   Clock clock)
    : ledger_(ledger), gateway_(gateway), accounts_(accounts), otp_rng_(std::move(otp_rng)),
      clock_(std::move(clock)) {
  if (!ledger_.initialized()) throw Error(ErrorCode::LedgerUninitialized);
  if (ledger_.length() > 1) {
    auto replay = replay_chain(ledger_);
    if (!replay.consistent) {
      throw Error(ErrorCode::Malformed, "chain does not replay at block " +
                                            std::to_string(replay.first_bad_index.value_or(0)) + ": " +
                                            replay.reason);
    }
    state_ = std::move(replay.state);
  }
}

TxReceipt Contract::append(const Address& sender, TxKind kind, Bytes payload, Timestamp timestamp) {
  const Digest secret = accounts_.require_secret(sender);
  auto tx = make_transaction(sender, secret, ledger_.last_nonce(sender) + 1, kind, std::move(payload),
                             timestamp);
  auto ref = ledger_.append_transaction(tx);
  return {tx.tx_hash, ref};
}

void Contract::require_initialized() const {
  if (!state_.initialized) throw Error(ErrorCode::NotInitialized);
}

std::string Contract::generate_code() {
  char buf[kOtpDigits + 1];
  std::snprintf(buf, sizeof buf, "%06llu", static_cast<unsigned long long>(otp_rng_.uniform(1'000'000)));
  return buf;
}

TxReceipt Contract::init_election(const Address& sender, const ElectionConfig& config) {
  std::unique_lock lock(mutex_);
  if (state_.initialized) throw Error(ErrorCode::AlreadyInitialized);
  validate(config);
  if (!config.trusted.contains(sender)) throw Error(ErrorCode::Unauthorized, "sender is not a trusted address");
  auto receipt = append(sender, TxKind::ContractInit, encode_init_payload(config), clock_());
  state_.initialized = true;
  state_.config = config;
  state_.phase = ElectionPhase::Setup;
  state_.voters.clear();
  return receipt;
}

TxReceipt Contract::advance_phase(const Address& sender) {
  std::unique_lock lock(mutex_);
  require_initialized();
  if (!state_.config.trusted.contains(sender)) throw Error(ErrorCode::Unauthorized);
  if (state_.phase == ElectionPhase::Closed) throw Error(ErrorCode::AlreadyClosed);
  const auto next = static_cast<ElectionPhase>(static_cast<std::uint8_t>(state_.phase) + 1);
  auto receipt = append(sender, TxKind::PhaseAdvance, encode_phase_payload(next), clock_());
  state_.phase = next;
  return receipt;
}

TxReceipt Contract::register_citizen(const Address& sender, const Address& voter, const PersonalData& data) {
  std::unique_lock lock(mutex_);
  require_initialized();
  if (!state_.config.trusted.contains(sender)) throw Error(ErrorCode::Unauthorized);
  if (state_.phase != ElectionPhase::Registration) throw Error(ErrorCode::WrongPhase);
  if (voter.is_null()) throw Error(ErrorCode::InvalidAddress, "null voter address");
  if (state_.config.trusted.contains(voter)) {
    throw Error(ErrorCode::Unauthorized, "trusted addresses cannot register as voters");
  }
  if (state_.voters.contains(voter)) throw Error(ErrorCode::AlreadyRegistered);
  IdentityCommitment commitment;
  try {
    commitment = commit(data);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidPersonalData, std::string(to_string(e.code())));
  }
  if (!is_valid_phone(data.phone)) throw Error(ErrorCode::InvalidPersonalData, "phone");
  accounts_.require_secret(sender);

  gateway_.register_channel(voter, data.phone);
  auto receipt = append(sender, TxKind::Register, encode_register_payload(voter, commitment), clock_());
  state_.voters.emplace(voter, VoterRecord{voter, commitment, VoterStatus::Registered, {}, {}});
  return receipt;
}

OtpIssueResult Contract::authenticate(const Address& sender, const PersonalData& data, Timestamp now) {
  std::unique_lock lock(mutex_);
  require_initialized();
  if (state_.phase != ElectionPhase::Voting) throw Error(ErrorCode::WrongPhase);
  auto it = state_.voters.find(sender);
  if (it == state_.voters.end()) throw Error(ErrorCode::NotRegistered);
  auto& record = it->second;
  if (record.status == VoterStatus::Voted) throw Error(ErrorCode::AlreadyVoted);
  IdentityCommitment presented;
  try {
    presented = commit(data);
  } catch (const Error&) {
    throw Error(ErrorCode::AuthFailed);
  }
  if (presented != record.commitment) throw Error(ErrorCode::AuthFailed);
  accounts_.require_secret(sender);

  const std::string code = generate_code();
  const Digest digest = otp_digest(code, sender);
  auto receipt = append(sender, TxKind::OtpIssue, encode_otp_payload(digest, now), now);
  record.status = VoterStatus::OtpIssued;
  record.otp_digest = digest;
  record.otp_issued_at = now;
  auto delivery = gateway_.deliver(sender, code, now);
  return {receipt, delivery};
}

TxReceipt Contract::cast_vote(const Address& sender, std::uint64_t candidate_id, std::string_view otp_code,
                              Timestamp now) {
  std::unique_lock lock(mutex_);
  require_initialized();
  if (state_.phase != ElectionPhase::Voting) throw Error(ErrorCode::WrongPhase);
  auto it = state_.voters.find(sender);
  if (it == state_.voters.end()) throw Error(ErrorCode::NotRegistered);
  auto& record = it->second;
  if (record.status == VoterStatus::Voted) throw Error(ErrorCode::AlreadyVoted);
  if (record.status != VoterStatus::OtpIssued) throw Error(ErrorCode::NoOtpIssued);
  auto candidate = std::find_if(state_.config.candidates.begin(), state_.config.candidates.end(),
                                [&](const Candidate& c) { return c.id == candidate_id; });
  if (candidate == state_.config.candidates.end()) throw Error(ErrorCode::UnknownCandidate);
  if (otp_digest(otp_code, sender) != *record.otp_digest) throw Error(ErrorCode::OtpInvalid);
  // closed interval: issued_at + window is still valid
  if (now > *record.otp_issued_at + static_cast<Timestamp>(state_.config.otp_window_seconds)) {
    throw Error(ErrorCode::OtpExpired);
  }
  auto receipt = append(sender, TxKind::VoteCast, encode_vote_payload(candidate_id), now);
  ++candidate->vote_count;
  record.status = VoterStatus::Voted;
  record.otp_digest.reset();
  record.otp_issued_at.reset();
  return receipt;
}

TallySnapshot Contract::results(const std::optional<Address>& sender) const {
  std::shared_lock lock(mutex_);
  require_initialized();
  if (state_.phase != ElectionPhase::Closed && !(sender && state_.config.trusted.contains(*sender))) {
    throw Error(ErrorCode::Unauthorized, "results are public only after the election closes");
  }
  return state_.tally();
}

VoteReceiptView Contract::verify_receipt(const Digest& tx_hash) const {
  auto [tx, block] = ledger_.get_transaction(tx_hash);
  if (tx.kind != TxKind::VoteCast) throw Error(ErrorCode::NotAVote);
  return {tx.tx_hash, block.index, tx.sender, decode_vote_payload(tx.payload)};
}

ContractState Contract::state() const {
  std::shared_lock lock(mutex_);
  return state_;
}

ElectionPhase Contract::phase() const {
  std::shared_lock lock(mutex_);
  return state_.phase;
}

bool Contract::is_trusted(const Address& address) const {
  std::shared_lock lock(mutex_);
  return state_.config.trusted.contains(address);
}

std::optional<VoterRecord> Contract::voter(const Address& address) const {
  std::shared_lock lock(mutex_);
  auto it = state_.voters.find(address);
  if (it == state_.voters.end()) return std::nullopt;
  return it->second;
}

}  // namespace ethervote
