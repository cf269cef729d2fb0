#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ethervote/accounts.hpp"
#include "ethervote/address.hpp"
#include "ethervote/clock.hpp"
#include "ethervote/crypto.hpp"
#include "ethervote/identity.hpp"
#include "ethervote/ledger.hpp"
#include "ethervote/otp_gateway.hpp"

namespace ethervote {

inline constexpr std::uint64_t kDefaultOtpWindowSeconds = 300;
inline constexpr int kOtpDigits = 6;

enum class ElectionPhase : std::uint8_t { Setup = 0, Registration = 1, Voting = 2, Closed = 3 };
std::string_view to_string(ElectionPhase phase) noexcept;

struct Candidate {
  std::uint64_t id = 0;
  std::string name;
  std::uint64_t vote_count = 0;

  bool operator==(const Candidate&) const = default;
};

struct ElectionConfig {
  std::set<Address> trusted;
  std::vector<Candidate> candidates;
  std::uint64_t otp_window_seconds = kDefaultOtpWindowSeconds;

  /// Candidate ids follow list order starting at 0.
  static ElectionConfig make(std::set<Address> trusted, const std::vector<std::string>& names,
                             std::uint64_t otp_window_seconds = kDefaultOtpWindowSeconds);

  bool operator==(const ElectionConfig&) const = default;
};

/// Throws Error(InvalidConfig).
void validate(const ElectionConfig& config);

enum class VoterStatus : std::uint8_t { Registered = 0, OtpIssued = 1, Voted = 2 };
std::string_view to_string(VoterStatus status) noexcept;

struct VoterRecord {
  Address address;
  IdentityCommitment commitment;
  VoterStatus status = VoterStatus::Registered;
  std::optional<Digest> otp_digest;
  std::optional<Timestamp> otp_issued_at;

  bool operator==(const VoterRecord&) const = default;
};

struct TallyEntry {
  std::uint64_t candidate_id = 0;
  std::string name;
  std::uint64_t votes = 0;

  bool operator==(const TallyEntry&) const = default;
};

struct TallySnapshot {
  std::vector<TallyEntry> counts;
  std::uint64_t total_votes = 0;
  ElectionPhase phase = ElectionPhase::Setup;

  bool operator==(const TallySnapshot&) const = default;
};

/// Everything the contract knows. Live execution and chain replay must
/// produce equal values.
struct ContractState {
  bool initialized = false;
  ElectionConfig config;
  ElectionPhase phase = ElectionPhase::Setup;
  std::map<Address, VoterRecord> voters;

  bool operator==(const ContractState&) const = default;

  TallySnapshot tally() const;
};

/// Canonical byte image of a state, for bit-level comparisons.
Bytes encode_state(const ContractState& state);

struct TxReceipt {
  Digest tx_hash{};
  BlockRef block;
};

struct OtpIssueResult {
  TxReceipt tx;
  DeliveryReceipt delivery;
};

struct VoteReceiptView {
  Digest tx_hash{};
  std::uint64_t block_index = 0;
  Address sender;
  std::uint64_t candidate_id = 0;

  bool operator==(const VoteReceiptView&) const = default;
};

/// SHA-256(code || address bytes); what goes on chain instead of the code.
Digest otp_digest(std::string_view code, const Address& address);

/// The election state machine. Every accepted state change is one signed
/// ledger transaction; rejected calls append nothing.
///
/// Mutations are serialized by one writer lock; results() and
/// verify_receipt() take a shared lock and see only fully applied states.
class Contract {
 public:
  /// Replays whatever the ledger already holds, so a contract can resume from
  /// a loaded chain. Throws Error(Malformed) when the chain does not replay.
  Contract(Ledger& ledger, OtpGateway& gateway, const AccountStore& accounts, Drbg otp_rng,
           Clock clock);

  Contract(const Contract&) = delete;
  Contract& operator=(const Contract&) = delete;

  TxReceipt init_election(const Address& sender, const ElectionConfig& config);
  TxReceipt advance_phase(const Address& sender);
  TxReceipt register_citizen(const Address& sender, const Address& voter, const PersonalData& data);
  /// The plaintext code goes to the gateway only.
  OtpIssueResult authenticate(const Address& sender, const PersonalData& data, Timestamp now);
  /// The returned tx hash is the voter's receipt.
  TxReceipt cast_vote(const Address& sender, std::uint64_t candidate_id, std::string_view otp_code,
                      Timestamp now);

  /// Trusted senders always; anyone (including no sender) once Closed.
  TallySnapshot results(const std::optional<Address>& sender) const;
  VoteReceiptView verify_receipt(const Digest& tx_hash) const;

  ContractState state() const;
  ElectionPhase phase() const;
  bool is_trusted(const Address& address) const;
  std::optional<VoterRecord> voter(const Address& address) const;

 private:
  TxReceipt append(const Address& sender, TxKind kind, Bytes payload, Timestamp timestamp);
  void require_initialized() const;
  std::string generate_code();

  Ledger& ledger_;
  OtpGateway& gateway_;
  const AccountStore& accounts_;
  Drbg otp_rng_;
  Clock clock_;

  mutable std::shared_mutex mutex_;
  ContractState state_;
};

struct ReplayResult {
  ContractState state;
  bool consistent = true;
  std::optional<std::uint64_t> first_bad_index;
  std::string reason;
};

/// Rebuilds contract state from genesis, re-checking every transition rule
/// that is decidable from chain data alone (authorization, phase, ordering,
/// OTP window). OTP correctness itself is not decidable since codes never
/// reach the chain.
ReplayResult replay_chain(const Ledger& ledger);

}  // namespace ethervote
