#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "ethervote/address.hpp"
#include "ethervote/crypto.hpp"

namespace ethervote {

enum class TxKind : std::uint8_t {
  ContractInit = 1,
  Register = 2,
  OtpIssue = 3,
  VoteCast = 4,
  PhaseAdvance = 5,
};

std::string_view to_string(TxKind kind) noexcept;
/// Throws Error(Malformed) for an unknown tag.
TxKind tx_kind_from_tag(std::uint8_t tag);

struct TransactionRecord {
  Digest tx_hash{};
  Address sender;
  std::uint64_t nonce = 0;
  TxKind kind = TxKind::ContractInit;
  Bytes payload;
  Timestamp timestamp = 0;
  Digest signature{};

  bool operator==(const TransactionRecord&) const = default;
};

/// Bytes covered by the signature: (sender, nonce, kind, payload, timestamp).
Bytes signing_bytes(const TransactionRecord& tx);
/// signing_bytes plus the signature field; this is what tx_hash covers.
Bytes encode_transaction(const TransactionRecord& tx);
TransactionRecord decode_transaction(ByteView bytes);
Digest compute_tx_hash(const TransactionRecord& tx);

/// Keyed digest SHA-256(secret || message).
Digest keyed_signature(const Digest& secret, ByteView message);

/// Builds, signs and hashes a transaction.
TransactionRecord make_transaction(const Address& sender, const Digest& secret, std::uint64_t nonce,
                                   TxKind kind, Bytes payload, Timestamp timestamp);

struct Block {
  std::uint64_t index = 0;
  Digest prev_hash{};
  Timestamp timestamp = 0;
  std::vector<Digest> tx_hashes;
  Digest block_hash{};

  bool operator==(const Block&) const = default;
};

Bytes encode_block_header(const Block& block);
Digest compute_block_hash(const Block& block);

struct BlockRef {
  std::uint64_t index = 0;
  Digest block_hash{};

  bool operator==(const BlockRef&) const = default;
};

struct VerificationReport {
  bool valid = true;
  std::optional<std::uint64_t> first_bad_index;
  std::string reason;
  std::uint64_t blocks_checked = 0;
  /// False when at least one sender's secret was unavailable to check.
  bool signatures_checked = true;
};

/// Source of account secrets for signature checks.
class KeyResolver {
 public:
  virtual ~KeyResolver() = default;
  virtual std::optional<Digest> secret_for(const Address& address) const = 0;
};

/// Append-only hash-chained ledger holding one transaction per block.
///
/// Appends are serialized behind a single writer lock; reads take a shared
/// lock and never observe a partially appended block. There is deliberately
/// no operation that removes or rewrites a block.
class Ledger {
 public:
  /// An uninitialized ledger: appends fail until a genesis exists.
  Ledger() = default;
  explicit Ledger(const KeyResolver* keys) : keys_(keys) {}

  Ledger(const Ledger&) = delete;
  Ledger& operator=(const Ledger&) = delete;

  static std::unique_ptr<Ledger> with_genesis(Timestamp genesis_time, const KeyResolver* keys);

  /// Decodes a serialized chain. Throws Error(Malformed) with the verification
  /// reason when the bytes do not verify.
  static std::unique_ptr<Ledger> from_bytes(ByteView bytes, const KeyResolver* keys);
  static std::unique_ptr<Ledger> load_file(const std::filesystem::path& path,
                                           const KeyResolver* keys);

  void init_genesis(Timestamp genesis_time);
  bool initialized() const;

  BlockRef append_transaction(const TransactionRecord& tx);

  /// Throws Error(NotFound).
  std::pair<TransactionRecord, BlockRef> get_transaction(const Digest& tx_hash) const;
  std::optional<std::pair<TransactionRecord, BlockRef>> find_transaction(const Digest& tx_hash) const;

  /// Throws Error(OutOfRange).
  Block get_block(std::uint64_t index) const;
  /// Transactions of one block, in order.
  std::vector<TransactionRecord> block_transactions(std::uint64_t index) const;

  VerificationReport verify_chain() const;

  std::uint64_t length() const;
  Digest head_hash() const;
  /// Last nonce used by `sender`, 0 if none.
  std::uint64_t last_nonce(const Address& sender) const;

  /// All transactions in chain order.
  std::vector<TransactionRecord> transactions() const;

  Bytes serialize() const;
  /// Writes the whole chain to `path`, then appends each new block there.
  void persist_to(const std::filesystem::path& path);

 private:
  struct Entry {
    Block header;
    std::vector<TransactionRecord> txs;
  };

  void append_entry_locked(Entry entry);

  const KeyResolver* keys_ = nullptr;
  mutable std::shared_mutex mutex_;
  std::vector<Entry> entries_;
  std::map<Digest, std::uint64_t> tx_index_;
  std::map<Address, std::uint64_t> nonces_;
  std::optional<std::ofstream> sink_;
};

/// Encodes one persisted block record (without its outer frame).
Bytes encode_block_record(const Block& header, const std::vector<TransactionRecord>& txs);

/// Verifies a serialized chain without trusting any of it: frames are decoded
/// one at a time and the first block that fails to decode, hash, link or
/// sequence is reported. Never throws on corrupt input.
VerificationReport verify_serialized_chain(ByteView bytes, const KeyResolver* keys = nullptr);

}  // namespace ethervote
