#include "ethervote/ledger.hpp"

#include <iterator>
#include <mutex>

#include "ethervote/codec.hpp"
#include "ethervote/error.hpp"

namespace ethervote {

std::string_view to_string(TxKind kind) noexcept {
  switch (kind) {
    case TxKind::ContractInit: return "ContractInit";
    case TxKind::Register: return "Register";
    case TxKind::OtpIssue: return "OtpIssue";
    case TxKind::VoteCast: return "VoteCast";
    case TxKind::PhaseAdvance: return "PhaseAdvance";
  }
  return "Unknown";
}

TxKind tx_kind_from_tag(std::uint8_t tag) {
  if (tag < 1 || tag > 5) throw Error(ErrorCode::Malformed, "unknown transaction kind");
  return static_cast<TxKind>(tag);
}

namespace {

CanonicalWriter write_signed_fields(const TransactionRecord& tx) {
  CanonicalWriter w;
  w.field(tx.sender)
      .u64(tx.nonce)
      .u8(static_cast<std::uint8_t>(tx.kind))
      .field(ByteView(tx.payload))
      .i64(tx.timestamp);
  return w;
}

}  // namespace

Bytes signing_bytes(const TransactionRecord& tx) { return write_signed_fields(tx).take(); }

Bytes encode_transaction(const TransactionRecord& tx) {
  auto w = write_signed_fields(tx);
  w.field(tx.signature);
  return std::move(w).take();
}

TransactionRecord decode_transaction(ByteView bytes) {
  CanonicalReader r(bytes);
  TransactionRecord tx;
  tx.sender = r.address();
  tx.nonce = r.u64();
  tx.kind = tx_kind_from_tag(r.u8());
  auto payload = r.field();
  tx.payload.assign(payload.begin(), payload.end());
  tx.timestamp = r.i64();
  tx.signature = r.digest();
  r.expect_end();
  tx.tx_hash = compute_tx_hash(tx);
  return tx;
}

Digest compute_tx_hash(const TransactionRecord& tx) { return sha256(encode_transaction(tx)); }

Digest keyed_signature(const Digest& secret, ByteView message) {
  Sha256 h;
  h.update(ByteView(secret)).update(message);
  return h.finish();
}

TransactionRecord make_transaction(const Address& sender, const Digest& secret, std::uint64_t nonce,
                                   TxKind kind, Bytes payload, Timestamp timestamp) {
  TransactionRecord tx;
  tx.sender = sender;
  tx.nonce = nonce;
  tx.kind = kind;
  tx.payload = std::move(payload);
  tx.timestamp = timestamp;
  tx.signature = keyed_signature(secret, signing_bytes(tx));
  tx.tx_hash = compute_tx_hash(tx);
  return tx;
}

Bytes encode_block_header(const Block& block) {
  Bytes hashes;
  hashes.reserve(block.tx_hashes.size() * 32);
  for (const auto& h : block.tx_hashes) hashes.insert(hashes.end(), h.begin(), h.end());
  CanonicalWriter w;
  w.u64(block.index).field(block.prev_hash).i64(block.timestamp).field(ByteView(hashes));
  return std::move(w).take();
}

Digest compute_block_hash(const Block& block) { return sha256(encode_block_header(block)); }

Bytes encode_block_record(const Block& header, const std::vector<TransactionRecord>& txs) {
  Bytes out = encode_block_header(header);
  CanonicalWriter tail;
  tail.field(header.block_hash).u64(txs.size());
  for (const auto& tx : txs) {
    tail.field(ByteView(encode_transaction(tx))).field(tx.tx_hash);
  }
  const auto& t = tail.bytes();
  out.insert(out.end(), t.begin(), t.end());
  return out;
}

namespace {

struct DecodedBlock {
  Block header;
  std::vector<TransactionRecord> txs;
};

DecodedBlock decode_block_record(ByteView record) {
  CanonicalReader r(record);
  DecodedBlock b;
  b.header.index = r.u64();
  b.header.prev_hash = r.digest();
  b.header.timestamp = r.i64();
  auto hashes = r.field();
  if (hashes.size() % 32 != 0) throw Error(ErrorCode::Malformed, "tx hash list width");
  for (std::size_t i = 0; i < hashes.size(); i += 32) {
    Digest d{};
    std::copy_n(hashes.begin() + static_cast<std::ptrdiff_t>(i), 32, d.begin());
    b.header.tx_hashes.push_back(d);
  }
  b.header.block_hash = r.digest();
  const auto count = r.u64();
  if (count != b.header.tx_hashes.size()) throw Error(ErrorCode::Malformed, "tx count mismatch");
  for (std::uint64_t i = 0; i < count; ++i) {
    auto tx_bytes = r.field();
    auto stored_hash = r.digest();
    auto tx = decode_transaction(tx_bytes);
    // decode recomputes tx_hash; keep the stored one so verification compares them
    tx.tx_hash = stored_hash;
    b.txs.push_back(std::move(tx));
  }
  r.expect_end();
  return b;
}

/// Sequential checker shared by in-memory and serialized verification.
class ChainChecker {
 public:
  explicit ChainChecker(const KeyResolver* keys) : keys_(keys) {}

  /// Returns a failure reason, or an empty string when the block is sound.
  std::string check(std::uint64_t expected_index, const Block& header,
                    const std::vector<TransactionRecord>& txs) {
    if (header.index != expected_index) return "block index does not match height";
    if (expected_index == 0) {
      if (header.prev_hash != Digest{}) return "genesis prev_hash is not zero";
      if (!txs.empty() || !header.tx_hashes.empty()) return "genesis carries transactions";
    } else {
      if (header.prev_hash != prev_hash_) return "prev_hash does not link to predecessor";
      if (txs.size() != 1) return "block must hold exactly one transaction";
    }
    if (header.tx_hashes.size() != txs.size()) return "tx hash list does not match transactions";
    for (std::size_t i = 0; i < txs.size(); ++i) {
      const auto& tx = txs[i];
      if (compute_tx_hash(tx) != tx.tx_hash) return "transaction hash mismatch";
      if (header.tx_hashes[i] != tx.tx_hash) return "block lists a different transaction";
      if (tx.sender.is_null()) return "null sender";
      auto& last = nonces_[tx.sender];
      if (tx.nonce != last + 1) return "sender nonce out of sequence";
      last = tx.nonce;
      std::optional<Digest> secret = keys_ ? keys_->secret_for(tx.sender) : std::nullopt;
      if (secret) {
        if (keyed_signature(*secret, signing_bytes(tx)) != tx.signature) return "bad signature";
      } else {
        signatures_checked_ = false;
      }
    }
    if (compute_block_hash(header) != header.block_hash) return "block hash mismatch";
    prev_hash_ = header.block_hash;
    return {};
  }

  bool signatures_checked() const { return signatures_checked_; }

 private:
  const KeyResolver* keys_;
  Digest prev_hash_{};
  std::map<Address, std::uint64_t> nonces_;
  bool signatures_checked_ = true;
};

VerificationReport decode_chain(ByteView bytes, const KeyResolver* keys,
                                std::vector<DecodedBlock>* out) {
  VerificationReport report;
  ChainChecker checker(keys);
  std::size_t pos = 0;
  std::uint64_t index = 0;
  auto fail = [&](std::string reason) {
    report.valid = false;
    report.first_bad_index = index;
    report.reason = std::move(reason);
    report.blocks_checked = index;
    return report;
  };
  if (bytes.empty()) return fail("empty chain (no genesis)");
  while (pos < bytes.size()) {
    if (bytes.size() - pos < 4) return fail("truncated frame header");
    const std::uint32_t len = get_be32(bytes.subspan(pos, 4));
    pos += 4;
    if (bytes.size() - pos < len) return fail("truncated block record");
    DecodedBlock block;
    try {
      block = decode_block_record(bytes.subspan(pos, len));
    } catch (const Error& e) {
      return fail(std::string("undecodable block: ") + e.what());
    }
    pos += len;
    if (auto reason = checker.check(index, block.header, block.txs); !reason.empty()) {
      return fail(std::move(reason));
    }
    if (out) out->push_back(std::move(block));
    ++index;
  }
  report.blocks_checked = index;
  report.signatures_checked = checker.signatures_checked();
  return report;
}

void write_frame(Bytes& out, const Bytes& record) {
  put_be32(out, static_cast<std::uint32_t>(record.size()));
  out.insert(out.end(), record.begin(), record.end());
}

}  // namespace

VerificationReport verify_serialized_chain(ByteView bytes, const KeyResolver* keys) {
  return decode_chain(bytes, keys, nullptr);
}

std::unique_ptr<Ledger> Ledger::with_genesis(Timestamp genesis_time, const KeyResolver* keys) {
  auto ledger = std::make_unique<Ledger>(keys);
  ledger->init_genesis(genesis_time);
  return ledger;
}

std::unique_ptr<Ledger> Ledger::from_bytes(ByteView bytes, const KeyResolver* keys) {
  std::vector<DecodedBlock> blocks;
  auto report = decode_chain(bytes, keys, &blocks);
  if (!report.valid) {
    throw Error(ErrorCode::Malformed, "chain fails verification at block " +
                                          std::to_string(*report.first_bad_index) + ": " +
                                          report.reason);
  }
  auto ledger = std::make_unique<Ledger>(keys);
  for (auto& b : blocks) ledger->append_entry_locked({std::move(b.header), std::move(b.txs)});
  return ledger;
}

std::unique_ptr<Ledger> Ledger::load_file(const std::filesystem::path& path,
                                          const KeyResolver* keys) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  auto ledger = from_bytes(bytes, keys);
  ledger->sink_.emplace(path, std::ios::binary | std::ios::app);
  if (!*ledger->sink_) throw Error(ErrorCode::IoError, "cannot append to " + path.string());
  return ledger;
}

void Ledger::init_genesis(Timestamp genesis_time) {
  std::unique_lock lock(mutex_);
  if (!entries_.empty()) throw Error(ErrorCode::AlreadyInitialized, "ledger already has a genesis");
  Block genesis;
  genesis.index = 0;
  genesis.timestamp = genesis_time;
  genesis.block_hash = compute_block_hash(genesis);
  append_entry_locked({genesis, {}});
}

bool Ledger::initialized() const {
  std::shared_lock lock(mutex_);
  return !entries_.empty();
}

void Ledger::append_entry_locked(Entry entry) {
  const auto index = entry.header.index;
  for (const auto& tx : entry.txs) {
    tx_index_[tx.tx_hash] = index;
    nonces_[tx.sender] = tx.nonce;
  }
  if (sink_) {
    Bytes frame;
    write_frame(frame, encode_block_record(entry.header, entry.txs));
    sink_->write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
    sink_->flush();
  }
  entries_.push_back(std::move(entry));
}

BlockRef Ledger::append_transaction(const TransactionRecord& tx) {
  std::unique_lock lock(mutex_);
  if (entries_.empty()) throw Error(ErrorCode::LedgerUninitialized);
  if (tx.sender.is_null()) throw Error(ErrorCode::BadSignature, "null address cannot sign");
  std::optional<Digest> secret = keys_ ? keys_->secret_for(tx.sender) : std::nullopt;
  if (!secret || keyed_signature(*secret, signing_bytes(tx)) != tx.signature) {
    throw Error(ErrorCode::BadSignature);
  }
  if (compute_tx_hash(tx) != tx.tx_hash) throw Error(ErrorCode::Malformed, "tx_hash mismatch");
  auto it = nonces_.find(tx.sender);
  const std::uint64_t last = it == nonces_.end() ? 0 : it->second;
  if (tx.nonce != last + 1) throw Error(ErrorCode::BadNonce);

  Block block;
  block.index = entries_.size();
  block.prev_hash = entries_.back().header.block_hash;
  block.timestamp = tx.timestamp;
  block.tx_hashes = {tx.tx_hash};
  block.block_hash = compute_block_hash(block);
  BlockRef ref{block.index, block.block_hash};
  append_entry_locked({std::move(block), {tx}});
  return ref;
}

std::optional<std::pair<TransactionRecord, BlockRef>> Ledger::find_transaction(
    const Digest& tx_hash) const {
  std::shared_lock lock(mutex_);
  auto it = tx_index_.find(tx_hash);
  if (it == tx_index_.end()) return std::nullopt;
  const auto& entry = entries_[it->second];
  for (const auto& tx : entry.txs) {
    if (tx.tx_hash == tx_hash) {
      return std::make_pair(tx, BlockRef{entry.header.index, entry.header.block_hash});
    }
  }
  return std::nullopt;
}

std::pair<TransactionRecord, BlockRef> Ledger::get_transaction(const Digest& tx_hash) const {
  auto found = find_transaction(tx_hash);
  if (!found) throw Error(ErrorCode::NotFound, "no transaction " + to_hex(tx_hash));
  return *found;
}

Block Ledger::get_block(std::uint64_t index) const {
  std::shared_lock lock(mutex_);
  if (index >= entries_.size()) throw Error(ErrorCode::OutOfRange, "block " + std::to_string(index));
  return entries_[index].header;
}

std::vector<TransactionRecord> Ledger::block_transactions(std::uint64_t index) const {
  std::shared_lock lock(mutex_);
  if (index >= entries_.size()) throw Error(ErrorCode::OutOfRange, "block " + std::to_string(index));
  return entries_[index].txs;
}

VerificationReport Ledger::verify_chain() const {
  std::shared_lock lock(mutex_);
  VerificationReport report;
  if (entries_.empty()) {
    report.valid = false;
    report.first_bad_index = 0;
    report.reason = "empty chain (no genesis)";
    return report;
  }
  ChainChecker checker(keys_);
  for (std::uint64_t i = 0; i < entries_.size(); ++i) {
    if (auto reason = checker.check(i, entries_[i].header, entries_[i].txs); !reason.empty()) {
      report.valid = false;
      report.first_bad_index = i;
      report.reason = std::move(reason);
      report.blocks_checked = i;
      return report;
    }
  }
  report.blocks_checked = entries_.size();
  report.signatures_checked = checker.signatures_checked();
  return report;
}

std::uint64_t Ledger::length() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

Digest Ledger::head_hash() const {
  std::shared_lock lock(mutex_);
  if (entries_.empty()) throw Error(ErrorCode::LedgerUninitialized);
  return entries_.back().header.block_hash;
}

std::uint64_t Ledger::last_nonce(const Address& sender) const {
  std::shared_lock lock(mutex_);
  auto it = nonces_.find(sender);
  return it == nonces_.end() ? 0 : it->second;
}

std::vector<TransactionRecord> Ledger::transactions() const {
  std::shared_lock lock(mutex_);
  std::vector<TransactionRecord> out;
  for (const auto& e : entries_) out.insert(out.end(), e.txs.begin(), e.txs.end());
  return out;
}

Bytes Ledger::serialize() const {
  std::shared_lock lock(mutex_);
  Bytes out;
  for (const auto& e : entries_) write_frame(out, encode_block_record(e.header, e.txs));
  return out;
}

void Ledger::persist_to(const std::filesystem::path& path) {
  std::unique_lock lock(mutex_);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& e : entries_) {
    Bytes frame;
    write_frame(frame, encode_block_record(e.header, e.txs));
    out.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
  }
  out.close();
  sink_.emplace(path, std::ios::binary | std::ios::app);
  if (!*sink_) throw Error(ErrorCode::IoError, "cannot append to " + path.string());
}

}  // namespace ethervote
