#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <thread>

#include "ethervote/codec.hpp"
#include "ethervote/error.hpp"
#include "ethervote/ledger.hpp"
#include "ethervote/payloads.hpp"
#include "support/fixtures.hpp"

using namespace ethervote;
using ethervote::testing::error_of;
using ethervote::testing::filled_address;
using ethervote::testing::filled_digest;
using ethervote::testing::StaticKeys;

namespace {

constexpr Timestamp kT0 = 1'700'000'000;

struct LedgerFixture : ::testing::Test {
  StaticKeys keys;
  Address alice = filled_address(0x11);
  Address bob = filled_address(0x33);
  Digest alice_secret = filled_digest(0x22);
  Digest bob_secret = filled_digest(0x44);
  std::unique_ptr<Ledger> ledger;

  void SetUp() override {
    keys.add(alice, alice_secret);
    keys.add(bob, bob_secret);
    ledger = Ledger::with_genesis(kT0 - 10, &keys);
  }

  TransactionRecord vote_tx(std::uint64_t nonce, std::uint64_t candidate = 1, Timestamp ts = kT0) {
    return make_transaction(alice, alice_secret, nonce, TxKind::VoteCast, encode_vote_payload(candidate), ts);
  }

  /// Appends n transactions alternating senders.
  void fill(int n) {
    std::uint64_t na = ledger->last_nonce(alice), nb = ledger->last_nonce(bob);
    for (int i = 0; i < n; ++i) {
      if (i % 2 == 0) {
        ledger->append_transaction(make_transaction(alice, alice_secret, ++na, TxKind::VoteCast,
                                                    encode_vote_payload(i), kT0 + i));
      } else {
        ledger->append_transaction(make_transaction(bob, bob_secret, ++nb, TxKind::PhaseAdvance,
                                                    encode_phase_payload(ElectionPhase::Voting), kT0 + i));
      }
    }
  }

  /// Frame start offsets of a serialized chain, walked from the length prefixes.
  static std::vector<std::size_t> frame_starts(const Bytes& chain) {
    std::vector<std::size_t> starts;
    std::size_t pos = 0;
    while (pos < chain.size()) {
      starts.push_back(pos);
      pos += 4 + get_be32(ByteView(chain).subspan(pos, 4));
    }
    return starts;
  }
};

}  // namespace

// Digests below were computed with Python hashlib over an independent
// re-implementation of the canonical encoding.
TEST_F(LedgerFixture, CanonicalDigestsMatchFrozenOracle) {
  auto tx = vote_tx(1);
  EXPECT_EQ(to_hex(tx.signature), "38660853e82acf3636d8f563489374b7b372bf0c1c45e8fc04e4bfccebd58487");
  EXPECT_EQ(to_hex(tx.tx_hash), "1420383e5d689e66be79c1094ef237a902be7b31fc8d26ecd44610da4739962c");
  EXPECT_EQ(to_hex(ledger->get_block(0).block_hash),
            "1ee6e67c74ffd4b72b6cae09c4deda059b8857e4b69bacdad871da7e1e903edd");
  auto ref = ledger->append_transaction(tx);
  EXPECT_EQ(to_hex(ref.block_hash), "fca5f42f33a69f2bd07b706d5ded8f45f3660dcf04c8c71699ec97944d7a60f2");
}

TEST_F(LedgerFixture, GenesisShape) {
  auto g = ledger->get_block(0);
  EXPECT_EQ(g.index, 0u);
  EXPECT_EQ(g.prev_hash, Digest{});
  EXPECT_TRUE(g.tx_hashes.empty());
  EXPECT_EQ(ledger->length(), 1u);
  EXPECT_TRUE(ledger->verify_chain().valid);
}

TEST_F(LedgerFixture, AppendLinksToGenesis) {
  const auto genesis = ledger->get_block(0);
  auto ref = ledger->append_transaction(vote_tx(1));
  EXPECT_EQ(ledger->length(), 2u);
  EXPECT_EQ(ref.index, 1u);
  auto b1 = ledger->get_block(1);
  EXPECT_EQ(b1.prev_hash, genesis.block_hash);
  EXPECT_EQ(b1.block_hash, ref.block_hash);
  ASSERT_EQ(b1.tx_hashes.size(), 1u);
  EXPECT_EQ(b1.tx_hashes[0], vote_tx(1).tx_hash);
}

TEST_F(LedgerFixture, ReusedNonceIsRejected) {
  ledger->append_transaction(vote_tx(1));
  EXPECT_EQ(error_of([&] { ledger->append_transaction(vote_tx(1, 2)); }), ErrorCode::BadNonce);
  EXPECT_EQ(error_of([&] { ledger->append_transaction(vote_tx(3)); }), ErrorCode::BadNonce);
  EXPECT_EQ(ledger->length(), 2u);
}

TEST_F(LedgerFixture, BadSignaturesAreRejected) {
  auto forged = make_transaction(alice, bob_secret, 1, TxKind::VoteCast, encode_vote_payload(1), kT0);
  EXPECT_EQ(error_of([&] { ledger->append_transaction(forged); }), ErrorCode::BadSignature);

  auto stranger = make_transaction(filled_address(0x99), alice_secret, 1, TxKind::VoteCast, {}, kT0);
  EXPECT_EQ(error_of([&] { ledger->append_transaction(stranger); }), ErrorCode::BadSignature);

  keys.add(Address{}, alice_secret);
  auto from_null = make_transaction(Address{}, alice_secret, 1, TxKind::VoteCast, {}, kT0);
  EXPECT_EQ(error_of([&] { ledger->append_transaction(from_null); }), ErrorCode::BadSignature);

  auto tampered = vote_tx(1);
  tampered.payload = encode_vote_payload(2);
  EXPECT_EQ(error_of([&] { ledger->append_transaction(tampered); }), ErrorCode::BadSignature);
  EXPECT_EQ(ledger->length(), 1u);
}

TEST(Ledger, UninitializedLedgerRejectsAppends) {
  StaticKeys keys;
  keys.add(filled_address(1), filled_digest(2));
  Ledger ledger(&keys);
  EXPECT_FALSE(ledger.initialized());
  auto tx = make_transaction(filled_address(1), filled_digest(2), 1, TxKind::VoteCast, {}, 0);
  EXPECT_EQ(error_of([&] { ledger.append_transaction(tx); }), ErrorCode::LedgerUninitialized);
  EXPECT_FALSE(ledger.verify_chain().valid);
  ledger.init_genesis(5);
  EXPECT_EQ(ledger.append_transaction(tx).index, 1u);
}

TEST_F(LedgerFixture, TransactionRoundTrip) {
  auto tx = vote_tx(1);
  auto ref = ledger->append_transaction(tx);
  auto [stored, block] = ledger->get_transaction(tx.tx_hash);
  EXPECT_EQ(stored, tx);
  EXPECT_EQ(stored.kind, TxKind::VoteCast);
  EXPECT_EQ(block, ref);
}

TEST_F(LedgerFixture, UnknownHashIsNotFound) {
  EXPECT_EQ(error_of([&] { ledger->get_transaction(Digest{}); }), ErrorCode::NotFound);
}

TEST_F(LedgerFixture, GetBlockBounds) {
  ledger->append_transaction(vote_tx(1));
  EXPECT_EQ(error_of([&] { ledger->get_block(ledger->length()); }), ErrorCode::OutOfRange);
  EXPECT_EQ(ledger->get_block(1).tx_hashes, std::vector<Digest>{vote_tx(1).tx_hash});
}

TEST_F(LedgerFixture, HundredAppendsVerify) {
  fill(100);
  EXPECT_EQ(ledger->length(), 101u);
  auto report = ledger->verify_chain();
  EXPECT_TRUE(report.valid);
  EXPECT_TRUE(report.signatures_checked);
  EXPECT_EQ(report.blocks_checked, 101u);
}

TEST_F(LedgerFixture, NoncesFormGaplessSequencePerSender) {
  fill(41);
  std::map<Address, std::vector<std::uint64_t>> seen;
  for (const auto& tx : ledger->transactions()) seen[tx.sender].push_back(tx.nonce);
  for (const auto& [sender, nonces] : seen) {
    for (std::size_t i = 0; i < nonces.size(); ++i) EXPECT_EQ(nonces[i], i + 1);
    EXPECT_EQ(ledger->last_nonce(sender), nonces.size());
  }
}

TEST_F(LedgerFixture, SameInputsGiveIdenticalRecordsAcrossRuns) {
  fill(10);
  StaticKeys keys2;
  keys2.add(alice, alice_secret);
  keys2.add(bob, bob_secret);
  auto other = Ledger::with_genesis(kT0 - 10, &keys2);
  std::swap(ledger, other);
  fill(10);
  std::swap(ledger, other);
  for (const auto& tx : ledger->transactions()) {
    EXPECT_EQ(other->get_transaction(tx.tx_hash).first, tx);
  }
  EXPECT_EQ(ledger->head_hash(), other->head_hash());
  EXPECT_EQ(ledger->serialize(), other->serialize());
}

TEST_F(LedgerFixture, FlippedPayloadByteInBlockFiveIsLocated) {
  fill(8);
  auto chain = ledger->serialize();
  const auto starts = frame_starts(chain);
  // find the payload inside block 5's transaction record and flip one byte
  const auto tx = ledger->block_transactions(5).at(0);
  const auto frame_begin = chain.begin() + static_cast<std::ptrdiff_t>(starts[5]);
  const auto frame_end = chain.begin() + static_cast<std::ptrdiff_t>(starts[6]);
  auto at = std::search(frame_begin, frame_end, tx.payload.begin(), tx.payload.end());
  ASSERT_NE(at, frame_end);
  *(at + static_cast<std::ptrdiff_t>(tx.payload.size()) - 1) ^= 0x01;

  auto report = verify_serialized_chain(chain, &keys);
  EXPECT_FALSE(report.valid);
  ASSERT_TRUE(report.first_bad_index);
  EXPECT_EQ(*report.first_bad_index, 5u);
  EXPECT_EQ(report.reason, "transaction hash mismatch");
}

TEST_F(LedgerFixture, EveryByteFlipOfShortChainIsDetectedAtItsBlock) {
  fill(5);
  const auto clean = ledger->serialize();
  ASSERT_TRUE(verify_serialized_chain(clean, &keys).valid);
  const auto starts = frame_starts(clean);
  std::size_t block = 0;
  for (std::size_t pos = 0; pos < clean.size(); ++pos) {
    while (block + 1 < starts.size() && pos >= starts[block + 1]) ++block;
    auto copy = clean;
    copy[pos] ^= 0xff;
    auto report = verify_serialized_chain(copy, &keys);
    ASSERT_FALSE(report.valid) << "byte " << pos;
    ASSERT_EQ(report.first_bad_index.value_or(999), block) << "byte " << pos << ": " << report.reason;
  }
}

TEST_F(LedgerFixture, TruncatedAndEmptyChainsAreInvalid) {
  fill(3);
  auto chain = ledger->serialize();
  chain.resize(chain.size() - 7);
  auto report = verify_serialized_chain(chain);
  EXPECT_FALSE(report.valid);
  EXPECT_EQ(report.first_bad_index.value_or(999), 3u);
  EXPECT_FALSE(verify_serialized_chain(Bytes{}).valid);
}

TEST_F(LedgerFixture, VerificationWithoutKeysSkipsOnlySignatures) {
  fill(4);
  auto report = verify_serialized_chain(ledger->serialize(), nullptr);
  EXPECT_TRUE(report.valid);
  EXPECT_FALSE(report.signatures_checked);
}

TEST_F(LedgerFixture, PersistAndReload) {
  const auto path = std::filesystem::temp_directory_path() / "ethervote_ledger_test.chain";
  std::filesystem::remove(path);
  fill(3);
  ledger->persist_to(path);
  fill(2);  // appended through the sink after persisting
  {
    auto loaded = Ledger::load_file(path, &keys);
    EXPECT_EQ(loaded->serialize(), ledger->serialize());
    EXPECT_EQ(loaded->last_nonce(alice), ledger->last_nonce(alice));
  }
  // corrupt one byte on disk: loading must refuse
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(40);
    f.put('\x7f');
  }
  EXPECT_EQ(error_of([&] { Ledger::load_file(path, &keys); }), ErrorCode::Malformed);
  EXPECT_EQ(error_of([&] { Ledger::load_file(path.string() + ".missing", &keys); }), ErrorCode::IoError);
  std::filesystem::remove(path);
}

TEST_F(LedgerFixture, ReadersNeverSeeHalfAppendedBlocks) {
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!done) {
      const auto n = ledger->length();
      auto b = ledger->get_block(n - 1);
      if (b.index != n - 1 || compute_block_hash(b) != b.block_hash) ++bad;
      if (!ledger->verify_chain().valid) ++bad;
    }
  });
  fill(200);
  done = true;
  reader.join();
  EXPECT_EQ(bad.load(), 0);
}
