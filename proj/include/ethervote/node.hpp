#pragma once

#include <filesystem>
#include <memory>
#include <optional>

#include "ethervote/accounts.hpp"
#include "ethervote/clock.hpp"
#include "ethervote/contract.hpp"
#include "ethervote/ledger.hpp"
#include "ethervote/otp_gateway.hpp"

namespace ethervote {

/// One in-process election stack: wallet vault, chain, OTP gateway with the
/// mock transport, and the contract on top. Every random stream is derived
/// from `seed`, so two nodes built with the same seed and clock readings
/// produce identical chains.
class ElectionNode {
 public:
  ElectionNode(Clock clock, std::uint64_t seed, Timestamp genesis_time);

  /// Resumes from `chain_path` when it exists (verifying and replaying it,
  /// plus the off-chain sidecars), otherwise starts a new chain there.
  static std::unique_ptr<ElectionNode> open(const std::filesystem::path& chain_path, Clock clock,
                                            std::optional<std::uint64_t> seed);

  ElectionNode(const ElectionNode&) = delete;
  ElectionNode& operator=(const ElectionNode&) = delete;

  AccountStore& accounts() { return *accounts_; }
  const AccountStore& accounts() const { return *accounts_; }
  Ledger& ledger() { return *ledger_; }
  const Ledger& ledger() const { return *ledger_; }
  OtpGateway& gateway() { return *gateway_; }
  MockTransport& inbox() { return *transport_; }
  const MockTransport& inbox() const { return *transport_; }
  Contract& contract() { return *contract_; }
  const Contract& contract() const { return *contract_; }
  const Clock& clock() const { return clock_; }

  /// Writes account and channel sidecars when the node is file-backed.
  void save_offchain() const;

 private:
  ElectionNode(Clock clock, Drbg account_rng, Drbg otp_rng);

  static std::filesystem::path accounts_path(const std::filesystem::path& chain);
  static std::filesystem::path channels_path(const std::filesystem::path& chain);

  Clock clock_;
  std::unique_ptr<AccountStore> accounts_;
  std::shared_ptr<MockTransport> transport_;
  std::unique_ptr<OtpGateway> gateway_;
  std::unique_ptr<Ledger> ledger_;
  std::unique_ptr<Contract> contract_;
  Drbg otp_rng_;
  std::optional<std::filesystem::path> chain_path_;
};

}  // namespace ethervote
