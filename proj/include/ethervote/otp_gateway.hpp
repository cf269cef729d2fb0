#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ethervote/address.hpp"
#include "ethervote/crypto.hpp"

namespace ethervote {

struct DeliveryChannel {
  Address address;
  std::string phone;
};

struct DeliveryReceipt {
  Address address;
  /// Every digit but the last two replaced by '*'.
  std::string masked_destination;
  Timestamp delivered_at = 0;
  std::uint32_t attempt = 0;
};

std::string mask_phone(std::string_view phone);

/// Where a production SMS sender would attach.
class DeliveryTransport {
 public:
  virtual ~DeliveryTransport() = default;
  virtual void send(const DeliveryChannel& channel, const std::string& code, Timestamp at) = 0;
};

/// In-memory transport. Its inbox is the only place codes are kept, and it is
/// meant for tests, simulations and the gated developer panel.
class MockTransport : public DeliveryTransport {
 public:
  void send(const DeliveryChannel& channel, const std::string& code, Timestamp at) override;

  std::optional<std::string> last(const Address& address) const;
  std::vector<std::string> history(const Address& address) const;
  /// Every code ever delivered, in delivery order.
  std::vector<std::string> all_codes() const;

 private:
  mutable std::mutex mutex_;
  std::map<Address, std::vector<std::string>> inbox_;
  std::vector<std::string> all_;
};

/// Off-chain oracle bridge: holds the phone registry and forwards codes.
/// The contract only ever writes to it.
class OtpGateway {
 public:
  explicit OtpGateway(std::shared_ptr<DeliveryTransport> transport);

  /// Throws Error(DuplicateChannel).
  void register_channel(const Address& address, std::string phone);
  /// Throws Error(NoDeliveryChannel).
  DeliveryReceipt deliver(const Address& address, const std::string& code, Timestamp now);

  bool has_channel(const Address& address) const;
  std::size_t channel_count() const;
  /// Operator-facing log lines; masked destinations only.
  std::vector<std::string> operator_log() const;

  void save_channels(const std::filesystem::path& path) const;
  void load_channels(const std::filesystem::path& path);

 private:
  struct Slot {
    DeliveryChannel channel;
    std::uint32_t attempts = 0;
  };

  std::shared_ptr<DeliveryTransport> transport_;
  mutable std::mutex mutex_;
  std::map<Address, Slot> channels_;
  std::vector<std::string> log_;
};

}  // namespace ethervote
