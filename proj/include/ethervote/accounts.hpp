#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include "ethervote/address.hpp"
#include "ethervote/crypto.hpp"
#include "ethervote/ledger.hpp"

namespace ethervote {

/// A wallet account: the address other parties see and the secret that signs.
struct Account {
  Address address;
  Digest secret{};
};

Address address_from_secret(const Digest& secret);

/// Password-locked wallet vault standing in for the browser wallet. Holds the
/// signing secrets, so it is also the ledger's key resolver.
class AccountStore : public KeyResolver {
 public:
  explicit AccountStore(Drbg rng);

  struct Created {
    Account account;
    std::string password;
  };

  /// Fresh random secret and password.
  Created create_account();
  /// Adds an account with a caller-chosen password; the secret is random.
  Account create_account(std::string_view password);

  bool unlock(const Address& address, std::string_view password) const;
  bool contains(const Address& address) const;
  std::optional<Digest> secret_for(const Address& address) const override;
  /// Throws Error(UnknownAccount).
  Digest require_secret(const Address& address) const;
  std::size_t size() const;

  /// Line format: address secret salt password-hash (hex).
  void save(const std::filesystem::path& path) const;
  void load(const std::filesystem::path& path);

 private:
  struct Entry {
    Digest secret{};
    Digest salt{};
    Digest password_hash{};
  };

  Account insert_locked(std::string_view password);

  mutable std::mutex mutex_;
  Drbg rng_;
  std::map<Address, Entry> entries_;
};

}  // namespace ethervote
