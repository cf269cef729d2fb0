#include "ethervote/accounts.hpp"

#include <fstream>
#include <sstream>

#include "ethervote/error.hpp"

namespace ethervote {

namespace {

Digest password_digest(const Digest& salt, std::string_view password) {
  Sha256 h;
  h.update(ByteView(salt)).update(password);
  return h.finish();
}

constexpr std::string_view kPasswordAlphabet = "abcdefghjkmnpqrstuvwxyz23456789";

}  // namespace

Address address_from_secret(const Digest& secret) {
  Sha256 h;
  h.update("ethervote-address").update(ByteView(secret));
  auto d = h.finish();
  Address a;
  std::copy_n(d.begin(), Address::kSize, a.bytes.begin());
  return a;
}

AccountStore::AccountStore(Drbg rng) : rng_(std::move(rng)) {}

Account AccountStore::insert_locked(std::string_view password) {
  Entry e;
  Address address;
  do {
    e.secret = rng_.next_digest();
    address = address_from_secret(e.secret);
  } while (address.is_null() || entries_.contains(address));
  e.salt = rng_.next_digest();
  e.password_hash = password_digest(e.salt, password);
  entries_.emplace(address, e);
  return {address, e.secret};
}

AccountStore::Created AccountStore::create_account() {
  std::lock_guard lock(mutex_);
  std::string password;
  for (int i = 0; i < 16; ++i) password.push_back(kPasswordAlphabet[rng_.uniform(kPasswordAlphabet.size())]);
  auto account = insert_locked(password);
  return {account, password};
}

Account AccountStore::create_account(std::string_view password) {
  std::lock_guard lock(mutex_);
  return insert_locked(password);
}

bool AccountStore::unlock(const Address& address, std::string_view password) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(address);
  return it != entries_.end() && password_digest(it->second.salt, password) == it->second.password_hash;
}

bool AccountStore::contains(const Address& address) const {
  std::lock_guard lock(mutex_);
  return entries_.contains(address);
}

std::optional<Digest> AccountStore::secret_for(const Address& address) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(address);
  if (it == entries_.end()) return std::nullopt;
  return it->second.secret;
}

Digest AccountStore::require_secret(const Address& address) const {
  auto s = secret_for(address);
  if (!s) throw Error(ErrorCode::UnknownAccount, address.to_string());
  return *s;
}

std::size_t AccountStore::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

void AccountStore::save(const std::filesystem::path& path) const {
  std::lock_guard lock(mutex_);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& [address, e] : entries_) {
    out << address.to_string() << ' ' << to_hex(e.secret) << ' ' << to_hex(e.salt) << ' '
        << to_hex(e.password_hash) << '\n';
  }
}

void AccountStore::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::lock_guard lock(mutex_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string address, secret, salt, hash;
    if (!(fields >> address >> secret >> salt >> hash)) {
      throw Error(ErrorCode::Malformed, "bad account line");
    }
    Entry e{digest_from_hex(secret), digest_from_hex(salt), digest_from_hex(hash)};
    if (address_from_secret(e.secret) != Address::parse(address)) {
      throw Error(ErrorCode::Malformed, "account address does not match its secret");
    }
    entries_[Address::parse(address)] = e;
  }
}

}  // namespace ethervote
