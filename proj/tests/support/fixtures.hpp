#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ethervote/contract.hpp"
#include "ethervote/error.hpp"
#include "ethervote/node.hpp"

namespace ethervote::testing {

/// Fixed-key resolver for ledger-only tests.
class StaticKeys : public KeyResolver {
 public:
  void add(const Address& a, const Digest& secret) { keys_[a] = secret; }
  std::optional<Digest> secret_for(const Address& a) const override {
    auto it = keys_.find(a);
    if (it == keys_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::map<Address, Digest> keys_;
};

inline Address filled_address(std::uint8_t b) {
  Address a;
  a.bytes.fill(b);
  return a;
}

inline Digest filled_digest(std::uint8_t b) {
  Digest d{};
  d.fill(b);
  return d;
}

/// Expects `f` to throw ethervote::Error with `code`.
template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an ethervote::Error");
}

inline PersonalData citizen(const std::string& id, const std::string& first = "Alice",
                            const std::string& last = "Doe", const std::string& phone = "+301234567890") {
  return {id, first, last, phone};
}

/// A node plus two authorities, N voter accounts, an initialized election in
/// a chosen phase, and a hand-driven clock.
struct ElectionFixture {
  static constexpr Timestamp kStart = 1'700'000'000;

  ManualClock clock{kStart};
  std::unique_ptr<ElectionNode> node;
  std::vector<Address> authorities;
  std::vector<Address> voters;
  std::vector<PersonalData> people;

  explicit ElectionFixture(std::size_t voter_count = 3, std::uint64_t seed = 1, std::uint64_t window = 300,
                           std::vector<std::string> candidates = {"Alpha", "Beta", "Gamma"}) {
    node = std::make_unique<ElectionNode>(clock.as_clock(), seed, kStart);
    for (int i = 0; i < 2; ++i) authorities.push_back(node->accounts().create_account().account.address);
    for (std::size_t i = 0; i < voter_count; ++i) {
      voters.push_back(node->accounts().create_account().account.address);
      char phone[16];
      std::snprintf(phone, sizeof phone, "+3069%08zu", 10000000 + i * 7919);
      people.push_back({"XK" + std::to_string(900000 + i), "Firstname" + std::to_string(i),
                        "Lastname" + std::to_string(i), phone});
    }
    config = ElectionConfig::make({authorities.begin(), authorities.end()}, candidates, window);
  }

  ElectionConfig config;

  Contract& contract() { return node->contract(); }
  const Address& authority() const { return authorities.front(); }

  void init() { contract().init_election(authority(), config); }
  void to_registration() {
    init();
    contract().advance_phase(authority());
  }
  void register_all() {
    for (std::size_t i = 0; i < voters.size(); ++i) contract().register_citizen(authority(), voters[i], people[i]);
  }
  void to_voting() {
    to_registration();
    register_all();
    contract().advance_phase(authority());
  }
  /// Authenticates voter i now and returns the delivered code.
  std::string otp_for(std::size_t i) {
    contract().authenticate(voters[i], people[i], clock.now());
    return *node->inbox().last(voters[i]);
  }
};

}  // namespace ethervote::testing
