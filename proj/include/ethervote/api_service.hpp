#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "ethervote/error.hpp"
#include "ethervote/json_views.hpp"
#include "ethervote/node.hpp"

namespace ethervote {

struct ApiRequest {
  std::string method;
  std::string path;
  /// Header names are matched case-insensitively.
  std::map<std::string, std::string> headers;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body = nlohmann::json::object();
};

/// HTTP status for a contract-level error.
int http_status(ErrorCode code) noexcept;

struct ServiceConfig {
  /// Used by /authority/init when the body names no window.
  std::uint64_t default_otp_window = kDefaultOtpWindowSeconds;
  Timestamp session_ttl_seconds = 30 * 60;
  /// Serve GET /dev/inbox/{address}; only honoured in ETHERVOTE_DEV_PANEL builds.
  bool dev_inbox = false;
};

/// Unlocked-wallet sessions with sliding expiry.
class SessionStore {
 public:
  SessionStore(Drbg rng, Timestamp ttl_seconds);

  std::string issue(const Address& address, Timestamp now);
  /// Refreshes the expiry on success.
  std::optional<Address> resolve(const std::string& token, Timestamp now);
  Timestamp ttl() const { return ttl_; }

 private:
  struct Session {
    Address address;
    Timestamp expires_at = 0;
  };

  std::mutex mutex_;
  Drbg rng_;
  Timestamp ttl_;
  std::map<std::string, Session> sessions_;
};

/// JSON facade over the contract. Adds authentication and encoding only; the
/// chain a request sequence produces is the one direct contract calls would.
class ApiService {
 public:
  ApiService(ElectionNode& node, Drbg session_rng, ServiceConfig config = {});

  ApiResponse handle(const ApiRequest& request);

 private:
  ApiResponse route(const ApiRequest& request);
  Address require_session(const ApiRequest& request);
  std::optional<Address> optional_session(const ApiRequest& request);

  ApiResponse login(const nlohmann::json& body);
  ApiResponse init(const Address& sender, const nlohmann::json& body);
  ApiResponse advance(const Address& sender);
  ApiResponse register_citizen(const Address& sender, const nlohmann::json& body);
  ApiResponse authenticate(const Address& sender, const nlohmann::json& body);
  ApiResponse vote(const Address& sender, const nlohmann::json& body);
  ApiResponse results(const std::optional<Address>& sender);
  ApiResponse receipt(const std::string& hash);
  ApiResponse verify();
  ApiResponse block(const std::string& index);
  ApiResponse dev_inbox(const std::string& address);

  ElectionNode& node_;
  SessionStore sessions_;
  ServiceConfig config_;
  std::mutex persist_mutex_;
};

}  // namespace ethervote
