#include "ethervote/api_service.hpp"

#include <algorithm>
#include <cctype>

namespace ethervote {

using nlohmann::json;

int http_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Malformed:
    case ErrorCode::InvalidAddress:
    case ErrorCode::BadRequest:
    case ErrorCode::InvalidPersonalData:
    case ErrorCode::EmptyField:
    case ErrorCode::SeparatorInField:
    case ErrorCode::InvalidEncoding:
      return 400;
    case ErrorCode::Unauthorized:
    case ErrorCode::AuthFailed:
    case ErrorCode::OtpInvalid:
    case ErrorCode::NotRegistered:
    case ErrorCode::UnknownAccount:
      return 403;
    case ErrorCode::NotFound:
    case ErrorCode::NotAVote:
    case ErrorCode::OutOfRange:
      return 404;
    case ErrorCode::AlreadyRegistered:
    case ErrorCode::AlreadyVoted:
    case ErrorCode::AlreadyInitialized:
    case ErrorCode::AlreadyClosed:
    case ErrorCode::NoOtpIssued:
    case ErrorCode::DuplicateChannel:
      return 409;
    case ErrorCode::OtpExpired:
      return 410;
    case ErrorCode::WrongPhase:
    case ErrorCode::InvalidConfig:
    case ErrorCode::NotInitialized:
    case ErrorCode::UnknownCandidate:
      return 422;
    case ErrorCode::NoDeliveryChannel:
      return 503;
    case ErrorCode::BadSignature:
    case ErrorCode::BadNonce:
    case ErrorCode::LedgerUninitialized:
    case ErrorCode::IoError:
    case ErrorCode::ParseError:
      return 500;
  }
  return 500;
}

namespace {

/// Service-level failure that is not a contract error (sessions, bodies).
struct HttpFailure {
  int status;
  std::string code;
};

ApiResponse error_response(int status, std::string_view code, std::string_view message = {}) {
  ApiResponse r;
  r.status = status;
  r.body = {{"error", code}};
  if (!message.empty()) r.body["message"] = message;
  return r;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    if (next > pos) parts.emplace_back(path.substr(pos, next - pos));
    pos = next + 1;
  }
  return parts;
}

const json& require_field(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) throw HttpFailure{400, "BadRequest"};
  return body.at(key);
}

std::string require_string(const json& body, const char* key) {
  const auto& v = require_field(body, key);
  if (!v.is_string()) throw HttpFailure{400, "BadRequest"};
  return v.get<std::string>();
}

std::uint64_t require_uint(const json& body, const char* key) {
  const auto& v = require_field(body, key);
  if (!v.is_number_unsigned()) {
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    throw HttpFailure{400, "BadRequest"};
  }
  return v.get<std::uint64_t>();
}

PersonalData personal_data(const json& body) {
  return {require_string(body, "id_number"), require_string(body, "first_name"),
          require_string(body, "last_name"), require_string(body, "phone")};
}

json receipt_json(const TxReceipt& r) {
  return {{"tx_hash", to_hex(r.tx_hash)}, {"block_index", r.block.index}};
}

}  // namespace

SessionStore::SessionStore(Drbg rng, Timestamp ttl_seconds) : rng_(std::move(rng)), ttl_(ttl_seconds) {}

std::string SessionStore::issue(const Address& address, Timestamp now) {
  std::lock_guard lock(mutex_);
  auto token = to_hex(rng_.next_digest());
  sessions_[token] = {address, now + ttl_};
  return token;
}

std::optional<Address> SessionStore::resolve(const std::string& token, Timestamp now) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  if (now > it->second.expires_at) {
    sessions_.erase(it);
    return std::nullopt;
  }
  it->second.expires_at = now + ttl_;
  return it->second.address;
}

ApiService::ApiService(ElectionNode& node, Drbg session_rng, ServiceConfig config)
    : node_(node), sessions_(std::move(session_rng), config.session_ttl_seconds), config_(config) {}

ApiResponse ApiService::handle(const ApiRequest& request) {
  try {
    return route(request);
  } catch (const HttpFailure& f) {
    return error_response(f.status, f.code);
  } catch (const Error& e) {
    return error_response(http_status(e.code()), to_string(e.code()), e.what());
  } catch (const json::exception&) {
    return error_response(400, "BadRequest");
  } catch (const std::exception&) {
    return error_response(500, "Internal");
  }
}

Address ApiService::require_session(const ApiRequest& request) {
  std::string header;
  for (const auto& [k, v] : request.headers) {
    if (lower(k) == "authorization") header = v;
  }
  constexpr std::string_view kBearer = "Bearer ";
  if (header.size() <= kBearer.size() || header.compare(0, kBearer.size(), kBearer) != 0) {
    throw HttpFailure{401, "SessionRequired"};
  }
  auto address = sessions_.resolve(header.substr(kBearer.size()), node_.clock()());
  if (!address) throw HttpFailure{401, "SessionExpired"};
  return *address;
}

std::optional<Address> ApiService::optional_session(const ApiRequest& request) {
  for (const auto& [k, v] : request.headers) {
    if (lower(k) == "authorization") return require_session(request);
  }
  return std::nullopt;
}

ApiResponse ApiService::route(const ApiRequest& request) {
  const auto parts = split_path(request.path);
  const auto& method = request.method;
  auto body = [&]() -> json {
    if (request.body.empty()) return json::object();
    auto parsed = json::parse(request.body, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) throw HttpFailure{400, "BadRequest"};
    return parsed;
  };

  if (method == "POST") {
    if (parts == std::vector<std::string>{"session"}) return login(body());
    if (parts == std::vector<std::string>{"authority", "init"}) {
      auto sender = require_session(request);
      return init(sender, body());
    }
    if (parts == std::vector<std::string>{"authority", "phase", "advance"}) {
      return advance(require_session(request));
    }
    if (parts == std::vector<std::string>{"authority", "register"}) {
      auto sender = require_session(request);
      return register_citizen(sender, body());
    }
    if (parts == std::vector<std::string>{"voter", "authenticate"}) {
      auto sender = require_session(request);
      return authenticate(sender, body());
    }
    if (parts == std::vector<std::string>{"voter", "vote"}) {
      auto sender = require_session(request);
      return vote(sender, body());
    }
  } else if (method == "GET") {
    if (parts == std::vector<std::string>{"results"}) return results(optional_session(request));
    if (parts.size() == 2 && parts[0] == "receipt") return receipt(parts[1]);
    if (parts == std::vector<std::string>{"chain", "verify"}) return verify();
    if (parts.size() == 3 && parts[0] == "chain" && parts[1] == "block") {
      require_session(request);
      return block(parts[2]);
    }
    if (parts.size() == 3 && parts[0] == "dev" && parts[1] == "inbox") return dev_inbox(parts[2]);
  }
  return error_response(404, "NoSuchEndpoint");
}

ApiResponse ApiService::login(const json& body) {
  auto address = Address::parse(require_string(body, "address"));
  if (!node_.accounts().unlock(address, require_string(body, "password"))) {
    return error_response(401, "InvalidCredentials");
  }
  const auto now = node_.clock()();
  ApiResponse r;
  r.body = {{"token", sessions_.issue(address, now)},
            {"address", address.to_string()},
            {"expires_at", now + sessions_.ttl()},
            {"trusted", node_.contract().is_trusted(address)},
            {"phase", to_string(node_.contract().phase())}};
  return r;
}

ApiResponse ApiService::init(const Address& sender, const json& body) {
  std::set<Address> trusted;
  if (body.contains("trusted")) {
    const auto& list = body.at("trusted");
    if (!list.is_array()) throw HttpFailure{400, "BadRequest"};
    for (const auto& a : list) {
      if (!a.is_string()) throw HttpFailure{400, "BadRequest"};
      trusted.insert(Address::parse(a.get<std::string>()));
    }
  } else {
    trusted.insert(sender);
  }
  const auto& list = require_field(body, "candidates");
  if (!list.is_array()) throw HttpFailure{400, "BadRequest"};
  std::vector<std::string> names;
  for (const auto& n : list) {
    if (!n.is_string()) throw HttpFailure{400, "BadRequest"};
    names.push_back(n.get<std::string>());
  }
  const auto window = body.contains("otp_window_seconds") ? require_uint(body, "otp_window_seconds")
                                                          : config_.default_otp_window;
  auto receipt = node_.contract().init_election(sender, ElectionConfig::make(trusted, names, window));
  ApiResponse r;
  r.body = receipt_json(receipt);
  r.body["phase"] = to_string(node_.contract().phase());
  return r;
}

ApiResponse ApiService::advance(const Address& sender) {
  auto receipt = node_.contract().advance_phase(sender);
  ApiResponse r;
  r.body = receipt_json(receipt);
  r.body["phase"] = to_string(node_.contract().phase());
  return r;
}

ApiResponse ApiService::register_citizen(const Address& sender, const json& body) {
  auto data = personal_data(body);
  std::optional<std::string> password;
  Address voter;
  if (body.contains("voter")) {
    voter = Address::parse(require_string(body, "voter"));
  } else {
    if (!node_.contract().is_trusted(sender)) throw Error(ErrorCode::Unauthorized);
    auto created = node_.accounts().create_account();
    voter = created.account.address;
    password = created.password;
  }
  auto receipt = node_.contract().register_citizen(sender, voter, data);
  {
    std::lock_guard lock(persist_mutex_);
    node_.save_offchain();
  }
  ApiResponse r;
  r.body = receipt_json(receipt);
  r.body["address"] = voter.to_string();
  if (password) r.body["password"] = *password;
  return r;
}

ApiResponse ApiService::authenticate(const Address& sender, const json& body) {
  auto result = node_.contract().authenticate(sender, personal_data(body), node_.clock()());
  ApiResponse r;
  r.body = receipt_json(result.tx);
  r.body["delivery"] = {{"masked_destination", result.delivery.masked_destination},
                        {"delivered_at", result.delivery.delivered_at},
                        {"attempt", result.delivery.attempt}};
  json candidates = json::array();
  for (const auto& c : node_.contract().state().config.candidates) {
    candidates.push_back({{"candidate_id", c.id}, {"name", c.name}});
  }
  r.body["candidates"] = candidates;
  return r;
}

ApiResponse ApiService::vote(const Address& sender, const json& body) {
  const auto candidate = require_uint(body, "candidate_id");
  const auto otp = require_string(body, "otp");
  ApiResponse r;
  r.body = receipt_json(node_.contract().cast_vote(sender, candidate, otp, node_.clock()()));
  return r;
}

ApiResponse ApiService::results(const std::optional<Address>& sender) {
  if (!sender && node_.contract().phase() != ElectionPhase::Closed) {
    throw HttpFailure{401, "SessionRequired"};
  }
  ApiResponse r;
  r.body = to_json(node_.contract().results(sender));
  return r;
}

ApiResponse ApiService::receipt(const std::string& hash) {
  auto view = node_.contract().verify_receipt(digest_from_hex(hash));
  ApiResponse r;
  r.body = {{"tx_hash", to_hex(view.tx_hash)},
            {"block_index", view.block_index},
            {"sender", view.sender.to_string()},
            {"candidate_id", view.candidate_id}};
  return r;
}

ApiResponse ApiService::verify() {
  auto report = node_.ledger().verify_chain();
  ApiResponse r;
  r.body = to_json(report);
  r.body["length"] = node_.ledger().length();
  r.body["head_hash"] = to_hex(node_.ledger().head_hash());
  return r;
}

ApiResponse ApiService::block(const std::string& index_text) {
  std::uint64_t index = 0;
  if (index_text.empty() || index_text.size() > 19 ||
      !std::all_of(index_text.begin(), index_text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw HttpFailure{400, "BadRequest"};
  }
  index = std::stoull(index_text);
  auto header = node_.ledger().get_block(index);
  json hashes = json::array();
  for (const auto& h : header.tx_hashes) hashes.push_back(to_hex(h));
  json txs = json::array();
  for (const auto& tx : node_.ledger().block_transactions(index)) {
    txs.push_back({{"tx_hash", to_hex(tx.tx_hash)},
                   {"sender", tx.sender.to_string()},
                   {"nonce", tx.nonce},
                   {"kind", to_string(tx.kind)},
                   {"payload", to_hex(ByteView(tx.payload))},
                   {"timestamp", tx.timestamp},
                   {"signature", to_hex(tx.signature)}});
  }
  ApiResponse r;
  r.body = {{"index", header.index},
            {"prev_hash", to_hex(header.prev_hash)},
            {"timestamp", header.timestamp},
            {"tx_hashes", hashes},
            {"block_hash", to_hex(header.block_hash)},
            {"transactions", txs}};
  return r;
}

ApiResponse ApiService::dev_inbox([[maybe_unused]] const std::string& address) {
#ifdef ETHERVOTE_DEV_PANEL
  if (config_.dev_inbox) {
    auto code = node_.inbox().last(Address::parse(address));
    if (!code) return error_response(404, "NotFound");
    ApiResponse r;
    r.body = {{"address", address}, {"code", *code}, {"developer_panel", true}};
    return r;
  }
#endif
  return error_response(404, "NoSuchEndpoint");
}

}  // namespace ethervote
