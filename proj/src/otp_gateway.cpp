#include "ethervote/otp_gateway.hpp"

#include <fstream>
#include <sstream>

#include "ethervote/error.hpp"

namespace ethervote {

std::string mask_phone(std::string_view phone) {
  std::string out(phone);
  std::size_t keep = 2;
  for (std::size_t i = out.size(); i-- > 0;) {
    if (out[i] < '0' || out[i] > '9') continue;
    if (keep > 0) {
      --keep;
    } else {
      out[i] = '*';
    }
  }
  return out;
}

void MockTransport::send(const DeliveryChannel& channel, const std::string& code, Timestamp) {
  std::lock_guard lock(mutex_);
  inbox_[channel.address].push_back(code);
  all_.push_back(code);
}

std::optional<std::string> MockTransport::last(const Address& address) const {
  std::lock_guard lock(mutex_);
  auto it = inbox_.find(address);
  if (it == inbox_.end() || it->second.empty()) return std::nullopt;
  return it->second.back();
}

std::vector<std::string> MockTransport::history(const Address& address) const {
  std::lock_guard lock(mutex_);
  auto it = inbox_.find(address);
  return it == inbox_.end() ? std::vector<std::string>{} : it->second;
}

std::vector<std::string> MockTransport::all_codes() const {
  std::lock_guard lock(mutex_);
  return all_;
}

OtpGateway::OtpGateway(std::shared_ptr<DeliveryTransport> transport) : transport_(std::move(transport)) {}

void OtpGateway::register_channel(const Address& address, std::string phone) {
  std::lock_guard lock(mutex_);
  if (channels_.contains(address)) throw Error(ErrorCode::DuplicateChannel, address.to_string());
  channels_.emplace(address, Slot{{address, std::move(phone)}, 0});
}

DeliveryReceipt OtpGateway::deliver(const Address& address, const std::string& code, Timestamp now) {
  std::lock_guard lock(mutex_);
  auto it = channels_.find(address);
  if (it == channels_.end()) throw Error(ErrorCode::NoDeliveryChannel, address.to_string());
  auto& slot = it->second;
  transport_->send(slot.channel, code, now);
  DeliveryReceipt receipt{address, mask_phone(slot.channel.phone), now, ++slot.attempts};
  log_.push_back("otp delivered to " + address.to_string() + " via " + receipt.masked_destination +
                 " attempt " + std::to_string(receipt.attempt));
  return receipt;
}

bool OtpGateway::has_channel(const Address& address) const {
  std::lock_guard lock(mutex_);
  return channels_.contains(address);
}

std::size_t OtpGateway::channel_count() const {
  std::lock_guard lock(mutex_);
  return channels_.size();
}

std::vector<std::string> OtpGateway::operator_log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

void OtpGateway::save_channels(const std::filesystem::path& path) const {
  std::lock_guard lock(mutex_);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& [address, slot] : channels_) {
    out << address.to_string() << ' ' << slot.channel.phone << ' ' << slot.attempts << '\n';
  }
}

void OtpGateway::load_channels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::lock_guard lock(mutex_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string address, phone;
    std::uint32_t attempts = 0;
    if (!(fields >> address >> phone >> attempts)) throw Error(ErrorCode::Malformed, "bad channel line");
    auto a = Address::parse(address);
    channels_[a] = Slot{{a, phone}, attempts};
  }
}

}  // namespace ethervote
