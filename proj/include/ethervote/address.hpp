#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace ethervote {

/// 20-byte pseudonymous account id, rendered as 0x + 40 lowercase hex digits.
struct Address {
  static constexpr std::size_t kSize = 20;
  std::array<std::uint8_t, kSize> bytes{};

  /// Accepts upper- or lowercase hex; throws Error(InvalidAddress).
  static Address parse(std::string_view text);

  std::string to_string() const;
  bool is_null() const noexcept;

  auto operator<=>(const Address&) const = default;
};

}  // namespace ethervote

template <>
struct std::hash<ethervote::Address> {
  std::size_t operator()(const ethervote::Address& a) const noexcept {
    std::size_t h = 0;
    for (int i = 0; i < 8; ++i) h = (h << 8) | a.bytes[i];
    return h;
  }
};
