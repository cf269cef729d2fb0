#include "ethervote/address.hpp"

#include <algorithm>

#include "ethervote/crypto.hpp"
#include "ethervote/error.hpp"

namespace ethervote {

Address Address::parse(std::string_view text) {
  if (text.size() != 2 + 2 * kSize || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
    throw Error(ErrorCode::InvalidAddress, "expected 0x followed by 40 hex digits");
  }
  Bytes raw;
  try {
    raw = from_hex(text.substr(2));
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidAddress, "non-hex character");
  }
  Address a;
  std::copy(raw.begin(), raw.end(), a.bytes.begin());
  return a;
}

std::string Address::to_string() const { return "0x" + to_hex(ByteView(bytes)); }

bool Address::is_null() const noexcept {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

}  // namespace ethervote
