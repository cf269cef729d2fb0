#pragma once

#include <string>
#include <string_view>

#include "ethervote/crypto.hpp"

namespace ethervote {

struct PersonalData {
  std::string id_number;
  std::string first_name;
  std::string last_name;
  std::string phone;
};

struct IdentityCommitment {
  Digest digest{};

  auto operator<=>(const IdentityCommitment&) const = default;
};

/// UTF-8 bytes of "id_number|first_name|last_name|phone", each field NFC
/// normalized first. Throws Error(EmptyField), Error(SeparatorInField) or
/// Error(InvalidEncoding) for malformed UTF-8.
Bytes canonicalize(const PersonalData& data);

/// SHA-256 of the canonical form. Unsalted: low-entropy personal data can be
/// brute-forced from a public chain, which is the scheme's known weakness.
IdentityCommitment commit(const PersonalData& data);

/// NFC normalization of one UTF-8 string.
std::string normalize_nfc(std::string_view utf8);

/// '+' followed by 7 to 15 digits.
bool is_valid_phone(std::string_view phone);

}  // namespace ethervote
