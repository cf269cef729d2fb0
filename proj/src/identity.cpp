#include "ethervote/identity.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <array>

#include "ethervote/error.hpp"

namespace ethervote {

namespace {

bool is_valid_utf8(std::string_view s) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(s.data());
  const auto len = static_cast<std::int32_t>(s.size());
  std::int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(p, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

}  // namespace

std::string normalize_nfc(std::string_view utf8) {
  if (!is_valid_utf8(utf8)) throw Error(ErrorCode::InvalidEncoding, "personal data is not UTF-8");
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error(ErrorCode::InvalidEncoding, "NFC normalizer unavailable");
  auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<std::int32_t>(utf8.size())));
  icu::UnicodeString normalized = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::InvalidEncoding, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

Bytes canonicalize(const PersonalData& data) {
  const std::array<const std::string*, 4> fields{&data.id_number, &data.first_name, &data.last_name,
                                                 &data.phone};
  std::string joined;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const auto& field = *fields[i];
    if (field.empty()) throw Error(ErrorCode::EmptyField);
    if (field.find('|') != std::string::npos) throw Error(ErrorCode::SeparatorInField);
    if (i > 0) joined.push_back('|');
    joined += normalize_nfc(field);
  }
  return Bytes(joined.begin(), joined.end());
}

IdentityCommitment commit(const PersonalData& data) { return {sha256(canonicalize(data))}; }

bool is_valid_phone(std::string_view phone) {
  if (phone.size() < 8 || phone.size() > 16 || phone.front() != '+') return false;
  return std::all_of(phone.begin() + 1, phone.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace ethervote
