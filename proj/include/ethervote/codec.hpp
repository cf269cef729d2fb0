#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ethervote/address.hpp"
#include "ethervote/crypto.hpp"

namespace ethervote {

/// Canonical encoding: every field is a 4-byte big-endian length followed by
/// its bytes. Integers are 8-byte big-endian inside their field.
class CanonicalWriter {
 public:
  CanonicalWriter& field(ByteView data);
  CanonicalWriter& field(std::string_view text);
  CanonicalWriter& field(const Digest& d) { return field(ByteView(d)); }
  CanonicalWriter& field(const Address& a) { return field(ByteView(a.bytes)); }
  CanonicalWriter& u64(std::uint64_t v);
  CanonicalWriter& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  CanonicalWriter& u8(std::uint8_t v);

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  Bytes out_;
};

/// Strict reader over a canonical encoding; any framing violation throws
/// Error(Malformed).
class CanonicalReader {
 public:
  explicit CanonicalReader(ByteView data) : data_(data) {}

  ByteView field();
  std::string text();
  Digest digest();
  Address address();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  std::uint8_t u8();

  bool at_end() const noexcept { return pos_ == data_.size(); }
  void expect_end() const;
  std::size_t position() const noexcept { return pos_; }

 private:
  ByteView fixed(std::size_t n);

  ByteView data_;
  std::size_t pos_ = 0;
};

void put_be32(Bytes& out, std::uint32_t v);
void put_be64(Bytes& out, std::uint64_t v);
std::uint32_t get_be32(ByteView in);
std::uint64_t get_be64(ByteView in);

}  // namespace ethervote
