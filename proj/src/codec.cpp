#include "ethervote/codec.hpp"

#include <limits>

#include "ethervote/error.hpp"

namespace ethervote {

void put_be32(Bytes& out, std::uint32_t v) {
  for (int i = 3; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_be64(Bytes& out, std::uint64_t v) {
  for (int i = 7; i >= 0; --i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_be32(ByteView in) {
  std::uint32_t v = 0;
  for (std::size_t i = 0; i < 4; ++i) v = (v << 8) | in[i];
  return v;
}

std::uint64_t get_be64(ByteView in) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < 8; ++i) v = (v << 8) | in[i];
  return v;
}

CanonicalWriter& CanonicalWriter::field(ByteView data) {
  if (data.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::Malformed, "field exceeds 4 GiB");
  }
  put_be32(out_, static_cast<std::uint32_t>(data.size()));
  out_.insert(out_.end(), data.begin(), data.end());
  return *this;
}

CanonicalWriter& CanonicalWriter::field(std::string_view text) { return field(as_bytes(text)); }

CanonicalWriter& CanonicalWriter::u64(std::uint64_t v) {
  put_be32(out_, 8);
  put_be64(out_, v);
  return *this;
}

CanonicalWriter& CanonicalWriter::u8(std::uint8_t v) {
  put_be32(out_, 1);
  out_.push_back(v);
  return *this;
}

ByteView CanonicalReader::field() {
  if (data_.size() - pos_ < 4) throw Error(ErrorCode::Malformed, "truncated length prefix");
  const std::uint32_t len = get_be32(data_.subspan(pos_, 4));
  pos_ += 4;
  if (data_.size() - pos_ < len) throw Error(ErrorCode::Malformed, "field overruns input");
  auto out = data_.subspan(pos_, len);
  pos_ += len;
  return out;
}

ByteView CanonicalReader::fixed(std::size_t n) {
  auto f = field();
  if (f.size() != n) throw Error(ErrorCode::Malformed, "unexpected field width");
  return f;
}

std::string CanonicalReader::text() {
  auto f = field();
  return {reinterpret_cast<const char*>(f.data()), f.size()};
}

Digest CanonicalReader::digest() {
  auto f = fixed(32);
  Digest d{};
  std::copy(f.begin(), f.end(), d.begin());
  return d;
}

Address CanonicalReader::address() {
  auto f = fixed(Address::kSize);
  Address a;
  std::copy(f.begin(), f.end(), a.bytes.begin());
  return a;
}

std::uint64_t CanonicalReader::u64() { return get_be64(fixed(8)); }

std::uint8_t CanonicalReader::u8() { return fixed(1)[0]; }

void CanonicalReader::expect_end() const {
  if (!at_end()) throw Error(ErrorCode::Malformed, "trailing bytes");
}

}  // namespace ethervote
