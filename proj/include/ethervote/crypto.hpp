#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ethervote {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

/// Seconds since the epoch, always supplied by an injected clock.
using Timestamp = std::int64_t;

Digest sha256(ByteView data);
Digest sha256(std::string_view text);

/// Incremental SHA-256 for multi-part inputs.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(ByteView data);
  Sha256& update(std::string_view text);
  Digest finish();

 private:
  void* ctx_;
};

ByteView as_bytes(std::string_view text);

std::string to_hex(ByteView data);
inline std::string to_hex(const Digest& d) { return to_hex(ByteView(d)); }

/// Parses lowercase or uppercase hex (no prefix). Throws Error(Malformed).
Bytes from_hex(std::string_view hex);
Digest digest_from_hex(std::string_view hex);

/// Deterministic SHA-256 counter-mode generator. Output block i is
/// SHA-256(seed || be64(i)); identical seeds give identical streams on
/// every platform.
class Drbg {
 public:
  explicit Drbg(const Digest& seed);
  static Drbg from_seed(std::uint64_t seed, std::string_view domain = "ethervote");
  static Drbg from_entropy();

  std::uint64_t next_u64();
  /// Uniform in [0, bound); bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);
  void fill(std::span<std::uint8_t> out);
  Digest next_digest();

  /// Fisher-Yates with this generator.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[uniform(i)]);
    }
  }

 private:
  void refill();

  Digest seed_;
  std::uint64_t counter_ = 0;
  Digest block_{};
  std::size_t used_ = sizeof(Digest);
};

}  // namespace ethervote
