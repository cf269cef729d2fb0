#include <gtest/gtest.h>

#include "ethervote/address.hpp"
#include "ethervote/codec.hpp"
#include "ethervote/crypto.hpp"
#include "ethervote/error.hpp"
#include "support/fixtures.hpp"
#include "support/reference_sha256.hpp"

using namespace ethervote;
using ethervote::testing::error_of;
using ethervote::testing::reference_sha256;

TEST(Sha256, StandardVectors) {
  EXPECT_EQ(to_hex(sha256("abc")), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(to_hex(sha256("")), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Sha256, ReferenceImplementationAgreesOnStandardVector) {
  EXPECT_EQ(to_hex(reference_sha256(std::string("abc"))),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Sha256, MatchesReferenceOnRandomInputs) {
  auto rng = Drbg::from_seed(99);
  for (int round = 0; round < 200; ++round) {
    Bytes msg(rng.uniform(300));
    rng.fill(msg);
    EXPECT_EQ(sha256(msg), reference_sha256(msg)) << "length " << msg.size();
  }
}

TEST(Sha256, IncrementalEqualsOneShot) {
  Sha256 h;
  h.update("ab").update("c");
  EXPECT_EQ(h.finish(), sha256("abc"));
}

TEST(Hex, RoundTripAndErrors) {
  Bytes raw{0x00, 0x7f, 0x80, 0xff};
  EXPECT_EQ(to_hex(raw), "007f80ff");
  EXPECT_EQ(from_hex("007F80ff"), raw);
  EXPECT_EQ(error_of([] { from_hex("abc"); }), ErrorCode::Malformed);
  EXPECT_EQ(error_of([] { from_hex("zz"); }), ErrorCode::Malformed);
  EXPECT_EQ(error_of([] { digest_from_hex("00"); }), ErrorCode::Malformed);
}

TEST(Drbg, SameSeedSameStream) {
  auto a = Drbg::from_seed(7);
  auto b = Drbg::from_seed(7);
  auto c = Drbg::from_seed(8);
  std::vector<std::uint64_t> va, vb, vc;
  for (int i = 0; i < 50; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
  }
  EXPECT_EQ(va, vb);
  EXPECT_NE(va, vc);
}

TEST(Drbg, DomainsSeparateStreams) {
  EXPECT_NE(Drbg::from_seed(7, "otp").next_u64(), Drbg::from_seed(7, "accounts").next_u64());
}

TEST(Drbg, UniformStaysInRangeAndCoversIt) {
  auto rng = Drbg::from_seed(3);
  std::vector<int> hits(10);
  for (int i = 0; i < 10000; ++i) {
    auto v = rng.uniform(10);
    ASSERT_LT(v, 10u);
    ++hits[v];
  }
  for (int h : hits) {
    EXPECT_GT(h, 850);
    EXPECT_LT(h, 1150);
  }
}

TEST(Address, RenderParseIsBijective) {
  auto rng = Drbg::from_seed(11);
  for (int i = 0; i < 500; ++i) {
    Address a;
    rng.fill(a.bytes);
    const auto text = a.to_string();
    ASSERT_EQ(text.size(), 42u);
    ASSERT_EQ(text.substr(0, 2), "0x");
    for (char c : text.substr(2)) ASSERT_TRUE((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'));
    EXPECT_EQ(Address::parse(text), a);
  }
}

TEST(Address, AcceptsUppercaseHex) {
  auto a = Address::parse("0xABCDEF0123456789ABCDEF0123456789ABCDEF01");
  EXPECT_EQ(a.to_string(), "0xabcdef0123456789abcdef0123456789abcdef01");
}

TEST(Address, RejectsMalformed) {
  for (const char* bad : {"", "0x", "abcdef0123456789abcdef0123456789abcdef0123",
                          "0xabcdef0123456789abcdef0123456789abcdef0",
                          "0xabcdef0123456789abcdef0123456789abcdef012",
                          "0xgbcdef0123456789abcdef0123456789abcdef01"}) {
    EXPECT_EQ(error_of([&] { Address::parse(bad); }), ErrorCode::InvalidAddress) << bad;
  }
}

TEST(Address, NullAddress) {
  EXPECT_TRUE(Address{}.is_null());
  EXPECT_FALSE(ethervote::testing::filled_address(1).is_null());
}

TEST(Codec, FieldLayoutIsLengthPrefixedBigEndian) {
  CanonicalWriter w;
  w.u64(0x0102030405060708ULL).u8(9).field(std::string_view("hi"));
  const Bytes expected{0, 0, 0, 8, 1, 2, 3, 4, 5, 6, 7, 8, 0, 0, 0, 1, 9, 0, 0, 0, 2, 'h', 'i'};
  EXPECT_EQ(w.bytes(), expected);
}

TEST(Codec, RandomRoundTrip) {
  auto rng = Drbg::from_seed(5);
  for (int round = 0; round < 200; ++round) {
    const auto a = rng.next_u64();
    Bytes blob(rng.uniform(64));
    rng.fill(blob);
    const auto d = rng.next_digest();
    CanonicalWriter w;
    w.u64(a).field(ByteView(blob)).field(d);
    CanonicalReader r(w.bytes());
    EXPECT_EQ(r.u64(), a);
    auto f = r.field();
    EXPECT_EQ(Bytes(f.begin(), f.end()), blob);
    EXPECT_EQ(r.digest(), d);
    EXPECT_TRUE(r.at_end());
  }
}

TEST(Codec, MalformedInputsThrow) {
  const Bytes truncated_prefix{0, 0, 1};
  EXPECT_EQ(error_of([&] { CanonicalReader(truncated_prefix).field(); }), ErrorCode::Malformed);
  const Bytes overrun{0, 0, 0, 5, 1, 2};
  EXPECT_EQ(error_of([&] { CanonicalReader(overrun).field(); }), ErrorCode::Malformed);
  const Bytes wrong_width{0, 0, 0, 2, 1, 2};
  EXPECT_EQ(error_of([&] { CanonicalReader(wrong_width).u64(); }), ErrorCode::Malformed);
  const Bytes trailing{0, 0, 0, 1, 7, 0};
  CanonicalReader r(trailing);
  r.u8();
  EXPECT_EQ(error_of([&] { r.expect_end(); }), ErrorCode::Malformed);
}
