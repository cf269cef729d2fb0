#include <gtest/gtest.h>

#include <algorithm>

#include "ethervote/error.hpp"
#include "ethervote/otp_gateway.hpp"
#include "ethervote/simulation.hpp"
#include "support/fixtures.hpp"

using namespace ethervote;
using ethervote::testing::ElectionFixture;
using ethervote::testing::error_of;
using ethervote::testing::filled_address;

namespace {

struct GatewayFixture : ::testing::Test {
  std::shared_ptr<MockTransport> inbox = std::make_shared<MockTransport>();
  OtpGateway gateway{inbox};
  Address voter = filled_address(0x11);
};

}  // namespace

TEST_F(GatewayFixture, DeliversToRegisteredChannel) {
  gateway.register_channel(voter, "+301234567890");
  EXPECT_TRUE(gateway.has_channel(voter));
  auto receipt = gateway.deliver(voter, "042973", 1000);
  EXPECT_EQ(receipt.attempt, 1u);
  EXPECT_EQ(receipt.delivered_at, 1000);
  EXPECT_EQ(receipt.address, voter);
  EXPECT_EQ(receipt.masked_destination, "+**********90");
  EXPECT_EQ(inbox->last(voter), "042973");
}

TEST_F(GatewayFixture, DuplicateChannelIsRejected) {
  gateway.register_channel(voter, "+301234567890");
  EXPECT_EQ(error_of([&] { gateway.register_channel(voter, "+309999999999"); }), ErrorCode::DuplicateChannel);
  EXPECT_EQ(gateway.channel_count(), 1u);
}

TEST_F(GatewayFixture, UnknownAddressHasNoChannel) {
  EXPECT_EQ(error_of([&] { gateway.deliver(voter, "000000", 1); }), ErrorCode::NoDeliveryChannel);
  EXPECT_FALSE(inbox->last(voter));
}

TEST_F(GatewayFixture, LatestDeliveryWins) {
  gateway.register_channel(voter, "+301234567890");
  gateway.deliver(voter, "111111", 1);
  auto second = gateway.deliver(voter, "222222", 2);
  EXPECT_EQ(second.attempt, 2u);
  EXPECT_EQ(inbox->last(voter), "222222");
  EXPECT_EQ(inbox->history(voter), (std::vector<std::string>{"111111", "222222"}));
}

TEST(PhoneMask, KeepsOnlyLastTwoDigits) {
  EXPECT_EQ(mask_phone("+301234567890"), "+**********90");
  EXPECT_EQ(mask_phone("+12"), "+12");
  EXPECT_EQ(mask_phone("+1234567"), "+*****67");
}

TEST_F(GatewayFixture, OperatorLogHoldsNeitherPhoneNorCode) {
  gateway.register_channel(voter, "+301234567890");
  gateway.deliver(voter, "042973", 1);
  const auto log = gateway.operator_log();
  ASSERT_FALSE(log.empty());
  for (const auto& line : log) {
    EXPECT_EQ(line.find("301234567890"), std::string::npos) << line;
    EXPECT_EQ(line.find("042973"), std::string::npos) << line;
  }
}

TEST_F(GatewayFixture, ChannelsSurviveSaveAndLoad) {
  const auto path = std::filesystem::temp_directory_path() / "ethervote_channels_test";
  gateway.register_channel(voter, "+301234567890");
  gateway.deliver(voter, "000001", 1);
  gateway.save_channels(path);
  auto inbox2 = std::make_shared<MockTransport>();
  OtpGateway restored(inbox2);
  restored.load_channels(path);
  EXPECT_TRUE(restored.has_channel(voter));
  restored.deliver(voter, "123456", 2);
  EXPECT_EQ(inbox2->last(voter), "123456");
  std::filesystem::remove(path);
}

TEST(GatewayOnChain, NoPhoneOrCodeReachesTheChain) {
  ElectionFixture f(5);
  f.to_voting();
  std::vector<std::string> codes;
  for (std::size_t i = 0; i < f.voters.size(); ++i) codes.push_back(f.otp_for(i));
  f.contract().cast_vote(f.voters[0], 1, codes[0], f.clock.now());

  std::vector<std::string> needles = codes;
  for (const auto& p : f.people) {
    needles.push_back(p.phone);
    needles.push_back(p.phone.substr(1));
  }
  EXPECT_TRUE(find_plaintext(f.node->ledger().serialize(), needles).empty());
}
