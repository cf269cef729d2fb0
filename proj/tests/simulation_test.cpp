#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ethervote/codec.hpp"
#include "ethervote/error.hpp"
#include "ethervote/scenario.hpp"
#include "ethervote/simulation.hpp"
#include "support/fixtures.hpp"

using namespace ethervote;
using ethervote::testing::error_of;

namespace {

Scenario honest(std::uint32_t voters) {
  return parse_scenario("seed 3\ncandidate Red\ncandidate Blue\nvoters " + std::to_string(voters) + "\n");
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ethervote_sim_" + name);
}

Bytes read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write_all(const std::filesystem::path& p, const Bytes& b) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
}

std::vector<std::size_t> frame_starts(const Bytes& chain) {
  std::vector<std::size_t> starts;
  for (std::size_t pos = 0; pos < chain.size(); pos += 4 + get_be32(ByteView(chain).subspan(pos, 4))) {
    starts.push_back(pos);
  }
  return starts;
}

}  // namespace

TEST(ScenarioParse, ReadsDirectivesAndShares) {
  auto sc = parse_scenario(
      "# comment\n"
      "seed 9\nwindow 120\nauthorities 2\ncandidate New Democracy\ncandidate B\n"
      "voters 50\ndouble_vote 10%\nreplay_otp 3\nguess_otp 2% 5\nlate_vote 4 30\n"
      "untrusted_register 2\nvoter 4 double_vote candidate=1 delay=10\n");
  EXPECT_EQ(sc.seed, 9u);
  EXPECT_EQ(sc.otp_window, 120u);
  EXPECT_EQ(sc.authorities, 2u);
  EXPECT_EQ(sc.candidates, (std::vector<std::string>{"New Democracy", "B"}));
  EXPECT_EQ(sc.double_vote.resolve(50), 5u);
  EXPECT_EQ(sc.replay_otp.resolve(50), 3u);
  EXPECT_EQ(sc.guess_attempts, 5u);
  EXPECT_EQ(sc.late_offset, 30);
  EXPECT_EQ(sc.untrusted_register, 2u);
  ASSERT_TRUE(sc.overrides.contains(4));
  EXPECT_EQ(sc.overrides[4].candidate, 1u);
  EXPECT_EQ(sc.overrides[4].vote_delay, 10);
}

TEST(ScenarioParse, ErrorsNameTheLine) {
  auto message_of = [](const std::string& text) -> std::string {
    try {
      parse_scenario(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
      return e.what();
    }
    return "no error";
  };
  EXPECT_NE(message_of("candidate A\nvoters x\n").find("line 2"), std::string::npos);
  EXPECT_NE(message_of("candidate A\nfrobnicate 3\n").find("line 2"), std::string::npos);
  EXPECT_NE(message_of("candidate A\ndouble_vote 150%\n").find("line 2"), std::string::npos);
  EXPECT_NE(message_of("voters 3\n").find("no candidates"), std::string::npos);
  EXPECT_NE(message_of("candidate A\nvoter 1 flying\n").find("line 2"), std::string::npos);
  EXPECT_EQ(error_of([] { load_scenario("/nonexistent/scenario.txt"); }), ErrorCode::IoError);
}

TEST(ScenarioExpand, DeterministicAndOverridable) {
  auto sc = parse_scenario("candidate A\ncandidate B\nvoters 40\ndouble_vote 25%\nreplay_otp 10%\nvoter 0 guess_otp=2\n");
  auto a = expand_scenario(sc, 5);
  EXPECT_EQ(a, expand_scenario(sc, 5));
  EXPECT_NE(a, expand_scenario(sc, 6));
  ASSERT_EQ(a.size(), 40u);
  EXPECT_EQ(std::count_if(a.begin(), a.end(), [](auto& s) { return s.double_vote; }), 10);
  EXPECT_EQ(a[0].otp_guesses, 2u);
  for (const auto& s : a) EXPECT_LT(s.candidate, 2u);

  auto bad = parse_scenario("candidate A\nvoters 2\nvoter 1 candidate=4\n");
  EXPECT_EQ(error_of([&] { expand_scenario(bad, 1); }), ErrorCode::ParseError);
  auto beyond = parse_scenario("candidate A\nvoters 2\nvoter 2 honest\n");
  EXPECT_EQ(error_of([&] { expand_scenario(beyond, 1); }), ErrorCode::ParseError);
}

TEST(RunScenario, TenHonestVoters) {
  auto run = run_scenario(honest(10), std::nullopt);
  const auto& r = run.report;
  EXPECT_EQ(r.accepted_votes, 10u);
  EXPECT_EQ(r.tally.total_votes, 10u);
  EXPECT_TRUE(r.vote_rejections.empty());
  EXPECT_TRUE(r.chain_valid);
  EXPECT_TRUE(r.all_checks_passed()) << to_text(r);
}

TEST(RunScenario, ThreeScriptedDoubleVotes) {
  auto sc = parse_scenario("seed 3\ncandidate Red\ncandidate Blue\nvoters 10\n"
                           "voter 2 double_vote\nvoter 5 double_vote\nvoter 9 double_vote\n");
  auto r = run_scenario(sc, std::nullopt).report;
  EXPECT_EQ(r.accepted_votes, 10u);
  EXPECT_EQ(r.vote_rejections, (std::map<std::string, std::uint64_t>{{"AlreadyVoted", 3}}));
  EXPECT_TRUE(r.all_checks_passed()) << to_text(r);
}

TEST(RunScenario, SameSeedSameHead) {
  auto sc = load_scenario(std::filesystem::path(ETHERVOTE_SCENARIO_DIR) / "mixed-attacks.txt");
  auto a = run_scenario(sc, std::nullopt).report;
  auto b = run_scenario(sc, std::nullopt).report;
  EXPECT_EQ(a.head_hash, b.head_hash);
  EXPECT_EQ(a.chain_length, b.chain_length);
  EXPECT_NE(a.head_hash, run_scenario(sc, 8).report.head_hash);
  EXPECT_TRUE(a.all_checks_passed()) << to_text(a);
}

TEST(RunScenario, AdversariesNeverExceedRegisteredCount) {
  auto sc = parse_scenario("seed 21\ncandidate A\ncandidate B\nvoters 120\nunregistered 20%\n"
                           "double_vote 30%\nreplay_otp 30%\nguess_otp 20% 4\nlate_vote 10%\nwrong_data 10%\n"
                           "untrusted_register 5\n");
  auto r = run_scenario(sc, std::nullopt).report;
  EXPECT_LE(r.tally.total_votes, r.registered_voters);
  EXPECT_EQ(r.accepted_votes, r.registered_voters);
  EXPECT_EQ(r.registration_rejections.at("Unauthorized"), 5u);
  EXPECT_TRUE(r.all_checks_passed()) << to_text(r);
}

TEST(VerifyChainFile, CleanFlippedAndTruncatedDumps) {
  const auto path = temp_file("dump.chain");
  RunOptions opts;
  opts.dump_path = path;
  auto run = run_scenario(honest(6), std::nullopt, opts);
  auto clean = verify_chain_file(path);
  EXPECT_TRUE(clean.valid());
  EXPECT_EQ(clean.tally, run.report.tally);

  const auto bytes = read_all(path);
  const auto starts = frame_starts(bytes);
  ASSERT_EQ(starts.size(), run.report.chain_length);
  const std::size_t target = 7;
  auto flipped = bytes;
  flipped[starts[target] + 40] ^= 0x20;
  auto bad = verify_chain_bytes(flipped);
  EXPECT_FALSE(bad.valid());
  EXPECT_EQ(bad.ledger.first_bad_index.value_or(999), target);

  auto truncated = bytes;
  truncated.resize(starts[4] + 10);
  write_all(path, truncated);
  auto cut = verify_chain_file(path);
  EXPECT_FALSE(cut.valid());
  EXPECT_EQ(cut.ledger.first_bad_index.value_or(999), 4u);

  write_all(path, Bytes{0x00, 0x01});
  EXPECT_FALSE(verify_chain_file(path).valid());
  std::filesystem::remove(path);
  EXPECT_EQ(error_of([&] { verify_chain_file(path); }), ErrorCode::IoError);
}

TEST(VerifyChainFile, IndependentCountOverDumpMatchesTally) {
  const auto path = temp_file("oracle.chain");
  RunOptions opts;
  opts.dump_path = path;
  auto sc = parse_scenario("seed 4\ncandidate A\ncandidate B\ncandidate C\nvoters 60\ndouble_vote 20%\n");
  auto run = run_scenario(sc, std::nullopt, opts);
  auto ledger = Ledger::from_bytes(read_all(path), nullptr);
  std::map<std::uint64_t, std::uint64_t> counts;
  std::set<Address> senders;
  for (const auto& tx : ledger->transactions()) {
    if (tx.kind != TxKind::VoteCast) continue;
    EXPECT_TRUE(senders.insert(tx.sender).second);
    // length-prefixed 8-byte big-endian id
    ASSERT_EQ(tx.payload.size(), 12u);
    ASSERT_EQ(tx.payload[3], 8);
    std::uint64_t id = 0;
    for (std::size_t k = 4; k < 12; ++k) id = (id << 8) | tx.payload[k];
    ++counts[id];
  }
  for (const auto& e : run.report.tally.counts) EXPECT_EQ(e.votes, counts[e.candidate_id]) << e.name;
  EXPECT_EQ(senders.size(), 60u);
  std::filesystem::remove(path);
}

TEST(Plaintext, FindsExactNeedlesOnly) {
  const std::string hay = "xx+301234yyAlice";
  Bytes b(hay.begin(), hay.end());
  EXPECT_EQ(find_plaintext(b, {"Alice", "Bob", "+30123"}), (std::vector<std::string>{"+30123", "Alice"}));
  EXPECT_TRUE(find_plaintext(b, {"alice"}).empty());
}
