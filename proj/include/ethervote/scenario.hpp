#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ethervote/crypto.hpp"

namespace ethervote {

/// A population share: either a percentage of the voters or an absolute count.
struct Share {
  double percent = 0.0;
  std::optional<std::uint32_t> count;

  std::uint32_t resolve(std::uint32_t population) const;
};

/// Explicit per-voter script override from a `voter` line.
struct VoterOverride {
  std::optional<bool> registered;
  std::optional<bool> wrong_data;
  std::optional<bool> double_vote;
  std::optional<bool> replay_otp;
  std::optional<std::uint32_t> otp_guesses;
  std::optional<std::int64_t> late_offset;
  std::optional<std::int64_t> vote_delay;
  std::optional<std::uint64_t> candidate;
};

/// Parsed scenario file. See docs/scenario-format.md.
struct Scenario {
  std::optional<std::uint64_t> seed;
  std::uint64_t otp_window = 300;
  std::uint32_t authorities = 1;
  std::vector<std::string> candidates;
  std::uint32_t voters = 0;
  std::int64_t vote_delay = 120;
  Timestamp start_time = 1'700'000'000;

  Share double_vote;
  Share replay_otp;
  Share wrong_data;
  Share unregistered;
  Share guess_otp;
  std::uint32_t guess_attempts = 3;
  Share late_vote;
  std::int64_t late_offset = -1;  // -1: window + 1
  std::uint32_t untrusted_register = 0;

  std::map<std::uint32_t, VoterOverride> overrides;
};

/// Throws Error(ParseError) with a line number.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Fully expanded plan for one voter.
struct VoterScript {
  std::uint32_t index = 0;
  bool registered = true;
  bool wrong_data_first = false;
  std::uint32_t otp_guesses = 0;
  /// First vote attempt at this offset from issuance (expected OtpExpired when
  /// past the window), followed by re-authentication.
  std::optional<std::int64_t> late_offset;
  /// Submit the code most recently delivered to another voter first.
  bool replay_foreign = false;
  /// Resubmit the own code after the accepted vote.
  bool replay_own = false;
  /// Re-authenticate and try to vote again after the accepted vote.
  bool double_vote = false;
  std::uint64_t candidate = 0;
  std::int64_t vote_delay = 120;

  bool operator==(const VoterScript&) const = default;
};

/// Deterministic: the same scenario and seed always give the same plan.
/// Throws Error(ParseError) when an override names an unknown candidate or voter.
std::vector<VoterScript> expand_scenario(const Scenario& scenario, std::uint64_t seed);

}  // namespace ethervote
