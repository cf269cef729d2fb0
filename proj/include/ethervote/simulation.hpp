#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ethervote/contract.hpp"
#include "ethervote/identity.hpp"
#include "ethervote/node.hpp"
#include "ethervote/scenario.hpp"

namespace ethervote {

struct RunReport {
  std::uint64_t seed = 0;
  std::uint32_t voters = 0;
  std::uint64_t registered_voters = 0;

  std::uint64_t vote_attempts = 0;
  std::uint64_t accepted_votes = 0;
  std::map<std::string, std::uint64_t> vote_rejections;
  std::uint64_t auth_attempts = 0;
  std::map<std::string, std::uint64_t> auth_rejections;
  std::uint64_t registration_attempts = 0;
  std::map<std::string, std::uint64_t> registration_rejections;

  TallySnapshot tally;
  std::uint64_t chain_length = 0;
  std::string head_hash;

  bool chain_valid = false;
  bool replay_equivalent = false;
  bool tally_matches_chain = false;
  bool receipts_verified = false;
  bool rejections_left_no_trace = false;
  bool privacy_clean = false;
  bool attempts_balanced = false;
  bool tally_within_registered = false;

  bool all_checks_passed() const;
};

nlohmann::json to_json(const RunReport& report);
std::string to_text(const RunReport& report);

/// Everything a run leaves behind, for callers that want to inspect it.
struct RunResult {
  RunReport report;
  std::unique_ptr<ManualClock> clock;
  std::unique_ptr<ElectionNode> node;
  std::vector<VoterScript> plan;
  std::vector<Address> voter_addresses;
  std::vector<PersonalData> citizens;
  /// (receipt, voter, candidate) for every accepted vote.
  struct Accepted {
    Digest tx_hash{};
    std::uint64_t block_index = 0;
    Address voter;
    std::uint64_t candidate = 0;
  };
  std::vector<Accepted> accepted;
};

struct RunOptions {
  std::optional<std::filesystem::path> dump_path;
};

/// Runs all four phases of an election on a fresh in-process stack, single
/// threaded, then checks the election invariants against the resulting chain.
/// `seed` overrides the scenario's embedded seed.
RunResult run_scenario(const Scenario& scenario, std::optional<std::uint64_t> seed,
                       const RunOptions& options = {});

/// Finds every needle occurring in `haystack` (byte-exact).
std::vector<std::string> find_plaintext(ByteView haystack, const std::vector<std::string>& needles);

/// Per-candidate counts taken straight from VoteCast payloads on the chain.
std::map<std::uint64_t, std::uint64_t> count_votes_on_chain(const Ledger& ledger);

struct FileVerification {
  VerificationReport ledger;
  bool replay_consistent = false;
  std::optional<std::uint64_t> replay_bad_index;
  std::string replay_reason;
  bool tally_matches_chain = false;
  TallySnapshot tally;

  bool valid() const { return ledger.valid && replay_consistent && tally_matches_chain; }
};

/// Throws Error(IoError) when the file cannot be read; corrupt content is
/// reported, never thrown.
FileVerification verify_chain_file(const std::filesystem::path& path);
FileVerification verify_chain_bytes(ByteView bytes);

nlohmann::json to_json(const FileVerification& v);

}  // namespace ethervote
