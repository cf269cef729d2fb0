#include "ethervote/simulation.hpp"

#include <cstdio>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <unordered_set>

#include "ethervote/error.hpp"
#include "ethervote/json_views.hpp"
#include "ethervote/payloads.hpp"

namespace ethervote {

bool RunReport::all_checks_passed() const {
  return chain_valid && replay_equivalent && tally_matches_chain && receipts_verified &&
         rejections_left_no_trace && privacy_clean && attempts_balanced && tally_within_registered;
}

namespace {

constexpr std::string_view kFirstNames[] = {
    "Konstantinos", "Alexandra", "Dimitrios", "Georgia",    "Panagiotis", "Vasiliki",
    "Christos",     "Aikaterini", "Ioannis",  "Eleftheria", "Nikolaos",   "Theodora",
    "Spyridon",     "Anastasia",  "Evangelos", "Paraskevi"};
constexpr std::string_view kLastNames[] = {
    "Papadopoulos", "Georgiou",   "Nikolaidis", "Karagiannis", "Vlachopoulos", "Oikonomou",
    "Makridis",     "Antoniadis", "Theodorou",  "Christodoulou", "Konstantinou", "Pappas-Lambrou"};

std::string digits(Drbg& rng, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('0' + rng.uniform(10)));
  return s;
}

PersonalData make_citizen(Drbg& rng, std::uint32_t index) {
  char id[16];
  std::snprintf(id, sizeof id, "AK%06u%s", index, digits(rng, 2).c_str());
  return {id, std::string(kFirstNames[rng.uniform(std::size(kFirstNames))]),
          std::string(kLastNames[rng.uniform(std::size(kLastNames))]), "+3069" + digits(rng, 8)};
}

std::string random_code_except(Drbg& rng, const std::string& avoid) {
  std::string code;
  do {
    code = digits(rng, kOtpDigits);
  } while (code == avoid);
  return code;
}

struct Tracker {
  RunReport& report;

  template <typename F>
  std::optional<ErrorCode> attempt(std::map<std::string, std::uint64_t>& bucket, F&& f) {
    try {
      f();
      return std::nullopt;
    } catch (const Error& e) {
      ++bucket[std::string(to_string(e.code()))];
      return e.code();
    }
  }
};

}  // namespace

std::vector<std::string> find_plaintext(ByteView haystack, const std::vector<std::string>& needles) {
  std::map<std::size_t, std::unordered_set<std::string_view>> by_length;
  for (const auto& n : needles) {
    if (!n.empty()) by_length[n.size()].insert(n);
  }
  const std::string_view hay(reinterpret_cast<const char*>(haystack.data()), haystack.size());
  std::set<std::string> found;
  for (const auto& [len, set] : by_length) {
    if (len > hay.size()) break;
    for (std::size_t i = 0; i + len <= hay.size(); ++i) {
      if (auto it = set.find(hay.substr(i, len)); it != set.end()) found.emplace(*it);
    }
  }
  return {found.begin(), found.end()};
}

std::map<std::uint64_t, std::uint64_t> count_votes_on_chain(const Ledger& ledger) {
  std::map<std::uint64_t, std::uint64_t> counts;
  for (const auto& tx : ledger.transactions()) {
    if (tx.kind == TxKind::VoteCast) ++counts[decode_vote_payload(tx.payload)];
  }
  return counts;
}

RunResult run_scenario(const Scenario& sc, std::optional<std::uint64_t> seed_override,
                       const RunOptions& options) {
  const std::uint64_t seed = seed_override.value_or(sc.seed.value_or(1));
  RunResult run;
  run.plan = expand_scenario(sc, seed);
  run.clock = std::make_unique<ManualClock>(sc.start_time);
  auto& clock = *run.clock;
  run.node = std::make_unique<ElectionNode>(clock.as_clock(), seed, sc.start_time);
  auto& node = *run.node;
  auto& contract = node.contract();
  auto& report = run.report;
  report.seed = seed;
  report.voters = sc.voters;
  Tracker track{report};
  auto people_rng = Drbg::from_seed(seed, "citizens");
  auto adversary_rng = Drbg::from_seed(seed, "adversary");

  // phase 1: authorities and contract
  std::vector<Address> authorities;
  std::set<Address> trusted;
  for (std::uint32_t i = 0; i < sc.authorities; ++i) {
    authorities.push_back(node.accounts().create_account().account.address);
    trusted.insert(authorities.back());
  }
  const Address outsider = node.accounts().create_account().account.address;
  for (std::uint32_t i = 0; i < sc.voters; ++i) {
    run.voter_addresses.push_back(node.accounts().create_account().account.address);
    run.citizens.push_back(make_citizen(people_rng, i));
  }
  clock.advance(1);
  contract.init_election(authorities.front(),
                         ElectionConfig::make(trusted, sc.candidates, sc.otp_window));
  clock.advance(1);
  contract.advance_phase(authorities.front());

  // phase 2: registration at the authority desk
  for (const auto& s : run.plan) {
    if (!s.registered) continue;
    clock.advance(1);
    ++report.registration_attempts;
    track.attempt(report.registration_rejections, [&] {
      contract.register_citizen(authorities[s.index % authorities.size()], run.voter_addresses[s.index],
                                run.citizens[s.index]);
    });
  }
  for (std::uint32_t i = 0; i < sc.untrusted_register; ++i) {
    clock.advance(1);
    ++report.registration_attempts;
    auto stranger = node.accounts().create_account().account.address;
    auto data = make_citizen(people_rng, sc.voters + i);
    run.citizens.push_back(data);
    track.attempt(report.registration_rejections,
                  [&] { contract.register_citizen(outsider, stranger, data); });
  }
  for (const auto& s : run.plan) report.registered_voters += s.registered ? 1 : 0;
  clock.advance(1);
  contract.advance_phase(authorities.front());

  // phases 3 and 4: identification and voting, one voter at a time
  const auto window = static_cast<Timestamp>(sc.otp_window);
  std::optional<std::string> last_foreign_code;
  bool traces_ok = true;

  auto vote = [&](const Address& voter, std::uint64_t candidate, const std::string& code) {
    ++report.vote_attempts;
    const auto before = node.ledger().length();
    std::optional<TxReceipt> receipt;
    auto failure = track.attempt(report.vote_rejections,
                                 [&] { receipt = contract.cast_vote(voter, candidate, code, clock.now()); });
    if (failure) {
      if (node.ledger().length() != before) traces_ok = false;
    } else {
      ++report.accepted_votes;
      run.accepted.push_back({receipt->tx_hash, receipt->block.index, voter, candidate});
    }
    return failure;
  };
  auto authenticate = [&](const Address& voter, const PersonalData& data) -> std::optional<Timestamp> {
    ++report.auth_attempts;
    const auto before = node.ledger().length();
    auto failure = track.attempt(report.auth_rejections, [&] { contract.authenticate(voter, data, clock.now()); });
    if (failure) {
      if (node.ledger().length() != before) traces_ok = false;
      return std::nullopt;
    }
    return clock.now();
  };

  for (const auto& s : run.plan) {
    clock.advance(1);
    const Address& voter = run.voter_addresses[s.index];
    const PersonalData& data = run.citizens[s.index];
    const auto candidate = s.candidate;

    if (!s.registered) {
      authenticate(voter, data);
      vote(voter, candidate, digits(adversary_rng, kOtpDigits));
      continue;
    }
    if (s.wrong_data_first) {
      auto wrong = data;
      wrong.last_name += "x";
      authenticate(voter, wrong);
      clock.advance(1);
    }
    auto issued = authenticate(voter, data);
    if (!issued) continue;
    std::string code = *node.inbox().last(voter);
    bool done = false;

    if (s.late_offset) {
      clock.set(*issued + *s.late_offset);
      done = !vote(voter, candidate, code).has_value();
      if (!done) {
        clock.advance(1);
        issued = authenticate(voter, data);
        if (!issued) continue;
        code = *node.inbox().last(voter);
      }
    }
    if (!done && s.replay_foreign && last_foreign_code && *last_foreign_code != code) {
      vote(voter, candidate, *last_foreign_code);
    }
    for (std::uint32_t g = 0; !done && g < s.otp_guesses; ++g) {
      vote(voter, candidate, random_code_except(adversary_rng, code));
    }
    if (!done) {
      clock.set(std::max(clock.now(), *issued + std::min(s.vote_delay, window)));
      vote(voter, candidate, code);
    }
    if (s.replay_own) {
      clock.advance(1);
      vote(voter, candidate, code);
    }
    if (s.double_vote) {
      clock.advance(1);
      authenticate(voter, data);
      vote(voter, (candidate + 1) % sc.candidates.size(), random_code_except(adversary_rng, code));
    }
    last_foreign_code = code;
  }
  clock.advance(1);
  contract.advance_phase(authorities.front());

  // invariant checks against the chain
  const auto& ledger = node.ledger();
  const Bytes chain = ledger.serialize();
  report.chain_length = ledger.length();
  report.head_hash = to_hex(ledger.head_hash());
  report.tally = contract.results(authorities.front());
  report.chain_valid = ledger.verify_chain().valid && verify_serialized_chain(chain, &node.accounts()).valid;

  auto replay = replay_chain(ledger);
  const auto live = contract.state();
  report.replay_equivalent = replay.consistent && encode_state(replay.state) == encode_state(live);

  const auto on_chain = count_votes_on_chain(ledger);
  std::uint64_t voted_records = 0;
  for (const auto& [_, v] : live.voters) voted_records += v.status == VoterStatus::Voted ? 1 : 0;
  bool tally_ok = report.tally.total_votes == report.accepted_votes && voted_records == report.accepted_votes;
  for (const auto& e : report.tally.counts) {
    auto it = on_chain.find(e.candidate_id);
    tally_ok = tally_ok && e.votes == (it == on_chain.end() ? 0 : it->second);
  }
  report.tally_matches_chain = tally_ok;

  bool receipts_ok = true;
  for (const auto& a : run.accepted) {
    try {
      auto view = contract.verify_receipt(a.tx_hash);
      receipts_ok = receipts_ok && view.block_index == a.block_index && view.sender == a.voter &&
                    view.candidate_id == a.candidate;
    } catch (const Error&) {
      receipts_ok = false;
    }
  }
  report.receipts_verified = receipts_ok;
  report.rejections_left_no_trace = traces_ok;

  std::vector<std::string> secrets;
  for (const auto& c : run.citizens) {
    secrets.insert(secrets.end(), {c.id_number, c.first_name, c.last_name, c.phone});
  }
  const auto codes = node.inbox().all_codes();
  secrets.insert(secrets.end(), codes.begin(), codes.end());
  report.privacy_clean = find_plaintext(chain, secrets).empty();

  std::uint64_t rejected = 0;
  for (const auto& [_, n] : report.vote_rejections) rejected += n;
  report.attempts_balanced = report.accepted_votes + rejected == report.vote_attempts;
  report.tally_within_registered = report.tally.total_votes <= report.registered_voters;

  if (options.dump_path) {
    std::ofstream out(*options.dump_path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + options.dump_path->string());
    out.write(reinterpret_cast<const char*>(chain.data()), static_cast<std::streamsize>(chain.size()));
  }
  return run;
}

nlohmann::json to_json(const RunReport& r) {
  return {{"seed", r.seed},
          {"voters", r.voters},
          {"registered_voters", r.registered_voters},
          {"vote_attempts", r.vote_attempts},
          {"accepted_votes", r.accepted_votes},
          {"vote_rejections", r.vote_rejections},
          {"auth_attempts", r.auth_attempts},
          {"auth_rejections", r.auth_rejections},
          {"registration_attempts", r.registration_attempts},
          {"registration_rejections", r.registration_rejections},
          {"tally", to_json(r.tally)},
          {"chain_length", r.chain_length},
          {"head_hash", r.head_hash},
          {"checks",
           {{"chain_valid", r.chain_valid},
            {"replay_equivalent", r.replay_equivalent},
            {"tally_matches_chain", r.tally_matches_chain},
            {"receipts_verified", r.receipts_verified},
            {"rejections_left_no_trace", r.rejections_left_no_trace},
            {"privacy_clean", r.privacy_clean},
            {"attempts_balanced", r.attempts_balanced},
            {"tally_within_registered", r.tally_within_registered}}},
          {"all_checks_passed", r.all_checks_passed()}};
}

std::string to_text(const RunReport& r) {
  std::ostringstream out;
  auto codes = [&](const std::map<std::string, std::uint64_t>& m) {
    if (m.empty()) return std::string("none");
    std::string s;
    for (const auto& [k, v] : m) s += (s.empty() ? "" : ", ") + k + "=" + std::to_string(v);
    return s;
  };
  auto flag = [](bool b) { return b ? "ok" : "FAILED"; };
  out << "seed                " << r.seed << "\n"
      << "voters              " << r.voters << " (" << r.registered_voters << " registered)\n"
      << "vote attempts       " << r.vote_attempts << "\n"
      << "accepted votes      " << r.accepted_votes << "\n"
      << "vote rejections     " << codes(r.vote_rejections) << "\n"
      << "auth rejections     " << codes(r.auth_rejections) << "\n"
      << "reg. rejections     " << codes(r.registration_rejections) << "\n"
      << "tally (" << to_string(r.tally.phase) << ")\n";
  for (const auto& e : r.tally.counts) out << "  [" << e.candidate_id << "] " << e.name << ": " << e.votes << "\n";
  out << "  total " << r.tally.total_votes << "\n"
      << "chain length        " << r.chain_length << "\n"
      << "chain head          " << r.head_hash << "\n"
      << "chain valid         " << flag(r.chain_valid) << "\n"
      << "replay equivalent   " << flag(r.replay_equivalent) << "\n"
      << "tally matches chain " << flag(r.tally_matches_chain) << "\n"
      << "receipts verified   " << flag(r.receipts_verified) << "\n"
      << "rejections traceless " << flag(r.rejections_left_no_trace) << "\n"
      << "privacy scan        " << flag(r.privacy_clean) << "\n"
      << "attempts balanced   " << flag(r.attempts_balanced) << "\n"
      << "tally <= registered " << flag(r.tally_within_registered) << "\n";
  return out.str();
}

FileVerification verify_chain_bytes(ByteView bytes) {
  FileVerification v;
  v.ledger = verify_serialized_chain(bytes);
  if (!v.ledger.valid) return v;
  auto ledger = Ledger::from_bytes(bytes, nullptr);
  auto replay = replay_chain(*ledger);
  v.replay_consistent = replay.consistent;
  v.replay_bad_index = replay.first_bad_index;
  v.replay_reason = replay.reason;
  if (!replay.consistent) return v;
  v.tally = replay.state.tally();
  const auto counts = count_votes_on_chain(*ledger);
  std::uint64_t sum = 0;
  bool ok = true;
  for (const auto& e : v.tally.counts) {
    auto it = counts.find(e.candidate_id);
    ok = ok && e.votes == (it == counts.end() ? 0 : it->second);
  }
  for (const auto& [_, n] : counts) sum += n;
  v.tally_matches_chain = ok && sum == v.tally.total_votes;
  return v;
}

FileVerification verify_chain_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return verify_chain_bytes(bytes);
}

nlohmann::json to_json(const FileVerification& v) {
  nlohmann::json j = {{"valid", v.valid()}, {"ledger", to_json(v.ledger)}, {"replay_consistent", v.replay_consistent},
                      {"tally_matches_chain", v.tally_matches_chain}};
  if (v.replay_bad_index) {
    j["replay_bad_index"] = *v.replay_bad_index;
    j["replay_reason"] = v.replay_reason;
  }
  if (v.replay_consistent) j["tally"] = to_json(v.tally);
  return j;
}

}  // namespace ethervote
