#include "ethervote/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ethervote/error.hpp"

namespace ethervote {

std::uint32_t Share::resolve(std::uint32_t population) const {
  if (count) return std::min(*count, population);
  return static_cast<std::uint32_t>(std::llround(population * percent / 100.0));
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) fail(line, "bad number '" + std::string(text) + "'");
  return value;
}

Share parse_share(std::string_view text, std::size_t line) {
  Share s;
  if (!text.empty() && text.back() == '%') {
    std::string num(text.substr(0, text.size() - 1));
    char* end = nullptr;
    s.percent = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0' || s.percent < 0 || s.percent > 100) fail(line, "bad percentage");
  } else {
    s.count = parse_number<std::uint32_t>(text, line);
  }
  return s;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

void parse_override(Scenario& sc, const std::vector<std::string>& w, std::size_t line) {
  if (w.size() < 3) fail(line, "voter needs an index and at least one behaviour");
  auto& o = sc.overrides[parse_number<std::uint32_t>(w[1], line)];
  for (std::size_t i = 2; i < w.size(); ++i) {
    auto eq = w[i].find('=');
    const std::string key = w[i].substr(0, eq);
    const std::string val = eq == std::string::npos ? "" : w[i].substr(eq + 1);
    auto need = [&] {
      if (val.empty()) fail(line, key + " needs =value");
    };
    if (key == "honest") {
      o.registered = true;
      o.wrong_data = o.double_vote = o.replay_otp = false;
      o.otp_guesses = 0;
      o.late_offset = -1;
    } else if (key == "unregistered") {
      o.registered = false;
    } else if (key == "wrong_data") {
      o.wrong_data = true;
    } else if (key == "double_vote") {
      o.double_vote = true;
    } else if (key == "replay_otp") {
      o.replay_otp = true;
    } else if (key == "guess_otp") {
      need();
      o.otp_guesses = parse_number<std::uint32_t>(val, line);
    } else if (key == "late_vote") {
      need();
      o.late_offset = parse_number<std::int64_t>(val, line);
    } else if (key == "delay") {
      need();
      o.vote_delay = parse_number<std::int64_t>(val, line);
    } else if (key == "candidate") {
      need();
      o.candidate = parse_number<std::uint64_t>(val, line);
    } else {
      fail(line, "unknown voter behaviour '" + key + "'");
    }
  }
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto content = trim(raw);
    if (content.empty()) continue;
    const auto space = content.find_first_of(" \t");
    const std::string key = content.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : trim(content.substr(space));
    const auto w = words(rest);
    auto one = [&]() -> const std::string& {
      if (w.size() != 1) fail(line, key + " takes one value");
      return w[0];
    };

    if (key == "seed") {
      sc.seed = parse_number<std::uint64_t>(one(), line);
    } else if (key == "window") {
      sc.otp_window = parse_number<std::uint64_t>(one(), line);
    } else if (key == "authorities") {
      sc.authorities = parse_number<std::uint32_t>(one(), line);
    } else if (key == "candidate") {
      if (rest.empty()) fail(line, "candidate needs a name");
      sc.candidates.push_back(rest);
    } else if (key == "voters") {
      sc.voters = parse_number<std::uint32_t>(one(), line);
    } else if (key == "vote_delay") {
      sc.vote_delay = parse_number<std::int64_t>(one(), line);
    } else if (key == "start_time") {
      sc.start_time = parse_number<std::int64_t>(one(), line);
    } else if (key == "double_vote") {
      sc.double_vote = parse_share(one(), line);
    } else if (key == "replay_otp") {
      sc.replay_otp = parse_share(one(), line);
    } else if (key == "wrong_data") {
      sc.wrong_data = parse_share(one(), line);
    } else if (key == "unregistered") {
      sc.unregistered = parse_share(one(), line);
    } else if (key == "guess_otp") {
      if (w.empty() || w.size() > 2) fail(line, "guess_otp <share> [attempts]");
      sc.guess_otp = parse_share(w[0], line);
      if (w.size() == 2) sc.guess_attempts = parse_number<std::uint32_t>(w[1], line);
    } else if (key == "late_vote") {
      if (w.empty() || w.size() > 2) fail(line, "late_vote <share> [offset]");
      sc.late_vote = parse_share(w[0], line);
      if (w.size() == 2) sc.late_offset = parse_number<std::int64_t>(w[1], line);
    } else if (key == "untrusted_register") {
      sc.untrusted_register = parse_number<std::uint32_t>(one(), line);
    } else if (key == "voter") {
      parse_override(sc, words(content), line);
    } else {
      fail(line, "unknown directive '" + key + "'");
    }
  }
  if (sc.candidates.empty()) fail(line, "scenario declares no candidates");
  if (sc.authorities == 0) fail(line, "at least one authority is required");
  if (sc.otp_window == 0) fail(line, "window must be positive");
  if (sc.vote_delay < 0) fail(line, "vote_delay must be non-negative");
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<VoterScript> expand_scenario(const Scenario& sc, std::uint64_t seed) {
  auto rng = Drbg::from_seed(seed, "scenario");
  const auto n = sc.voters;
  std::vector<VoterScript> plan(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    plan[i].index = i;
    plan[i].candidate = rng.uniform(sc.candidates.size());
    plan[i].vote_delay = sc.vote_delay;
  }

  // each behaviour draws its own subset; subsets may overlap
  auto pick = [&](const Share& share, std::uint32_t first) {
    std::vector<std::uint32_t> pool(n > first ? n - first : 0);
    std::iota(pool.begin(), pool.end(), first);
    rng.shuffle(pool);
    pool.resize(std::min<std::size_t>(share.resolve(n), pool.size()));
    return pool;
  };
  for (auto i : pick(sc.unregistered, 0)) plan[i].registered = false;
  for (auto i : pick(sc.wrong_data, 0)) plan[i].wrong_data_first = true;
  for (auto i : pick(sc.guess_otp, 0)) plan[i].otp_guesses = sc.guess_attempts;
  const std::int64_t late = sc.late_offset >= 0 ? sc.late_offset : static_cast<std::int64_t>(sc.otp_window) + 1;
  for (auto i : pick(sc.late_vote, 0)) plan[i].late_offset = late;
  // a replayer needs someone earlier whose code it can capture
  for (auto i : pick(sc.replay_otp, 1)) {
    plan[i].replay_foreign = true;
    plan[i].replay_own = true;
  }
  for (auto i : pick(sc.double_vote, 0)) plan[i].double_vote = true;

  for (const auto& [index, o] : sc.overrides) {
    if (index >= n) throw Error(ErrorCode::ParseError, "override for voter " + std::to_string(index) + " beyond population");
    auto& s = plan[index];
    if (o.registered) s.registered = *o.registered;
    if (o.wrong_data) s.wrong_data_first = *o.wrong_data;
    if (o.double_vote) s.double_vote = *o.double_vote;
    if (o.replay_otp) s.replay_foreign = s.replay_own = *o.replay_otp;
    if (o.otp_guesses) s.otp_guesses = *o.otp_guesses;
    if (o.late_offset) {
      if (*o.late_offset < 0) {
        s.late_offset.reset();
      } else {
        s.late_offset = *o.late_offset;
      }
    }
    if (o.vote_delay) s.vote_delay = *o.vote_delay;
    if (o.candidate) {
      if (*o.candidate >= sc.candidates.size()) {
        throw Error(ErrorCode::ParseError, "voter " + std::to_string(index) + " references unknown candidate " +
                                               std::to_string(*o.candidate));
      }
      s.candidate = *o.candidate;
    }
  }
  return plan;
}

}  // namespace ethervote
