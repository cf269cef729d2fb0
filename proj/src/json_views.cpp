#include "ethervote/json_views.hpp"

namespace ethervote {

nlohmann::json to_json(const TallySnapshot& snapshot) {
  auto counts = nlohmann::json::array();
  for (const auto& e : snapshot.counts) {
    counts.push_back({{"candidate_id", e.candidate_id}, {"name", e.name}, {"votes", e.votes}});
  }
  return {{"counts", counts}, {"total_votes", snapshot.total_votes}, {"phase", to_string(snapshot.phase)}};
}

nlohmann::json to_json(const VerificationReport& report) {
  nlohmann::json j = {{"valid", report.valid},
                      {"blocks_checked", report.blocks_checked},
                      {"signatures_checked", report.signatures_checked}};
  if (report.first_bad_index) {
    j["first_bad_index"] = *report.first_bad_index;
    j["reason"] = report.reason;
  }
  return j;
}

}  // namespace ethervote
