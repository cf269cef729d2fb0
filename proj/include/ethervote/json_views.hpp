#pragma once

#include <json.hpp>

#include "ethervote/contract.hpp"
#include "ethervote/ledger.hpp"

namespace ethervote {

nlohmann::json to_json(const TallySnapshot& snapshot);
nlohmann::json to_json(const VerificationReport& report);

}  // namespace ethervote
