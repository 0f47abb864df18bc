#pragma once

#include <json.hpp>

#include "crnatoms/multistat.hpp"

namespace crn::detail {

nlohmann::json report_json(const SteadyStateReport& r);
SteadyStateReport report_from(const nlohmann::json& j);
nlohmann::json witness_json(const Witness& w);
Witness witness_from(const nlohmann::json& j);

}  // namespace crn::detail
