#pragma once

#include "afsec/network_model.hpp"

#include <json.hpp>

#include <string>

namespace afsec {

/// Keys: M, h_s, h_t, h_e, P_s, P_relay, sigma2. Throws Error(ParseError) on
/// missing keys or wrong types, Error(InvalidInstance) on bad values.
ChannelInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const ChannelInstance& inst);

ChannelInstance load_instance(const std::string& path);

nlohmann::json report_to_json(const SolveReport& report);

} // namespace afsec
