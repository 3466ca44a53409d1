#pragma once

#include "core/model.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace koman {

Instance parse_instance(std::string_view document);
Instance load_instance(const std::string& path);

// indent < 0 writes compact JSON.
std::string serialize_instance(const Instance& inst, int indent = 2);

// Tree in the file's node grammar: a player name or {"l": node, "r": node}.
nlohmann::json tree_to_json(const TournamentTree& tree, const std::vector<std::string>& names);

nlohmann::json report_to_json(const ValidationReport& report);

}  // namespace koman
