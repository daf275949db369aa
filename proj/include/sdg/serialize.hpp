#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sdg/chat.hpp"
#include "sdg/genetic.hpp"
#include "sdg/losses.hpp"
#include "sdg/preference.hpp"
#include "sdg/record.hpp"

namespace sdg::serialize {

nlohmann::json to_json(const ChatMessage& msg);
ChatMessage message_from_json(const nlohmann::json& j);

nlohmann::json to_json(const PromptRecord& rec);
PromptRecord prompt_from_json(const nlohmann::json& j);

// {id, origin_prompt, persona_variant, turns, aggregate_reward, kept}
nlohmann::json dialogue_to_json(const Dialogue& d, bool kept);
Dialogue dialogue_from_json(const nlohmann::json& j);

nlohmann::json to_json(const preference::PreferenceTriplet& triplet);
preference::PreferenceTriplet triplet_from_json(const nlohmann::json& j);

nlohmann::json to_json(const genetic::PopulationItem& item);
genetic::PopulationItem population_item_from_json(const nlohmann::json& j);

nlohmann::json to_json(const losses::PreferencePairInputs& inputs);
losses::PreferencePairInputs pair_inputs_from_json(const nlohmann::json& j);

// JSONL: UTF-8, one compact record per line.
void write_jsonl(const std::string& path, const std::vector<nlohmann::json>& records);
std::vector<nlohmann::json> read_jsonl(const std::string& path);

// FNV-1a over the payload lines only (no timestamps).
std::string jsonl_checksum(const std::vector<nlohmann::json>& records);

}  // namespace sdg::serialize
