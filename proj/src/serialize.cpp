#include "sdg/serialize.hpp"

#include <fstream>

#include "sdg/util.hpp"

namespace sdg::serialize {

using json = nlohmann::json;

json to_json(const ChatMessage& msg) {
  return {{"role", role_name(msg.role)}, {"content", msg.content}};
}

ChatMessage message_from_json(const json& j) {
  return {role_from_name(j.at("role").get<std::string>()),
          j.at("content").get<std::string>()};
}

json to_json(const PromptRecord& rec) {
  json turns = json::array();
  for (const auto& t : rec.turns) turns.push_back(to_json(t));
  return {{"id", rec.id},
          {"task_kind", task_kind_name(rec.task_kind)},
          {"text", rec.text},
          {"turns", turns},
          {"lineage", rec.lineage},
          {"split", split_name(rec.split)},
          {"unsafe_flagged", rec.unsafe_flagged},
          {"generator_id", rec.generator_id}};
}

PromptRecord prompt_from_json(const json& j) {
  PromptRecord rec;
  rec.id = j.at("id").get<std::string>();
  rec.task_kind = task_kind_from_name(j.at("task_kind").get<std::string>());
  rec.text = j.at("text").get<std::string>();
  for (const auto& t : j.at("turns")) rec.turns.push_back(message_from_json(t));
  rec.lineage = j.at("lineage").get<std::vector<std::string>>();
  rec.split = split_from_name(j.at("split").get<std::string>());
  rec.unsafe_flagged = j.at("unsafe_flagged").get<bool>();
  rec.generator_id = j.at("generator_id").get<std::string>();
  return rec;
}

json dialogue_to_json(const Dialogue& d, bool kept) {
  json turns = json::array();
  for (const auto& t : d.turns) turns.push_back(to_json(t));
  uint64_t h = fnv1a(d.origin_prompt);
  for (const auto& t : d.turns) {
    h = fnv1a("\x1e", h);
    h = fnv1a(t.content, h);
  }
  json out = {{"id", hex64(h)},
              {"origin_prompt", d.origin_prompt},
              {"persona_variant", persona_name(d.persona_variant)},
              {"turns", turns},
              {"kept", kept}};
  if (d.aggregate_reward) {
    out["aggregate_reward"] = *d.aggregate_reward;
  } else {
    out["aggregate_reward"] = nullptr;
  }
  return out;
}

Dialogue dialogue_from_json(const json& j) {
  Dialogue d;
  d.origin_prompt = j.at("origin_prompt").get<std::string>();
  std::string persona = j.at("persona_variant").get<std::string>();
  d.persona_variant = persona == "V2_complex"   ? PersonaVariant::V2_complex
                      : persona == "V3_concise" ? PersonaVariant::V3_concise
                                                : PersonaVariant::V1_normal;
  for (const auto& t : j.at("turns")) d.turns.push_back(message_from_json(t));
  if (!j.at("aggregate_reward").is_null()) {
    d.aggregate_reward = j.at("aggregate_reward").get<double>();
  }
  return d;
}

json to_json(const preference::PreferenceTriplet& triplet) {
  uint64_t h = fnv1a(triplet.prompt.id);
  h = fnv1a("\x1f", h);
  h = fnv1a(triplet.chosen.text, h);
  h = fnv1a("\x1f", h);
  h = fnv1a(triplet.rejected.text, h);
  json out = {
      {"id", hex64(h)},
      {"prompt_id", triplet.prompt.id},
      {"prompt_payload", to_json(triplet.prompt)},
      {"chosen",
       {{"text", triplet.chosen.text}, {"generator_id", triplet.chosen.generator_id}}},
      {"rejected",
       {{"text", triplet.rejected.text},
        {"generator_id", triplet.rejected.generator_id}}},
      {"judge", preference::judge_family_name(triplet.judge)},
  };
  out["reward_margin"] =
      triplet.reward_margin ? json(*triplet.reward_margin) : json(nullptr);
  out["chosen_reward"] =
      triplet.chosen_reward ? json(*triplet.chosen_reward) : json(nullptr);
  return out;
}

preference::PreferenceTriplet triplet_from_json(const json& j) {
  preference::PreferenceTriplet triplet;
  triplet.prompt = prompt_from_json(j.at("prompt_payload"));
  triplet.chosen = {j.at("chosen").at("text").get<std::string>(),
                    j.at("chosen").at("generator_id").get<std::string>(), ""};
  triplet.rejected = {j.at("rejected").at("text").get<std::string>(),
                      j.at("rejected").at("generator_id").get<std::string>(), ""};
  std::string judge = j.at("judge").get<std::string>();
  triplet.judge = judge == "ground_truth" ? preference::JudgeFamily::ground_truth
                  : judge == "llm_judge"  ? preference::JudgeFamily::llm_judge
                                          : preference::JudgeFamily::reward_model;
  if (!j.at("reward_margin").is_null()) {
    triplet.reward_margin = j.at("reward_margin").get<double>();
  }
  if (!j.at("chosen_reward").is_null()) {
    triplet.chosen_reward = j.at("chosen_reward").get<double>();
  }
  return triplet;
}

json to_json(const genetic::PopulationItem& item) {
  return {{"id", item.id},
          {"instruction", item.instruction},
          {"solution", item.solution},
          {"generation", item.generation},
          {"parent_ids", item.parent_ids},
          {"colony", item.colony},
          {"fitness_passed", item.fitness_passed}};
}

genetic::PopulationItem population_item_from_json(const json& j) {
  genetic::PopulationItem item;
  item.id = j.at("id").get<std::string>();
  item.instruction = j.at("instruction").get<std::string>();
  item.solution = j.at("solution").get<std::string>();
  item.generation = j.at("generation").get<int>();
  item.parent_ids = j.at("parent_ids").get<std::vector<std::string>>();
  item.colony = j.at("colony").get<int>();
  item.fitness_passed = j.at("fitness_passed").get<bool>();
  return item;
}

json to_json(const losses::PreferencePairInputs& inputs) {
  json out = {{"logp_policy_chosen", inputs.logp_policy_chosen},
              {"logp_policy_rejected", inputs.logp_policy_rejected},
              {"logp_ref_chosen", inputs.logp_ref_chosen},
              {"logp_ref_rejected", inputs.logp_ref_rejected},
              {"chosen_token_count", inputs.chosen_token_count}};
  out["reward_chosen"] = inputs.reward_chosen ? json(*inputs.reward_chosen) : json(nullptr);
  out["reward_rejected"] =
      inputs.reward_rejected ? json(*inputs.reward_rejected) : json(nullptr);
  return out;
}

losses::PreferencePairInputs pair_inputs_from_json(const json& j) {
  losses::PreferencePairInputs inputs;
  inputs.logp_policy_chosen = j.at("logp_policy_chosen").get<double>();
  inputs.logp_policy_rejected = j.at("logp_policy_rejected").get<double>();
  inputs.logp_ref_chosen = j.at("logp_ref_chosen").get<double>();
  inputs.logp_ref_rejected = j.at("logp_ref_rejected").get<double>();
  inputs.chosen_token_count = j.at("chosen_token_count").get<int>();
  if (j.contains("reward_chosen") && !j.at("reward_chosen").is_null()) {
    inputs.reward_chosen = j.at("reward_chosen").get<double>();
  }
  if (j.contains("reward_rejected") && !j.at("reward_rejected").is_null()) {
    inputs.reward_rejected = j.at("reward_rejected").get<double>();
  }
  return inputs;
}

void write_jsonl(const std::string& path, const std::vector<json>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  for (const auto& rec : records) {
    out << rec.dump() << "\n";
  }
}

std::vector<json> read_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read: " + path);
  std::vector<json> records;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    records.push_back(json::parse(line));
  }
  return records;
}

std::string jsonl_checksum(const std::vector<json>& records) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& rec : records) {
    h = fnv1a(rec.dump(), h);
    h = fnv1a("\n", h);
  }
  return hex64(h);
}

}  // namespace sdg::serialize
