#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sdg/backend.hpp"
#include "sdg/record.hpp"
#include "sdg/templates.hpp"

namespace sdg::dialogue {

// Turns serialized as "User:" / "Assistant:" lines.
std::string render_turns(const Dialogue& d);

// render_turns wrapped in the conversation sentinel markers.
std::string render_history(const Dialogue& d);

struct StripOptions {
  // Sentence openers removed from the front of user turns.
  std::vector<std::string> polite_openers = {"thank you",  "thanks", "sure",
                                             "i'd be happy to", "great",
                                             "i appreciate"};
};

struct StripResult {
  std::string text;
  bool would_empty = false;  // stripping would have consumed everything
};

// Removes leading sentences whose openers match; never empties the turn.
StripResult strip_politeness(const std::string& user_turn,
                             const StripOptions& options = {});

struct SynthesisOptions {
  int k_exchanges = 3;
  PersonaVariant persona = PersonaVariant::V1_normal;
  StripOptions strip;
};

// Iterative role-play: exchange 1 answers the prompt; later user turns are
// elicited with the persona prompt over the running history. All
// generation is greedy.
Dialogue synthesize_dialogue(const PromptRecord& prompt, backend::Backend& generator,
                             const templates::TemplateCatalog& catalog,
                             const SynthesisOptions& options = {});

struct FilterResult {
  std::vector<Dialogue> kept;
  std::vector<Dialogue> dropped;
};

// Scores every dialogue, populates aggregate_reward, keeps aggregate >= threshold.
FilterResult filter_by_reward(std::vector<Dialogue> dialogues,
                              backend::Backend& reward_backend,
                              const backend::RewardWeights& weights, double threshold,
                              size_t* clamp_warnings = nullptr);

}  // namespace sdg::dialogue
