#include "sdg/dialogue.hpp"

#include "sdg/util.hpp"

namespace sdg::dialogue {

std::string render_turns(const Dialogue& d) {
  if (d.turns.empty()) throw std::invalid_argument("cannot render empty dialogue");
  std::string out;
  for (const auto& turn : d.turns) {
    out += turn.role == Role::user ? "User: " : "Assistant: ";
    out += turn.content;
    out += "\n";
  }
  if (!out.empty()) out.pop_back();
  return out;
}

std::string render_history(const Dialogue& d) {
  return std::string("<|The Start of Assistant's Conversation with User|>\n") +
         render_turns(d) + "\n<|The End of Assistant's Conversation with User|>";
}

namespace {

// Sentence boundaries: '.', '!' or '?' followed by whitespace or end.
std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if ((c == '.' || c == '!' || c == '?') &&
        (i + 1 >= text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))) {
      sentences.push_back(text.substr(start, i - start + 1));
      start = i + 1;
      while (start < text.size() && std::isspace(static_cast<unsigned char>(text[start]))) {
        ++start;
      }
      i = start == 0 ? i : start - 1;
    }
  }
  if (start < text.size()) sentences.push_back(text.substr(start));
  return sentences;
}

bool is_polite(const std::string& sentence, const StripOptions& options) {
  std::string t = trim(sentence);
  for (const auto& opener : options.polite_openers) {
    if (starts_with_ci(t, opener)) return true;
  }
  return false;
}

}  // namespace

StripResult strip_politeness(const std::string& user_turn, const StripOptions& options) {
  auto sentences = split_sentences(user_turn);
  size_t first_kept = 0;
  while (first_kept < sentences.size() && is_polite(sentences[first_kept], options)) {
    ++first_kept;
  }
  if (first_kept == 0) return {user_turn, false};
  if (first_kept >= sentences.size()) {
    // Would-empty guard: keep the original, flag it.
    return {user_turn, true};
  }
  std::string out;
  for (size_t i = first_kept; i < sentences.size(); ++i) {
    if (!out.empty()) out += " ";
    out += trim(sentences[i]);
  }
  return {out, false};
}

Dialogue synthesize_dialogue(const PromptRecord& prompt, backend::Backend& generator,
                             const templates::TemplateCatalog& catalog,
                             const SynthesisOptions& options) {
  if (prompt.task_kind == TaskKind::two_turn || prompt.text.empty()) {
    throw std::invalid_argument("prompt must be single-turn text");
  }
  if (options.k_exchanges < 1) throw std::invalid_argument("k_exchanges must be >= 1");

  const char* persona_template = options.persona == PersonaVariant::V1_normal
                                     ? "user_turn_v1"
                                     : options.persona == PersonaVariant::V2_complex
                                           ? "user_turn_v2"
                                           : "user_turn_v3";

  Dialogue d;
  d.origin_prompt = prompt.id;
  d.persona_variant = options.persona;
  d.turns.push_back({Role::user, prompt.text});

  backend::GenParams greedy = backend::greedy_params();
  for (int exchange = 0; exchange < options.k_exchanges; ++exchange) {
    if (exchange > 0) {
      // The persona template already carries the sentinel markers around
      // the slot, so only the labeled turns are substituted.
      std::string elicit = catalog.render(
          persona_template, {{"Conversation History", render_turns(d)}});
      std::string user_turn =
          backend::generate(generator, {{Role::user, elicit}}, greedy).text;
      user_turn = strip_politeness(trim(user_turn), options.strip).text;
      d.turns.push_back({Role::user, user_turn});
    }
    std::string reply = backend::generate(generator, d.turns, greedy).text;
    d.turns.push_back({Role::assistant, reply});
  }
  validate_dialogue(d);
  return d;
}

FilterResult filter_by_reward(std::vector<Dialogue> dialogues,
                              backend::Backend& reward_backend,
                              const backend::RewardWeights& weights, double threshold,
                              size_t* clamp_warnings) {
  FilterResult result;
  for (auto& d : dialogues) {
    auto scores = backend::score_clamped(reward_backend, d, clamp_warnings);
    d.aggregate_reward = backend::aggregate_reward(scores, weights);
    if (*d.aggregate_reward >= threshold) {
      result.kept.push_back(std::move(d));
    } else {
      result.dropped.push_back(std::move(d));
    }
  }
  return result;
}

}  // namespace sdg::dialogue
