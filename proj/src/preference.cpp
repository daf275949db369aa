#include "sdg/preference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "sdg/dialogue.hpp"

namespace sdg::preference {

using backend::GenParams;

const char* judge_family_name(JudgeFamily judge) {
  switch (judge) {
    case JudgeFamily::ground_truth: return "ground_truth";
    case JudgeFamily::llm_judge: return "llm_judge";
    case JudgeFamily::reward_model: return "reward_model";
  }
  return "reward_model";
}

const char* pair_verdict_name(PairVerdict verdict) {
  switch (verdict) {
    case PairVerdict::r1_wins: return "r1_wins";
    case PairVerdict::r2_wins: return "r2_wins";
    case PairVerdict::tie: return "tie";
    case PairVerdict::inconsistent: return "inconsistent";
    case PairVerdict::invalid: return "invalid";
  }
  return "invalid";
}

namespace {

std::string params_digest(const GenParams& params) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "t=%.4f;p=%.4f;m=%d;g=%d;s=%lld", params.temperature,
                params.top_p, params.max_tokens, params.greedy ? 1 : 0,
                params.seed ? static_cast<long long>(*params.seed) : -1LL);
  return content_hash(buf);
}

std::vector<ChatMessage> prompt_messages(const PromptRecord& prompt) {
  if (prompt.task_kind == TaskKind::two_turn) {
    return prompt.turns;
  }
  return {{Role::user, prompt.text}};
}

}  // namespace

std::vector<CandidateResponse> gen_candidates(const PromptRecord& prompt,
                                              const std::vector<NamedBackend>& backends,
                                              int k_per_backend,
                                              const GenParams& params) {
  if (backends.empty()) throw std::invalid_argument("need at least one backend");
  if (k_per_backend < 1) throw std::invalid_argument("k_per_backend must be >= 1");
  auto messages = prompt_messages(prompt);
  std::string digest = params_digest(params);

  std::vector<CandidateResponse> out;
  std::set<std::string> seen;
  for (const auto& named : backends) {
    for (int k = 0; k < k_per_backend; ++k) {
      std::string text = backend::generate(*named.backend, messages, params).text;
      if (text.empty() || !seen.insert(text).second) continue;
      out.push_back({std::move(text), named.id, digest});
    }
  }
  return out;
}

std::optional<std::string> extract_final_answer(const std::string& response) {
  constexpr const char* kMarker = "#### ";
  size_t pos = response.rfind(kMarker);
  if (pos == std::string::npos) return std::nullopt;
  return trim(response.substr(pos + 5));
}

std::string normalize_answer(const std::string& answer) {
  std::string t = trim(answer);
  while (!t.empty()) {
    char c = t.back();
    if (c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':') {
      t.pop_back();
      t = rtrim(t);
    } else {
      break;
    }
  }
  // Numeric collapse: "42.0" and "42" compare equal.
  if (!t.empty()) {
    char* end = nullptr;
    double value = std::strtod(t.c_str(), &end);
    if (end && *end == '\0' && std::isfinite(value)) {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.12g", value);
      return buf;
    }
  }
  return t;
}

namespace {

bool candidate_correct(const CandidateResponse& candidate,
                       const GroundTruthOracle& oracle) {
  if (oracle.kind == GroundTruthOracle::Kind::final_answer_match) {
    auto answer = extract_final_answer(candidate.text);
    if (!answer) return false;
    return normalize_answer(*answer) == normalize_answer(oracle.expected_answer);
  }
  return instruct::verify(oracle.instruction, candidate.text).pass;
}

}  // namespace

std::optional<PreferenceTriplet> judge_ground_truth(
    const PromptRecord& prompt, const std::vector<CandidateResponse>& candidates,
    const GroundTruthOracle& oracle) {
  if (candidates.size() < 2) {
    throw std::invalid_argument("need at least two candidates");
  }
  const CandidateResponse* first_correct = nullptr;
  const CandidateResponse* first_incorrect = nullptr;
  for (const auto& candidate : candidates) {
    if (candidate_correct(candidate, oracle)) {
      if (!first_correct) first_correct = &candidate;
    } else {
      if (!first_incorrect) first_incorrect = &candidate;
    }
    if (first_correct && first_incorrect) break;
  }
  if (!first_correct || !first_incorrect) return std::nullopt;
  PreferenceTriplet triplet;
  triplet.prompt = prompt;
  triplet.chosen = *first_correct;
  triplet.rejected = *first_incorrect;
  triplet.judge = JudgeFamily::ground_truth;
  return triplet;
}

namespace {

// One judge call: returns which of (first, second) the verdict names,
// tie, or invalid. first occupies slot A.
enum class SlotOutcome { first, second, tie, invalid };

SlotOutcome judge_once(const PromptRecord& prompt, const CandidateResponse& first,
                       const CandidateResponse& second, backend::Backend& judge_backend,
                       const templates::TemplateCatalog& catalog) {
  std::string question =
      prompt.task_kind == TaskKind::two_turn ? prompt.turns.back().content : prompt.text;
  std::string body = catalog.render(
      "llm_judge", {{"text1", question}, {"text2", first.text}, {"text3", second.text}});
  std::string reply =
      backend::generate(judge_backend, {{Role::user, body}}, GenParams{}).text;
  auto verdict = templates::parse_verdict(reply);
  switch (verdict.value) {
    case templates::Verdict::Value::A: return SlotOutcome::first;
    case templates::Verdict::Value::B: return SlotOutcome::second;
    case templates::Verdict::Value::Tie: return SlotOutcome::tie;
    case templates::Verdict::Value::Invalid: return SlotOutcome::invalid;
  }
  return SlotOutcome::invalid;
}

}  // namespace

PairVerdict judge_llm(const PromptRecord& prompt, const CandidateResponse& r1,
                      const CandidateResponse& r2, backend::Backend& judge_backend,
                      const templates::TemplateCatalog& catalog) {
  if (r1.text == r2.text) {
    throw std::invalid_argument("responses must differ");
  }
  SlotOutcome call1 = judge_once(prompt, r1, r2, judge_backend, catalog);
  SlotOutcome call2 = judge_once(prompt, r2, r1, judge_backend, catalog);
  if (call1 == SlotOutcome::invalid || call2 == SlotOutcome::invalid) {
    return PairVerdict::invalid;
  }
  // Map slot outcomes back to responses: in call 2 the slots are swapped.
  bool call1_r1 = call1 == SlotOutcome::first;
  bool call1_r2 = call1 == SlotOutcome::second;
  bool call2_r1 = call2 == SlotOutcome::second;
  bool call2_r2 = call2 == SlotOutcome::first;
  if (call1 == SlotOutcome::tie && call2 == SlotOutcome::tie) return PairVerdict::tie;
  if (call1_r1 && call2_r1) return PairVerdict::r1_wins;
  if (call1_r2 && call2_r2) return PairVerdict::r2_wins;
  return PairVerdict::inconsistent;
}

std::optional<PreferenceTriplet> triplet_from_llm_verdict(const PromptRecord& prompt,
                                                          const CandidateResponse& r1,
                                                          const CandidateResponse& r2,
                                                          PairVerdict verdict) {
  if (verdict != PairVerdict::r1_wins && verdict != PairVerdict::r2_wins) {
    return std::nullopt;  // ties and inconsistencies never yield triplets
  }
  PreferenceTriplet triplet;
  triplet.prompt = prompt;
  triplet.chosen = verdict == PairVerdict::r1_wins ? r1 : r2;
  triplet.rejected = verdict == PairVerdict::r1_wins ? r2 : r1;
  triplet.judge = JudgeFamily::llm_judge;
  return triplet;
}

namespace {

Dialogue dialogue_for(const PromptRecord& prompt, const std::string& response) {
  Dialogue d;
  d.origin_prompt = prompt.id;
  d.turns = prompt_messages(prompt);
  d.turns.push_back({Role::assistant, response});
  return d;
}

}  // namespace

std::optional<PreferenceTriplet> judge_reward(
    const PromptRecord& prompt, const std::vector<CandidateResponse>& candidates,
    backend::Backend& reward_backend, const backend::RewardWeights& weights,
    double epsilon) {
  if (candidates.size() < 2) {
    throw std::invalid_argument("need at least two candidates");
  }
  size_t best = 0, worst = 0;
  std::vector<double> aggregates(candidates.size());
  for (size_t i = 0; i < candidates.size(); ++i) {
    auto scores =
        backend::score_clamped(reward_backend, dialogue_for(prompt, candidates[i].text));
    aggregates[i] = backend::aggregate_reward(scores, weights);
    if (aggregates[i] > aggregates[best]) best = i;
    if (aggregates[i] < aggregates[worst]) worst = i;
  }
  double margin = aggregates[best] - aggregates[worst];
  if (margin <= epsilon) return std::nullopt;
  PreferenceTriplet triplet;
  triplet.prompt = prompt;
  triplet.chosen = candidates[best];
  triplet.rejected = candidates[worst];
  triplet.judge = JudgeFamily::reward_model;
  triplet.reward_margin = margin;
  triplet.chosen_reward = aggregates[best];
  return triplet;
}

std::vector<PreferenceTriplet> quality_filter_chosen(
    std::vector<PreferenceTriplet> triplets, double min_chosen_reward,
    backend::Backend* reward_backend, const backend::RewardWeights& weights) {
  std::vector<PreferenceTriplet> kept;
  for (auto& triplet : triplets) {
    if (!triplet.chosen_reward) {
      if (!reward_backend) {
        throw std::invalid_argument(
            "triplet lacks chosen_reward and no reward backend supplied");
      }
      auto scores = backend::score_clamped(
          *reward_backend, dialogue_for(triplet.prompt, triplet.chosen.text));
      triplet.chosen_reward = backend::aggregate_reward(scores, weights);
    }
    if (*triplet.chosen_reward >= min_chosen_reward) {
      kept.push_back(std::move(triplet));
    }
  }
  return kept;
}

PromptRecord build_two_turn_prompt(const std::string& first_user,
                                   backend::Backend& assistant_backend,
                                   backend::Backend& second_user_backend,
                                   const templates::TemplateCatalog& catalog,
                                   PersonaVariant persona) {
  if (first_user.empty()) throw std::invalid_argument("empty first user turn");
  backend::GenParams greedy = backend::greedy_params();
  std::string assistant_reply =
      backend::generate(assistant_backend, {{Role::user, first_user}}, greedy).text;

  Dialogue history;
  history.turns = {{Role::user, first_user}, {Role::assistant, assistant_reply}};
  const char* persona_template = persona == PersonaVariant::V1_normal
                                     ? "user_turn_v1"
                                     : persona == PersonaVariant::V2_complex
                                           ? "user_turn_v2"
                                           : "user_turn_v3";
  std::string elicit = catalog.render(
      persona_template, {{"Conversation History", dialogue::render_turns(history)}});
  std::string second_user =
      backend::generate(second_user_backend, {{Role::user, elicit}}, greedy).text;

  std::vector<ChatMessage> turns = {{Role::user, first_user},
                                    {Role::assistant, assistant_reply},
                                    {Role::user, trim(second_user)}};
  return make_two_turn_record(std::move(turns), {}, "");
}

SplitStats split_assign(std::vector<PromptRecord>& records, double supervised_fraction,
                        Rng& rng) {
  SplitStats stats;
  for (auto& rec : records) {
    bool wants_supervised = rng.next_double() < supervised_fraction;
    if (rec.unsafe_flagged) {
      if (wants_supervised) ++stats.unsafe_forced_preference;
      rec.split = Split::preference;
      ++stats.preference;
      continue;
    }
    rec.split = wants_supervised ? Split::supervised : Split::preference;
    if (rec.split == Split::supervised) {
      ++stats.supervised;
    } else {
      ++stats.preference;
    }
  }
  return stats;
}

std::map<std::string, HistogramGroup> helpfulness_histogram(
    const std::map<std::string, std::vector<PromptRecord>>& prompt_groups,
    backend::Backend& responder_backend, backend::Backend& reward_backend, int bins) {
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");
  std::map<std::string, HistogramGroup> report;
  for (const auto& [group, prompts] : prompt_groups) {
    HistogramGroup hg;
    hg.counts.assign(static_cast<size_t>(bins), 0);
    double sum = 0.0;
    for (const auto& prompt : prompts) {
      std::string response = backend::generate(responder_backend,
                                               prompt_messages(prompt), GenParams{})
                                 .text;
      auto scores = backend::score_clamped(reward_backend, dialogue_for(prompt, response));
      double h = scores.helpfulness();  // already clamped to [0,5]
      int bin = std::min(bins - 1, static_cast<int>(h / 5.0 * bins));
      ++hg.counts[static_cast<size_t>(bin)];
      sum += h;
      ++hg.total;
    }
    hg.mean = hg.total ? sum / static_cast<double>(hg.total) : 0.0;
    report[group] = std::move(hg);
  }
  return report;
}

}  // namespace sdg::preference
