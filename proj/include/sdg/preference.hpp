#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdg/backend.hpp"
#include "sdg/instruct.hpp"
#include "sdg/record.hpp"
#include "sdg/templates.hpp"
#include "sdg/util.hpp"

namespace sdg::preference {

struct CandidateResponse {
  std::string text;
  std::string generator_id;
  std::string params_digest;
};

enum class JudgeFamily { ground_truth, llm_judge, reward_model };

const char* judge_family_name(JudgeFamily judge);

struct PreferenceTriplet {
  PromptRecord prompt;
  CandidateResponse chosen;
  CandidateResponse rejected;
  JudgeFamily judge = JudgeFamily::reward_model;
  std::optional<double> reward_margin;
  std::optional<double> chosen_reward;
};

struct GroundTruthOracle {
  enum class Kind { final_answer_match, instruction_verifier };
  Kind kind = Kind::final_answer_match;
  std::string expected_answer;  // final_answer_match
  instruct::VerifiableInstruction instruction;  // instruction_verifier
};

struct NamedBackend {
  std::string id;
  backend::Backend* backend;
};

// Up to |backends| * k candidates; exact-duplicate texts collapsed.
std::vector<CandidateResponse> gen_candidates(const PromptRecord& prompt,
                                              const std::vector<NamedBackend>& backends,
                                              int k_per_backend,
                                              const backend::GenParams& params);

// Token sequence after the last "#### " marker, trimmed.
std::optional<std::string> extract_final_answer(const std::string& response);

// trim + strip trailing punctuation + collapse numeric formatting.
std::string normalize_answer(const std::string& answer);

// Pairs the first correct candidate with the first incorrect (input
// order); all-correct or all-incorrect sets yield nothing.
std::optional<PreferenceTriplet> judge_ground_truth(
    const PromptRecord& prompt, const std::vector<CandidateResponse>& candidates,
    const GroundTruthOracle& oracle);

enum class PairVerdict { r1_wins, r2_wins, tie, inconsistent, invalid };

const char* pair_verdict_name(PairVerdict verdict);

// Two judge calls with swapped order; a winner counts only when both
// calls name the same response.
PairVerdict judge_llm(const PromptRecord& prompt, const CandidateResponse& r1,
                      const CandidateResponse& r2, backend::Backend& judge_backend,
                      const templates::TemplateCatalog& catalog);

std::optional<PreferenceTriplet> triplet_from_llm_verdict(const PromptRecord& prompt,
                                                          const CandidateResponse& r1,
                                                          const CandidateResponse& r2,
                                                          PairVerdict verdict);

// chosen = max aggregate, rejected = min; none when margin <= epsilon.
std::optional<PreferenceTriplet> judge_reward(
    const PromptRecord& prompt, const std::vector<CandidateResponse>& candidates,
    backend::Backend& reward_backend, const backend::RewardWeights& weights,
    double epsilon = 0.0);

// Keeps triplets with chosen_reward >= min_chosen_reward; unscored
// triplets are scored first.
std::vector<PreferenceTriplet> quality_filter_chosen(
    std::vector<PreferenceTriplet> triplets, double min_chosen_reward,
    backend::Backend* reward_backend = nullptr,
    const backend::RewardWeights& weights = backend::RewardWeights::helpfulness_only());

// [user, assistant, user] record; second user turn elicited with the
// persona machinery over the first exchange.
PromptRecord build_two_turn_prompt(const std::string& first_user,
                                   backend::Backend& assistant_backend,
                                   backend::Backend& second_user_backend,
                                   const templates::TemplateCatalog& catalog,
                                   PersonaVariant persona = PersonaVariant::V1_normal);

struct SplitStats {
  size_t supervised = 0;
  size_t preference = 0;
  size_t unsafe_forced_preference = 0;  // unsafe records that would have gone supervised
};

// Assigns supervised/preference per proportion; unsafe records never go
// supervised.
SplitStats split_assign(std::vector<PromptRecord>& records, double supervised_fraction,
                        Rng& rng);

struct HistogramGroup {
  std::vector<size_t> counts;
  double mean = 0.0;
  size_t total = 0;
};

// Generates one response per prompt, scores it, bins the helpfulness
// attribute per prompt-source group. Bin edges split [0,5] evenly.
std::map<std::string, HistogramGroup> helpfulness_histogram(
    const std::map<std::string, std::vector<PromptRecord>>& prompt_groups,
    backend::Backend& responder_backend, backend::Backend& reward_backend, int bins);

}  // namespace sdg::preference
