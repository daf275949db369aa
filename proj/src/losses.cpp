#include "sdg/losses.hpp"

#include <cmath>

namespace sdg::losses {

void validate_inputs(const PreferencePairInputs& inputs) {
  if (inputs.logp_policy_chosen > 0 || inputs.logp_policy_rejected > 0 ||
      inputs.logp_ref_chosen > 0 || inputs.logp_ref_rejected > 0) {
    throw std::invalid_argument("log-probabilities must be <= 0");
  }
  if (inputs.chosen_token_count < 1) {
    throw std::invalid_argument("chosen_token_count must be >= 1");
  }
}

double softplus(double x) {
  if (x > 0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double implicit_reward_gap(const PreferencePairInputs& inputs, double beta) {
  double chosen_ratio = inputs.logp_policy_chosen - inputs.logp_ref_chosen;
  double rejected_ratio = inputs.logp_policy_rejected - inputs.logp_ref_rejected;
  return beta * (chosen_ratio - rejected_ratio);
}

double dpo_loss(const PreferencePairInputs& inputs, double beta) {
  return softplus(-implicit_reward_gap(inputs, beta));
}

double dpo_with_sft_loss(const PreferencePairInputs& inputs, double beta,
                         double sft_weight, bool sft_per_sequence) {
  double nll = -inputs.logp_policy_chosen;
  if (!sft_per_sequence) nll /= static_cast<double>(inputs.chosen_token_count);
  return dpo_loss(inputs, beta) + sft_weight * nll;
}

double rpo_distance(double a, double b) {
  // log sigma(x) = -softplus(-x); log(1 - sigma(x)) = -softplus(x).
  double sb = sigmoid(b);
  double term_pos = softplus(-a) - softplus(-b);  // log sigma(b) - log sigma(a)
  double term_neg = softplus(a) - softplus(b);    // log(1-sigma(b)) - log(1-sigma(a))
  return sb * term_pos + (1.0 - sb) * term_neg;
}

double rpo_loss(const PreferencePairInputs& inputs, double beta, double eta) {
  if (!inputs.reward_chosen || !inputs.reward_rejected) {
    throw std::invalid_argument("rpo_loss requires reward_chosen and reward_rejected");
  }
  double a = implicit_reward_gap(inputs, beta);
  double b = eta * (*inputs.reward_chosen - *inputs.reward_rejected);
  return rpo_distance(a, b);
}

double rpo_grad_wrt_gap(double a, double b) { return sigmoid(a) - sigmoid(b); }

LossKind loss_kind_from_name(const std::string& name) {
  if (name == "dpo") return LossKind::dpo;
  if (name == "dpo_sft") return LossKind::dpo_sft;
  if (name == "rpo") return LossKind::rpo;
  throw std::invalid_argument("unknown loss kind: " + name);
}

const char* loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::dpo: return "dpo";
    case LossKind::dpo_sft: return "dpo_sft";
    case LossKind::rpo: return "rpo";
  }
  return "dpo";
}

double per_example_loss(const PreferencePairInputs& inputs, const LossHyperParams& hp,
                        LossKind kind) {
  switch (kind) {
    case LossKind::dpo:
      return dpo_loss(inputs, hp.beta);
    case LossKind::dpo_sft:
      return dpo_with_sft_loss(inputs, hp.beta, hp.sft_weight, hp.sft_per_sequence);
    case LossKind::rpo:
      return rpo_loss(inputs, hp.beta, hp.eta);
  }
  throw std::invalid_argument("unknown loss kind");
}

double batch_mean_loss(const std::vector<PreferencePairInputs>& examples,
                       const LossHyperParams& hp, LossKind kind) {
  if (examples.empty()) throw std::invalid_argument("empty batch");
  double sum = 0.0;
  for (const auto& example : examples) {
    sum += per_example_loss(example, hp, kind);
  }
  return sum / static_cast<double>(examples.size());
}

}  // namespace sdg::losses
