#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdg::losses {

// Per-example inputs to the preference losses. Log-probabilities are
// natural-log sequence log-likelihoods (<= 0).
struct PreferencePairInputs {
  double logp_policy_chosen = 0.0;
  double logp_policy_rejected = 0.0;
  double logp_ref_chosen = 0.0;
  double logp_ref_rejected = 0.0;
  int chosen_token_count = 1;
  std::optional<double> reward_chosen;
  std::optional<double> reward_rejected;
};

void validate_inputs(const PreferencePairInputs& inputs);

struct LossHyperParams {
  double beta = 0.01;     // implicit-reward scale / KL coefficient
  double eta = 1.0;       // reward-gap scale
  double sft_weight = 0.0;
  bool sft_per_sequence = false;  // default is per-token normalization
};

// Numerically stable log(1 + e^x).
double softplus(double x);
double sigmoid(double x);

// a = beta * [(logp_pi(yc) - logp_ref(yc)) - (logp_pi(yl) - logp_ref(yl))]
double implicit_reward_gap(const PreferencePairInputs& inputs, double beta);

// -log sigmoid(a), computed as softplus(-a).
double dpo_loss(const PreferencePairInputs& inputs, double beta);

// dpo_loss + sft_weight * (-logp_policy_chosen / chosen_token_count).
double dpo_with_sft_loss(const PreferencePairInputs& inputs, double beta,
                         double sft_weight, bool sft_per_sequence = false);

// Bernoulli divergence between parameters sigma(b) and sigma(a):
// sigma(b) log(sigma(b)/sigma(a)) + (1-sigma(b)) log((1-sigma(b))/(1-sigma(a))).
double rpo_distance(double a, double b);

// rpo_distance(implicit gap, eta * (reward_chosen - reward_rejected)).
double rpo_loss(const PreferencePairInputs& inputs, double beta, double eta);

// Analytic dD/da = sigma(a) - sigma(b); cross-checks finite differences.
double rpo_grad_wrt_gap(double a, double b);

enum class LossKind { dpo, dpo_sft, rpo };

LossKind loss_kind_from_name(const std::string& name);
const char* loss_kind_name(LossKind kind);

double per_example_loss(const PreferencePairInputs& inputs, const LossHyperParams& hp,
                        LossKind kind);

double batch_mean_loss(const std::vector<PreferencePairInputs>& examples,
                       const LossHyperParams& hp, LossKind kind);

}  // namespace sdg::losses
