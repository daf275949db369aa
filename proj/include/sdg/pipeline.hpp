#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sdg/backend.hpp"
#include "sdg/genetic.hpp"
#include "sdg/losses.hpp"
#include "sdg/templates.hpp"

namespace sdg::pipeline {

struct BackendConfig {
  std::string kind;  // "scripted" or "http"
  std::string script_path;  // scripted
  std::string host;         // http
  int port = 80;
  std::string path = "/v1/chat/completions";
  std::string model;
  std::string api_key_env;
};

struct StageParams {
  // topics / prompts
  int n_macro_topics = 5;
  int n_open_qa_per_topic = 2;
  // instruct
  double instruct_fraction = 1.0;
  // dialogues
  int k_exchanges = 3;
  double reward_threshold = 0.0;
  // candidates / judge
  std::vector<std::string> candidate_backends;
  int k_per_backend = 1;
  std::string judge_mode = "reward_model";  // or "llm_judge"
  double epsilon = 0.0;
  // filter
  double min_chosen_reward = 0.0;
  // split
  double supervised_fraction = 0.5;
  // genetic
  genetic::ColonyConfig colony;
  std::string genetic_seeds_path;
  // losses
  std::string losses_inputs_path;
  std::string loss_kind = "dpo";
  losses::LossHyperParams loss_hp;
  // histogram
  int histogram_bins = 10;
  // reward weights for all reward-scored stages
  backend::RewardWeights reward_weights = backend::RewardWeights::helpfulness_only();
};

struct RunConfig {
  uint64_t seed = 0;
  bool seed_set = false;  // seeds are mandatory; no implicit nondeterminism
  int parallelism = 4;
  std::string out_dir = "out";
  std::string generator_id = "generator";
  std::string reward_id = "reward";
  std::string judge_id;  // defaults to generator_id
  std::map<std::string, BackendConfig> backends;
  StageParams stages;

  std::string config_digest;  // hash of the raw config text

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j, const std::string& raw_text);
};

// Builds the registry from config; "--backend-override ID=SCRIPT" style
// overrides replace entries with scripted backends for test injection.
backend::BackendRegistry build_registry(
    const RunConfig& config,
    const std::map<std::string, std::string>& script_overrides = {});

// Scripted backend loaded from a JSONL script file: each line either
// {"text": ...} or {"scores": {helpfulness, ...}}.
std::shared_ptr<backend::ScriptedBackend> load_scripted_backend(
    const std::string& script_path);

struct DatasetManifest {
  std::string dataset_id;
  std::string stage;
  size_t record_count = 0;
  std::string checksum;  // payload only
  std::string template_catalog_checksum;
  std::string config_digest;
  std::string created_at;

  nlohmann::json to_json() const;
  static DatasetManifest from_json(const nlohmann::json& j);
  void save(const std::string& path) const;
  static DatasetManifest load(const std::string& path);
};

enum class Stage {
  topics,
  prompts,
  instruct,
  dialogues,
  candidates,
  judge,
  filter,
  genetic,
  losses,
  histogram,
  split,
};

const char* stage_name(Stage stage);
Stage stage_from_name(const std::string& name);

class StageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs one stage: reads dependency datasets (manifest check), writes
// <stage>.jsonl plus <stage>.manifest.json under out_dir. Reruns with
// identical inputs and config produce identical checksums.
DatasetManifest run_stage(const RunConfig& config, Stage stage,
                          const backend::BackendRegistry& registry);

struct IterationState {
  int round = 1;
  std::string generator_id;
  std::vector<std::string> produced_manifests;
  bool generator_reuse_warning = false;
};

// One weak-to-strong data round: dialogue + preference stages with the
// round's generator; the next round expects a new generator id.
IterationState weak_to_strong_round(const RunConfig& config, IterationState state,
                                    const backend::BackendRegistry& registry);

struct StatsReport {
  std::map<std::string, size_t> counts_by_task_kind;
  std::map<std::string, size_t> counts_by_split;
  std::map<std::string, size_t> counts_by_stage;
  std::optional<double> judge_agreement;
  nlohmann::json to_json() const;
};

StatsReport stats(const std::vector<std::string>& manifest_paths,
                  const std::string& labeled_pairs_path = "");

// Bounded fan-out: runs fn(i) for i in [0, n) on at most `limit` threads;
// results land at their input index, so ordering never depends on timing.
void parallel_for(size_t n, int limit, const std::function<void(size_t)>& fn);

}  // namespace sdg::pipeline
