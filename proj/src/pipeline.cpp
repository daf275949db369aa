#include "sdg/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "sdg/dialogue.hpp"
#include "sdg/instruct.hpp"
#include "sdg/preference.hpp"
#include "sdg/prompt_synth.hpp"
#include "sdg/serialize.hpp"

namespace sdg::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::json;

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StageError("cannot read config: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string raw = buf.str();
  return from_json(json::parse(raw), raw);
}

RunConfig RunConfig::from_json(const json& j, const std::string& raw_text) {
  RunConfig config;
  if (!j.contains("seed")) {
    throw StageError("config must set a seed; implicit nondeterminism is not allowed");
  }
  config.seed = j.at("seed").get<uint64_t>();
  config.seed_set = true;
  config.parallelism = j.value("parallelism", 4);
  config.out_dir = j.value("out_dir", "out");
  config.generator_id = j.value("generator_id", "generator");
  config.reward_id = j.value("reward_id", "reward");
  config.judge_id = j.value("judge_id", config.generator_id);

  if (j.contains("backends")) {
    for (const auto& [id, bj] : j.at("backends").items()) {
      BackendConfig bc;
      bc.kind = bj.at("kind").get<std::string>();
      bc.script_path = bj.value("script", "");
      bc.host = bj.value("host", "");
      bc.port = bj.value("port", 80);
      bc.path = bj.value("path", "/v1/chat/completions");
      bc.model = bj.value("model", "");
      bc.api_key_env = bj.value("api_key_env", "");
      config.backends[id] = bc;
    }
  }

  if (j.contains("stages")) {
    const json& s = j.at("stages");
    StageParams& p = config.stages;
    p.n_macro_topics = s.value("n_macro_topics", p.n_macro_topics);
    p.n_open_qa_per_topic = s.value("n_open_qa_per_topic", p.n_open_qa_per_topic);
    p.instruct_fraction = s.value("instruct_fraction", p.instruct_fraction);
    p.k_exchanges = s.value("k_exchanges", p.k_exchanges);
    p.reward_threshold = s.value("reward_threshold", p.reward_threshold);
    p.candidate_backends =
        s.value("candidate_backends", std::vector<std::string>{});
    p.k_per_backend = s.value("k_per_backend", p.k_per_backend);
    p.judge_mode = s.value("judge_mode", p.judge_mode);
    p.epsilon = s.value("epsilon", p.epsilon);
    p.min_chosen_reward = s.value("min_chosen_reward", p.min_chosen_reward);
    p.supervised_fraction = s.value("supervised_fraction", p.supervised_fraction);
    p.genetic_seeds_path = s.value("genetic_seeds_path", "");
    p.losses_inputs_path = s.value("losses_inputs_path", "");
    p.loss_kind = s.value("loss_kind", p.loss_kind);
    p.loss_hp.beta = s.value("beta", p.loss_hp.beta);
    p.loss_hp.eta = s.value("eta", p.loss_hp.eta);
    p.loss_hp.sft_weight = s.value("sft_weight", p.loss_hp.sft_weight);
    p.loss_hp.sft_per_sequence = s.value("sft_per_sequence", false);
    p.histogram_bins = s.value("histogram_bins", p.histogram_bins);
    if (s.contains("reward_weights")) {
      auto w = s.at("reward_weights").get<std::vector<double>>();
      if (w.size() != backend::kNumAttributes) {
        throw StageError("reward_weights must have 5 entries");
      }
      for (size_t i = 0; i < w.size(); ++i) p.reward_weights.values[i] = w[i];
    }
    if (s.contains("genetic")) {
      const json& g = s.at("genetic");
      p.colony.n_colonies = g.value("n_colonies", p.colony.n_colonies);
      p.colony.target_size = g.value("target_size", p.colony.target_size);
      p.colony.max_generations = g.value("max_generations", p.colony.max_generations);
      p.colony.dedup_jaccard_threshold =
          g.value("dedup_jaccard_threshold", p.colony.dedup_jaccard_threshold);
      p.colony.children_per_generation =
          g.value("children_per_generation", p.colony.children_per_generation);
    }
  }
  config.config_digest = content_hash(raw_text);
  return config;
}

std::shared_ptr<backend::ScriptedBackend> load_scripted_backend(
    const std::string& script_path) {
  auto lines = serialize::read_jsonl(script_path);
  std::vector<backend::ScriptEntry> entries;
  for (const auto& line : lines) {
    if (line.contains("text")) {
      entries.push_back(
          backend::ScriptedBackend::text_entry(line.at("text").get<std::string>()));
    } else if (line.contains("scores")) {
      backend::AttributeScores scores;
      for (size_t i = 0; i < backend::kNumAttributes; ++i) {
        scores.values[i] = line.at("scores").at(backend::kAttributeNames[i]).get<double>();
      }
      entries.push_back(backend::ScriptedBackend::score_entry(scores));
    } else {
      throw StageError("script entry needs \"text\" or \"scores\": " + line.dump());
    }
  }
  return std::make_shared<backend::ScriptedBackend>(std::move(entries));
}

backend::BackendRegistry build_registry(
    const RunConfig& config, const std::map<std::string, std::string>& script_overrides) {
  backend::BackendRegistry registry;
  for (const auto& [id, bc] : config.backends) {
    auto override_it = script_overrides.find(id);
    if (override_it != script_overrides.end()) {
      registry.add(id, load_scripted_backend(override_it->second));
      continue;
    }
    if (bc.kind == "scripted") {
      registry.add(id, load_scripted_backend(bc.script_path));
    } else if (bc.kind == "http") {
      backend::HttpBackendConfig hc;
      hc.host = bc.host;
      hc.port = bc.port;
      hc.path = bc.path;
      hc.model = bc.model;
      hc.api_key_env = bc.api_key_env;
      registry.add(id, std::make_shared<backend::HttpBackend>(hc));
    } else {
      throw StageError("unknown backend kind: " + bc.kind);
    }
  }
  for (const auto& [id, path] : script_overrides) {
    if (!registry.has(id)) registry.add(id, load_scripted_backend(path));
  }
  return registry;
}

json DatasetManifest::to_json() const {
  return {{"dataset_id", dataset_id},
          {"stage", stage},
          {"record_count", record_count},
          {"checksum", checksum},
          {"template_catalog_checksum", template_catalog_checksum},
          {"config_digest", config_digest},
          {"created_at", created_at}};
}

DatasetManifest DatasetManifest::from_json(const json& j) {
  DatasetManifest m;
  m.dataset_id = j.at("dataset_id").get<std::string>();
  m.stage = j.at("stage").get<std::string>();
  m.record_count = j.at("record_count").get<size_t>();
  m.checksum = j.at("checksum").get<std::string>();
  m.template_catalog_checksum = j.at("template_catalog_checksum").get<std::string>();
  m.config_digest = j.at("config_digest").get<std::string>();
  m.created_at = j.at("created_at").get<std::string>();
  return m;
}

void DatasetManifest::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw StageError("cannot write manifest: " + path);
  out << to_json().dump(2) << "\n";
}

DatasetManifest DatasetManifest::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StageError("cannot read manifest: " + path);
  return from_json(json::parse(in));
}

namespace {
constexpr const char* kStageNames[] = {"topics",     "prompts", "instruct",
                                       "dialogues",  "candidates", "judge",
                                       "filter",     "genetic", "losses",
                                       "histogram",  "split"};
constexpr int kNumStages = 11;
}  // namespace

const char* stage_name(Stage stage) { return kStageNames[static_cast<int>(stage)]; }

Stage stage_from_name(const std::string& name) {
  for (int i = 0; i < kNumStages; ++i) {
    if (name == kStageNames[i]) return static_cast<Stage>(i);
  }
  throw StageError("unknown stage: " + name);
}

void parallel_for(size_t n, int limit, const std::function<void(size_t)>& fn) {
  if (limit < 1) limit = 1;
  size_t workers = std::min<size_t>(static_cast<size_t>(limit), n);
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> threads;
  std::exception_ptr first_error;
  std::mutex error_mu;
  for (size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

std::string dataset_path(const RunConfig& config, Stage stage) {
  return config.out_dir + "/" + stage_name(stage) + ".jsonl";
}

std::string manifest_path(const RunConfig& config, Stage stage) {
  return config.out_dir + "/" + stage_name(stage) + ".manifest.json";
}

std::vector<json> require_stage_input(const RunConfig& config, Stage dependency) {
  if (!fs::exists(manifest_path(config, dependency))) {
    throw StageError(std::string("missing dependency: stage \"") +
                     stage_name(dependency) + "\" has not produced a manifest");
  }
  return serialize::read_jsonl(dataset_path(config, dependency));
}

std::string now_iso8601() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

DatasetManifest write_dataset(const RunConfig& config, Stage stage,
                              const std::vector<json>& records) {
  fs::create_directories(config.out_dir);
  serialize::write_jsonl(dataset_path(config, stage), records);
  DatasetManifest manifest;
  manifest.stage = stage_name(stage);
  manifest.record_count = records.size();
  manifest.checksum = serialize::jsonl_checksum(records);
  manifest.template_catalog_checksum = templates::TemplateCatalog::builtin().checksum();
  manifest.config_digest = config.config_digest;
  manifest.dataset_id = std::string(stage_name(stage)) + "-" + manifest.checksum;
  manifest.created_at = now_iso8601();
  manifest.save(manifest_path(config, stage));
  return manifest;
}

json topic_to_json(const prompt_synth::TopicNode& t) {
  json out = {{"id", t.id},
              {"name", t.name},
              {"source", prompt_synth::topic_source_name(t.source)}};
  out["parent"] = t.parent ? json(*t.parent) : json(nullptr);
  return out;
}

PersonaVariant pick_persona(Rng& rng) {
  switch (rng.next_below(3)) {
    case 0: return PersonaVariant::V1_normal;
    case 1: return PersonaVariant::V2_complex;
    default: return PersonaVariant::V3_concise;
  }
}

std::vector<json> run_topics(const RunConfig& config,
                             const backend::BackendRegistry& registry) {
  prompt_synth::Context ctx(templates::TemplateCatalog::builtin(),
                            registry.get(config.generator_id), config.generator_id);
  auto topics = prompt_synth::gen_macro_topics(ctx, config.stages.n_macro_topics);
  std::vector<json> records;
  for (const auto& t : topics) records.push_back(topic_to_json(t));
  return records;
}

std::vector<json> run_prompts(const RunConfig& config,
                              const backend::BackendRegistry& registry) {
  auto topics = require_stage_input(config, Stage::topics);
  prompt_synth::Context ctx(templates::TemplateCatalog::builtin(),
                            registry.get(config.generator_id), config.generator_id);
  std::vector<json> records;
  std::set<std::string> seen;
  for (const auto& tj : topics) {
    prompt_synth::TopicNode topic;
    topic.id = tj.at("id").get<std::string>();
    topic.name = tj.at("name").get<std::string>();
    auto prompts =
        prompt_synth::gen_open_qa(ctx, topic, config.stages.n_open_qa_per_topic);
    for (const auto& p : prompts) {
      if (seen.insert(p.id).second) records.push_back(serialize::to_json(p));
    }
  }
  return records;
}

std::vector<json> run_instruct(const RunConfig& config,
                               const backend::BackendRegistry&) {
  auto prompts = require_stage_input(config, Stage::prompts);
  auto pool = instruct::default_instruction_pool();
  Rng rng = Rng(config.seed).fork(fnv1a("instruct"));
  std::vector<json> records;
  for (size_t i = 0; i < prompts.size(); ++i) {
    Rng item_rng = rng.fork(i + 1);
    if (item_rng.next_double() >= config.stages.instruct_fraction) continue;
    PromptRecord prompt = serialize::prompt_from_json(prompts[i]);
    if (prompt.task_kind == TaskKind::instruction_following ||
        prompt.task_kind == TaskKind::two_turn) {
      continue;
    }
    records.push_back(serialize::to_json(instruct::compose_single(prompt, pool, item_rng)));
  }
  return records;
}

std::vector<json> run_dialogues(const RunConfig& config,
                                const backend::BackendRegistry& registry) {
  auto prompts = require_stage_input(config, Stage::prompts);
  backend::Backend& generator = registry.get(config.generator_id);
  backend::Backend& reward = registry.get(config.reward_id);
  Rng rng = Rng(config.seed).fork(fnv1a("dialogues"));

  // Backend calls stay in input order: with a shared ordered script the
  // item->response mapping must not depend on scheduling.
  std::vector<Dialogue> dialogues;
  size_t discarded = 0;
  for (size_t i = 0; i < prompts.size(); ++i) {
    PromptRecord prompt = serialize::prompt_from_json(prompts[i]);
    dialogue::SynthesisOptions options;
    options.k_exchanges = config.stages.k_exchanges;
    options.persona = pick_persona(rng);
    try {
      dialogues.push_back(
          dialogue::synthesize_dialogue(prompt, generator,
                                        templates::TemplateCatalog::builtin(), options));
    } catch (const backend::BackendError&) {
      ++discarded;  // partial dialogue discarded
    }
  }
  auto filtered = dialogue::filter_by_reward(std::move(dialogues), reward,
                                             config.stages.reward_weights,
                                             config.stages.reward_threshold);
  std::vector<json> records;
  for (const auto& d : filtered.kept) records.push_back(serialize::dialogue_to_json(d, true));
  for (const auto& d : filtered.dropped) {
    records.push_back(serialize::dialogue_to_json(d, false));
  }
  return records;
}

std::vector<preference::NamedBackend> candidate_backends(
    const RunConfig& config, const backend::BackendRegistry& registry) {
  std::vector<std::string> ids = config.stages.candidate_backends;
  if (ids.empty()) ids.push_back(config.generator_id);
  std::vector<preference::NamedBackend> backends;
  for (const auto& id : ids) backends.push_back({id, &registry.get(id)});
  return backends;
}

std::vector<json> run_candidates(const RunConfig& config,
                                 const backend::BackendRegistry& registry) {
  auto prompts = require_stage_input(config, Stage::prompts);
  auto backends = candidate_backends(config, registry);
  std::vector<json> records;
  for (const auto& pj : prompts) {
    PromptRecord prompt = serialize::prompt_from_json(pj);
    auto candidates = preference::gen_candidates(prompt, backends,
                                                 config.stages.k_per_backend,
                                                 backend::GenParams{});
    json cj = json::array();
    for (const auto& c : candidates) {
      cj.push_back({{"text", c.text}, {"generator_id", c.generator_id}});
    }
    records.push_back({{"prompt_payload", pj}, {"candidates", cj}});
  }
  return records;
}

std::vector<json> run_judge(const RunConfig& config,
                            const backend::BackendRegistry& registry) {
  auto candidate_sets = require_stage_input(config, Stage::candidates);
  std::vector<json> records;
  for (const auto& set : candidate_sets) {
    PromptRecord prompt = serialize::prompt_from_json(set.at("prompt_payload"));
    std::vector<preference::CandidateResponse> candidates;
    for (const auto& cj : set.at("candidates")) {
      candidates.push_back({cj.at("text").get<std::string>(),
                            cj.at("generator_id").get<std::string>(), ""});
    }
    if (candidates.size() < 2) continue;

    std::optional<preference::PreferenceTriplet> triplet;
    if (config.stages.judge_mode == "llm_judge") {
      auto verdict = preference::judge_llm(prompt, candidates[0], candidates[1],
                                           registry.get(config.judge_id),
                                           templates::TemplateCatalog::builtin());
      triplet = preference::triplet_from_llm_verdict(prompt, candidates[0],
                                                     candidates[1], verdict);
    } else {
      triplet = preference::judge_reward(prompt, candidates,
                                         registry.get(config.reward_id),
                                         config.stages.reward_weights,
                                         config.stages.epsilon);
    }
    if (triplet) records.push_back(serialize::to_json(*triplet));
  }
  return records;
}

std::vector<json> run_filter(const RunConfig& config,
                             const backend::BackendRegistry& registry) {
  auto triplet_records = require_stage_input(config, Stage::judge);
  std::vector<preference::PreferenceTriplet> triplets;
  for (const auto& tj : triplet_records) {
    triplets.push_back(serialize::triplet_from_json(tj));
  }
  auto kept = preference::quality_filter_chosen(
      std::move(triplets), config.stages.min_chosen_reward,
      &registry.get(config.reward_id), config.stages.reward_weights);
  std::vector<json> records;
  for (const auto& t : kept) records.push_back(serialize::to_json(t));
  return records;
}

std::vector<json> run_genetic(const RunConfig& config,
                              const backend::BackendRegistry& registry) {
  if (config.stages.genetic_seeds_path.empty()) {
    throw StageError("genetic stage requires stages.genetic_seeds_path");
  }
  std::vector<std::pair<std::string, std::string>> seeds;
  for (const auto& sj : serialize::read_jsonl(config.stages.genetic_seeds_path)) {
    seeds.emplace_back(sj.at("instruction").get<std::string>(),
                       sj.at("solution").get<std::string>());
  }
  backend::Backend& model = registry.get(config.generator_id);
  genetic::EvolveBackends backends{&model, &model, &model};
  Rng rng = Rng(config.seed).fork(fnv1a("genetic"));
  auto result = genetic::evolve(seeds, config.stages.colony, backends,
                                templates::TemplateCatalog::builtin(), rng);
  std::vector<json> records;
  for (const auto& item : result.population) {
    records.push_back(serialize::to_json(item));
  }
  if (result.shortfall) {
    records.push_back({{"warning", "population shortfall"},
                       {"target_size", config.stages.colony.target_size},
                       {"reached", result.population.size()}});
  }
  return records;
}

std::vector<json> run_losses(const RunConfig& config, const backend::BackendRegistry&) {
  if (config.stages.losses_inputs_path.empty()) {
    throw StageError("losses stage requires stages.losses_inputs_path");
  }
  auto kind = losses::loss_kind_from_name(config.stages.loss_kind);
  std::vector<json> records;
  std::vector<losses::PreferencePairInputs> examples;
  for (const auto& lj : serialize::read_jsonl(config.stages.losses_inputs_path)) {
    examples.push_back(serialize::pair_inputs_from_json(lj));
  }
  for (size_t i = 0; i < examples.size(); ++i) {
    double loss = losses::per_example_loss(examples[i], config.stages.loss_hp, kind);
    records.push_back({{"index", i}, {"loss", loss}});
  }
  records.push_back(
      {{"kind", config.stages.loss_kind},
       {"mean", losses::batch_mean_loss(examples, config.stages.loss_hp, kind)}});
  return records;
}

std::vector<json> run_histogram(const RunConfig& config,
                                const backend::BackendRegistry& registry) {
  auto prompts = require_stage_input(config, Stage::prompts);
  std::map<std::string, std::vector<PromptRecord>> groups;
  for (const auto& pj : prompts) {
    PromptRecord prompt = serialize::prompt_from_json(pj);
    groups[task_kind_name(prompt.task_kind)].push_back(std::move(prompt));
  }
  auto report = preference::helpfulness_histogram(
      groups, registry.get(config.generator_id), registry.get(config.reward_id),
      config.stages.histogram_bins);
  std::vector<json> records;
  for (const auto& [group, hg] : report) {
    records.push_back({{"group", group},
                       {"counts", hg.counts},
                       {"mean", hg.mean},
                       {"total", hg.total}});
  }
  return records;
}

std::vector<json> run_split(const RunConfig& config, const backend::BackendRegistry&) {
  auto prompt_records = require_stage_input(config, Stage::prompts);
  std::vector<PromptRecord> prompts;
  for (const auto& pj : prompt_records) {
    prompts.push_back(serialize::prompt_from_json(pj));
  }
  Rng rng = Rng(config.seed).fork(fnv1a("split"));
  auto stats = preference::split_assign(prompts, config.stages.supervised_fraction, rng);
  std::vector<json> records;
  for (const auto& p : prompts) records.push_back(serialize::to_json(p));
  records.push_back({{"split_summary",
                      {{"supervised", stats.supervised},
                       {"preference", stats.preference},
                       {"unsafe_forced_preference", stats.unsafe_forced_preference}}}});
  return records;
}

}  // namespace

DatasetManifest run_stage(const RunConfig& config, Stage stage,
                          const backend::BackendRegistry& registry) {
  if (!config.seed_set) throw StageError("config seed missing");
  std::vector<json> records;
  try {
    switch (stage) {
      case Stage::topics: records = run_topics(config, registry); break;
      case Stage::prompts: records = run_prompts(config, registry); break;
      case Stage::instruct: records = run_instruct(config, registry); break;
      case Stage::dialogues: records = run_dialogues(config, registry); break;
      case Stage::candidates: records = run_candidates(config, registry); break;
      case Stage::judge: records = run_judge(config, registry); break;
      case Stage::filter: records = run_filter(config, registry); break;
      case Stage::genetic: records = run_genetic(config, registry); break;
      case Stage::losses: records = run_losses(config, registry); break;
      case Stage::histogram: records = run_histogram(config, registry); break;
      case Stage::split: records = run_split(config, registry); break;
    }
  } catch (...) {
    // Quarantine, never delete: a stale output must not masquerade as the
    // product of this failed run.
    std::string out_path = dataset_path(config, stage);
    if (fs::exists(out_path)) {
      fs::rename(out_path, out_path + ".quarantine");
    }
    throw;
  }
  return write_dataset(config, stage, records);
}

IterationState weak_to_strong_round(const RunConfig& config, IterationState state,
                                    const backend::BackendRegistry& registry) {
  RunConfig round_config = config;
  round_config.generator_id = state.generator_id;
  round_config.out_dir =
      config.out_dir + "/round_" + std::to_string(state.round);

  for (Stage stage : {Stage::topics, Stage::prompts, Stage::split, Stage::dialogues,
                      Stage::candidates, Stage::judge}) {
    auto manifest = run_stage(round_config, stage, registry);
    state.produced_manifests.push_back(
        round_config.out_dir + "/" + manifest.stage + ".manifest.json");
  }

  IterationState next;
  next.round = state.round + 1;
  next.generator_id = state.generator_id;  // caller must hand off a new generator
  next.produced_manifests = state.produced_manifests;
  next.generator_reuse_warning = true;  // cleared when the generator id changes
  return next;
}

json StatsReport::to_json() const {
  json out = {{"counts_by_task_kind", counts_by_task_kind},
              {"counts_by_split", counts_by_split},
              {"counts_by_stage", counts_by_stage}};
  out["judge_agreement"] = judge_agreement ? json(*judge_agreement) : json(nullptr);
  return out;
}

StatsReport stats(const std::vector<std::string>& manifest_paths,
                  const std::string& labeled_pairs_path) {
  StatsReport report;
  for (const auto& path : manifest_paths) {
    DatasetManifest manifest = DatasetManifest::load(path);
    report.counts_by_stage[manifest.stage] += manifest.record_count;
    std::string data_path = path;
    const std::string suffix = ".manifest.json";
    if (data_path.size() > suffix.size() &&
        data_path.compare(data_path.size() - suffix.size(), suffix.size(), suffix) == 0) {
      data_path = data_path.substr(0, data_path.size() - suffix.size()) + ".jsonl";
    }
    if (!fs::exists(data_path)) continue;
    for (const auto& rec : serialize::read_jsonl(data_path)) {
      if (rec.contains("task_kind")) {
        ++report.counts_by_task_kind[rec.at("task_kind").get<std::string>()];
      }
      if (rec.contains("split")) {
        ++report.counts_by_split[rec.at("split").get<std::string>()];
      }
    }
  }
  if (!labeled_pairs_path.empty()) {
    size_t total = 0, agree = 0;
    for (const auto& rec : serialize::read_jsonl(labeled_pairs_path)) {
      ++total;
      if (rec.at("predicted").get<std::string>() == rec.at("label").get<std::string>()) {
        ++agree;
      }
    }
    if (total > 0) {
      report.judge_agreement = static_cast<double>(agree) / static_cast<double>(total);
    }
  }
  return report;
}

}  // namespace sdg::pipeline
