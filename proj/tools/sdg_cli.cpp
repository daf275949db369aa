// Command-line driver for the synthetic data pipeline. Every subcommand
// maps to one pipeline stage; all randomness flows from the config seed.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdg/pipeline.hpp"
#include "sdg/serialize.hpp"

namespace {

using sdg::pipeline::RunConfig;
using sdg::pipeline::Stage;

struct GlobalOptions {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<int> parallelism;
  std::optional<std::string> out_dir;
  std::vector<std::string> backend_overrides;  // ID=SCRIPT.jsonl
};

std::map<std::string, std::string> parse_overrides(
    const std::vector<std::string>& overrides) {
  std::map<std::string, std::string> result;
  for (const auto& o : overrides) {
    auto eq = o.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == o.size()) {
      throw CLI::ValidationError("--backend-override", "expected ID=SCRIPT: " + o);
    }
    result[o.substr(0, eq)] = o.substr(eq + 1);
  }
  return result;
}

RunConfig load_config(const GlobalOptions& opts) {
  if (opts.config_path.empty()) {
    throw CLI::ValidationError("--config", "this subcommand needs a run config");
  }
  RunConfig config = RunConfig::from_file(opts.config_path);
  if (opts.seed) {
    config.seed = *opts.seed;
    config.seed_set = true;
  }
  if (opts.parallelism) config.parallelism = *opts.parallelism;
  if (opts.out_dir) config.out_dir = *opts.out_dir;
  return config;
}

int run_one_stage(const GlobalOptions& opts, Stage stage) {
  RunConfig config = load_config(opts);
  auto registry =
      sdg::pipeline::build_registry(config, parse_overrides(opts.backend_overrides));
  auto manifest = sdg::pipeline::run_stage(config, stage, registry);
  std::cout << manifest.to_json().dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic instruction, dialogue, and preference data pipeline"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "Run config JSON");
  app.add_option("--seed", opts.seed, "Override the config seed");
  app.add_option("--parallelism", opts.parallelism, "Worker pool bound");
  app.add_option("--out", opts.out_dir, "Output directory override");
  app.add_option("--backend-override", opts.backend_overrides,
                 "Replace a backend with a scripted one (ID=SCRIPT.jsonl)");

  struct StageCommand {
    const char* name;
    const char* help;
    Stage stage;
  };
  const std::vector<StageCommand> stage_commands = {
      {"gen-topics", "Generate macro topics", Stage::topics},
      {"gen-prompts", "Generate prompts from topics", Stage::prompts},
      {"gen-instruct", "Attach verifiable instructions to prompts", Stage::instruct},
      {"gen-dialogues", "Synthesize and reward-filter multi-turn dialogues",
       Stage::dialogues},
      {"gen-candidates", "Sample candidate responses per prompt", Stage::candidates},
      {"judge", "Rank candidates into preference triplets", Stage::judge},
      {"filter", "Drop triplets with weak chosen responses", Stage::filter},
      {"genetic", "Evolve an instruction population from seeds", Stage::genetic},
      {"losses", "Evaluate preference losses on logged pairs", Stage::losses},
      {"histogram", "Helpfulness histograms per prompt group", Stage::histogram},
      {"split", "Assign supervised/preference splits", Stage::split},
  };
  std::map<std::string, Stage> selected;
  for (const auto& sc : stage_commands) {
    app.add_subcommand(sc.name, sc.help)->fallthrough();
    selected[sc.name] = sc.stage;
  }

  auto* round_cmd = app.add_subcommand(
      "run-round", "One weak-to-strong round: topics through judging");
  round_cmd->fallthrough();
  int round_number = 1;
  std::string round_generator;
  round_cmd->add_option("--round", round_number, "Round index (1-based)");
  round_cmd->add_option("--generator", round_generator,
                        "Generator backend id for this round");

  auto* stats_cmd = app.add_subcommand("stats", "Dataset counts and judge agreement");
  stats_cmd->fallthrough();
  std::vector<std::string> manifest_paths;
  std::string labeled_pairs;
  stats_cmd->add_option("--manifest", manifest_paths, "Manifest file(s) to summarize")
      ->required();
  stats_cmd->add_option("--labeled-pairs", labeled_pairs,
                        "JSONL of {predicted, label} judge decisions");

  CLI11_PARSE(app, argc, argv);

  try {
    const CLI::App* sub = app.get_subcommands().front();
    auto it = selected.find(sub->get_name());
    if (it != selected.end()) return run_one_stage(opts, it->second);

    if (sub == round_cmd) {
      RunConfig config = load_config(opts);
      auto registry = sdg::pipeline::build_registry(
          config, parse_overrides(opts.backend_overrides));
      sdg::pipeline::IterationState state;
      state.round = round_number;
      state.generator_id =
          round_generator.empty() ? config.generator_id : round_generator;
      auto next = sdg::pipeline::weak_to_strong_round(config, state, registry);
      nlohmann::json out = {{"round", state.round},
                            {"generator_id", state.generator_id},
                            {"produced_manifests", next.produced_manifests},
                            {"generator_reuse_warning", next.generator_reuse_warning}};
      std::cout << out.dump(2) << "\n";
      if (next.generator_reuse_warning) {
        std::cerr << "warning: next round reuses generator \"" << next.generator_id
                  << "\"; weak-to-strong iteration expects a newly aligned model\n";
      }
      return 0;
    }

    if (sub == stats_cmd) {
      auto report = sdg::pipeline::stats(manifest_paths, labeled_pairs);
      std::cout << report.to_json().dump(2) << "\n";
      return 0;
    }

    std::cerr << "unknown subcommand\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
