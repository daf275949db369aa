#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "sdg/backend.hpp"
#include "sdg/templates.hpp"
#include "sdg/util.hpp"

namespace sdg::genetic {

struct PopulationItem {
  std::string id;
  std::string instruction;
  std::string solution;
  int generation = 0;  // 0 = seed
  std::vector<std::string> parent_ids;
  int colony = 0;
  bool fitness_passed = false;
};

using Population = std::vector<PopulationItem>;

enum class MutationOp {
  self_instruct_new,
  evolve_constraints,
  evolve_deepen,
  evolve_concretize,
  crossover_combine,
};

constexpr int kNumMutationOps = 5;

const char* mutation_op_name(MutationOp op);

struct ColonyConfig {
  int n_colonies = 1;
  int target_size = 16;
  int max_generations = 20;
  std::array<double, kNumMutationOps> mutation_mix = {1, 1, 1, 1, 1};
  double dedup_jaccard_threshold = 0.8;
  int children_per_generation = 4;
};

Population seed_population(
    const std::vector<std::pair<std::string, std::string>>& seeds);

// self_instruct_new / evolve_*: 1 parent; crossover_combine: 2-3 parents.
// Empty result means the candidate was discarded.
std::string mutate(const std::vector<const PopulationItem*>& parents, MutationOp op,
                   backend::Backend& generator,
                   const templates::TemplateCatalog& catalog);

std::string solve(const std::string& instruction, backend::Backend& generator);

// Yes/No LLM verdict; unparseable output fails.
bool fitness(const std::string& instruction, const std::string& solution,
             backend::Backend& judge_backend,
             const templates::TemplateCatalog& catalog);

// Word 3-gram Jaccard similarity between instructions.
double jaccard_similarity(const std::string& a, const std::string& b);

// Exact duplicates first, then near-duplicates at >= threshold; the
// earlier-generation item survives.
Population dedup(Population population, double jaccard_threshold);

// Weighted draw over mutation operators under the run seed.
MutationOp sample_operator(const std::array<double, kNumMutationOps>& weights, Rng& rng);

struct EvolveResult {
  Population population;
  bool shortfall = false;  // target not reached within max_generations
};

struct EvolveBackends {
  backend::Backend* mutator;
  backend::Backend* solver;
  backend::Backend* judge;
};

EvolveResult evolve(const std::vector<std::pair<std::string, std::string>>& seeds,
                    const ColonyConfig& config, const EvolveBackends& backends,
                    const templates::TemplateCatalog& catalog, Rng& rng);

}  // namespace sdg::genetic
