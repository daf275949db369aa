#include "sdg/genetic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace sdg::genetic {

const char* mutation_op_name(MutationOp op) {
  switch (op) {
    case MutationOp::self_instruct_new: return "self_instruct_new";
    case MutationOp::evolve_constraints: return "evolve_constraints";
    case MutationOp::evolve_deepen: return "evolve_deepen";
    case MutationOp::evolve_concretize: return "evolve_concretize";
    case MutationOp::crossover_combine: return "crossover_combine";
  }
  return "self_instruct_new";
}

namespace {

std::string item_id(const std::string& instruction) {
  return content_hash(instruction);
}

}  // namespace

Population seed_population(
    const std::vector<std::pair<std::string, std::string>>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("seeds must be non-empty");
  Population population;
  std::set<std::string> seen;
  for (const auto& [instruction, solution] : seeds) {
    if (!seen.insert(instruction).second) continue;
    PopulationItem item;
    item.id = item_id(instruction);
    item.instruction = instruction;
    item.solution = solution;
    item.generation = 0;
    item.fitness_passed = true;  // seeds are trusted
    population.push_back(std::move(item));
  }
  return population;
}

std::string mutate(const std::vector<const PopulationItem*>& parents, MutationOp op,
                   backend::Backend& generator,
                   const templates::TemplateCatalog& catalog) {
  if (op == MutationOp::crossover_combine) {
    if (parents.size() < 2 || parents.size() > 3) {
      throw std::invalid_argument("crossover_combine takes 2-3 parents");
    }
  } else if (parents.size() != 1) {
    throw std::invalid_argument("operator takes exactly 1 parent");
  }

  std::string prompt;
  switch (op) {
    case MutationOp::self_instruct_new:
      prompt = catalog.render("genetic_self_instruct_new",
                              {{"instruction", parents[0]->instruction}});
      break;
    case MutationOp::evolve_constraints:
      prompt = catalog.render("genetic_evolve_constraints",
                              {{"instruction", parents[0]->instruction}});
      break;
    case MutationOp::evolve_deepen:
      prompt = catalog.render("genetic_evolve_deepen",
                              {{"instruction", parents[0]->instruction}});
      break;
    case MutationOp::evolve_concretize:
      prompt = catalog.render("genetic_evolve_concretize",
                              {{"instruction", parents[0]->instruction}});
      break;
    case MutationOp::crossover_combine: {
      std::string second = parents[1]->instruction;
      if (parents.size() == 3) second += "\n\n" + parents[2]->instruction;
      prompt = catalog.render("genetic_crossover_combine",
                              {{"instruction1", parents[0]->instruction},
                               {"instruction2", second}});
      break;
    }
  }
  try {
    return trim(
        backend::generate(generator, {{Role::user, prompt}}, backend::greedy_params())
            .text);
  } catch (const backend::BackendError&) {
    return "";
  }
}

std::string solve(const std::string& instruction, backend::Backend& generator) {
  // Solutions are recorded verbatim, fences and all.
  return backend::generate(generator, {{Role::user, instruction}},
                           backend::greedy_params())
      .text;
}

bool fitness(const std::string& instruction, const std::string& solution,
             backend::Backend& judge_backend,
             const templates::TemplateCatalog& catalog) {
  std::string prompt = catalog.render(
      "genetic_fitness_judge", {{"instruction", instruction}, {"solution", solution}});
  std::string reply =
      backend::generate(judge_backend, {{Role::user, prompt}}, backend::greedy_params())
          .text;
  try {
    return templates::parse_yes_no(reply);
  } catch (const templates::ParseError&) {
    return false;  // unparseable verdicts fail
  }
}

namespace {

std::set<std::string> word_trigrams(const std::string& text) {
  std::istringstream in(to_lower(text));
  std::vector<std::string> words;
  std::string word;
  while (in >> word) words.push_back(word);
  std::set<std::string> grams;
  if (words.size() < 3) {
    // Short texts: fall back to the full token sequence as one gram.
    std::string all;
    for (const auto& w : words) all += w + " ";
    if (!all.empty()) grams.insert(all);
    return grams;
  }
  for (size_t i = 0; i + 2 < words.size(); ++i) {
    grams.insert(words[i] + " " + words[i + 1] + " " + words[i + 2]);
  }
  return grams;
}

}  // namespace

double jaccard_similarity(const std::string& a, const std::string& b) {
  auto ga = word_trigrams(a);
  auto gb = word_trigrams(b);
  if (ga.empty() && gb.empty()) return 1.0;
  if (ga.empty() || gb.empty()) return 0.0;
  size_t intersection = 0;
  for (const auto& g : ga) {
    if (gb.count(g)) ++intersection;
  }
  size_t uni = ga.size() + gb.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(uni);
}

Population dedup(Population population, double jaccard_threshold) {
  if (jaccard_threshold <= 0.0 || jaccard_threshold > 1.0) {
    throw std::invalid_argument("jaccard_threshold must be in (0, 1]");
  }
  // Exact dedup by instruction, earliest generation first.
  std::stable_sort(population.begin(), population.end(),
                   [](const PopulationItem& x, const PopulationItem& y) {
                     return x.generation < y.generation;
                   });
  Population kept;
  std::map<std::string, std::string> instruction_survivor;  // instruction -> id
  std::map<std::string, std::string> id_remap;              // removed id -> survivor id
  for (auto& item : population) {
    auto seen = instruction_survivor.find(item.instruction);
    if (seen != instruction_survivor.end()) {
      id_remap[item.id] = seen->second;
      continue;
    }
    const PopulationItem* near_survivor = nullptr;
    if (jaccard_threshold < 1.0) {
      for (const auto& survivor : kept) {
        if (jaccard_similarity(item.instruction, survivor.instruction) >=
            jaccard_threshold) {
          near_survivor = &survivor;
          break;
        }
      }
    }
    if (near_survivor) {
      id_remap[item.id] = near_survivor->id;
      continue;
    }
    instruction_survivor[item.instruction] = item.id;
    kept.push_back(std::move(item));
  }
  // Keep lineage closed: parents removed as duplicates point to their
  // surviving twin instead.
  for (auto& item : kept) {
    for (auto& parent : item.parent_ids) {
      auto it = id_remap.find(parent);
      if (it != id_remap.end()) parent = it->second;
    }
  }
  return kept;
}

MutationOp sample_operator(const std::array<double, kNumMutationOps>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0) throw std::invalid_argument("mutation weights must be non-negative");
    total += w;
  }
  if (total <= 0) throw std::invalid_argument("mutation weights must not all be zero");
  double draw = rng.next_double() * total;
  double acc = 0.0;
  for (int i = 0; i < kNumMutationOps; ++i) {
    acc += weights[static_cast<size_t>(i)];
    if (draw < acc) return static_cast<MutationOp>(i);
  }
  return MutationOp::crossover_combine;
}

EvolveResult evolve(const std::vector<std::pair<std::string, std::string>>& seeds,
                    const ColonyConfig& config, const EvolveBackends& backends,
                    const templates::TemplateCatalog& catalog, Rng& rng) {
  if (config.n_colonies < 1 || config.target_size < 1) {
    throw std::invalid_argument("invalid colony config");
  }
  Population seed_pool = seed_population(seeds);
  // Every colony starts from the same seeds, and the merge dedups them down
  // to one copy; each colony must overshoot by the shared-seed count or the
  // merged population comes up short.
  int shared_seeds =
      config.n_colonies > 1 ? static_cast<int>(seed_pool.size()) : 0;
  int per_colony_target =
      (config.target_size + config.n_colonies - 1) / config.n_colonies + shared_seeds;

  // Colonies are independent; each gets its own rng stream so results do
  // not depend on scheduling.
  std::vector<Population> colonies(static_cast<size_t>(config.n_colonies));
  for (int c = 0; c < config.n_colonies; ++c) {
    Rng colony_rng = rng.fork(static_cast<uint64_t>(c) + 1);
    Population& colony = colonies[static_cast<size_t>(c)];
    colony = seed_pool;
    for (auto& item : colony) item.colony = c;

    for (int gen = 1;
         gen <= config.max_generations &&
         static_cast<int>(colony.size()) < per_colony_target;
         ++gen) {
      Population children;
      for (int child = 0; child < config.children_per_generation; ++child) {
        MutationOp op = sample_operator(config.mutation_mix, colony_rng);
        std::vector<const PopulationItem*> parents;
        size_t arity = op == MutationOp::crossover_combine
                           ? 2 + colony_rng.next_below(2)
                           : 1;
        if (arity > colony.size()) arity = std::max<size_t>(1, colony.size());
        if (op == MutationOp::crossover_combine && colony.size() < 2) {
          op = MutationOp::evolve_deepen;
          arity = 1;
        }
        std::set<size_t> picked;
        while (picked.size() < arity) {
          picked.insert(colony_rng.next_below(colony.size()));
        }
        for (size_t idx : picked) parents.push_back(&colony[idx]);

        std::string instruction = mutate(parents, op, *backends.mutator, catalog);
        if (instruction.empty()) continue;
        std::string solution = solve(instruction, *backends.solver);
        if (trim(solution).empty()) continue;
        if (!fitness(instruction, solution, *backends.judge, catalog)) continue;

        PopulationItem item;
        item.id = item_id(instruction);
        item.instruction = instruction;
        item.solution = solution;
        item.generation = gen;
        item.colony = c;
        item.fitness_passed = true;
        for (const auto* parent : parents) item.parent_ids.push_back(parent->id);
        children.push_back(std::move(item));
      }
      for (auto& child : children) colony.push_back(std::move(child));
      colony = dedup(std::move(colony), config.dedup_jaccard_threshold);
    }
  }

  Population merged;
  for (auto& colony : colonies) {
    for (auto& item : colony) merged.push_back(std::move(item));
  }
  merged = dedup(std::move(merged), config.dedup_jaccard_threshold);
  if (static_cast<int>(merged.size()) > config.target_size) {
    merged.resize(static_cast<size_t>(config.target_size));
  }

  EvolveResult result;
  result.shortfall = static_cast<int>(merged.size()) < config.target_size;
  result.population = std::move(merged);
  return result;
}

}  // namespace sdg::genetic
