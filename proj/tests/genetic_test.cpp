#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "sdg/genetic.hpp"

using namespace sdg;
using namespace sdg::genetic;
using sdg::backend::FunctionBackend;
using sdg::backend::ScriptedBackend;

namespace {

// Independent 3-gram Jaccard oracle, built differently from the library
// implementation (vector scan instead of set intersection).
double jaccard_oracle(const std::string& a, const std::string& b) {
  auto grams = [](const std::string& text) {
    std::istringstream in(to_lower(text));
    std::vector<std::string> words, out;
    std::string w;
    while (in >> w) words.push_back(w);
    if (words.size() < 3) {
      std::string all;
      for (const auto& x : words) all += x + " ";
      if (!all.empty()) out.push_back(all);
      return out;
    }
    for (size_t i = 0; i + 2 < words.size(); ++i) {
      out.push_back(words[i] + " " + words[i + 1] + " " + words[i + 2]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  auto ga = grams(a), gb = grams(b);
  if (ga.empty() && gb.empty()) return 1.0;
  size_t inter = 0;
  for (const auto& g : ga) {
    for (const auto& h : gb) {
      if (g == h) {
        ++inter;
        break;
      }
    }
  }
  return static_cast<double>(inter) / static_cast<double>(ga.size() + gb.size() - inter);
}

PopulationItem item(const std::string& id, const std::string& instruction, int generation,
                    std::vector<std::string> parents = {}) {
  PopulationItem it;
  it.id = id;
  it.instruction = instruction;
  it.solution = "sol";
  it.generation = generation;
  it.parent_ids = std::move(parents);
  it.fitness_passed = true;
  return it;
}

}  // namespace

TEST_CASE("seed_population trusts seeds and drops exact duplicates") {
  auto population = seed_population({{"write a parser", "p()"},
                                     {"write a parser", "other"},
                                     {"write a lexer", "l()"}});
  REQUIRE(population.size() == 2);
  CHECK(population[0].generation == 0);
  CHECK(population[0].fitness_passed);
  CHECK(population[0].id != population[1].id);
  CHECK_THROWS_AS(seed_population({}), std::invalid_argument);
}

TEST_CASE("mutate enforces operator arity") {
  auto backend = ScriptedBackend::from_texts({"mutated"});
  auto a = item("a", "task a", 0);
  auto b = item("b", "task b", 0);
  CHECK_THROWS_AS(mutate({&a, &b}, MutationOp::evolve_deepen, *backend,
                         templates::TemplateCatalog::builtin()),
                  std::invalid_argument);
  CHECK_THROWS_AS(mutate({&a}, MutationOp::crossover_combine, *backend,
                         templates::TemplateCatalog::builtin()),
                  std::invalid_argument);
  CHECK(mutate({&a}, MutationOp::evolve_deepen, *backend,
               templates::TemplateCatalog::builtin()) == "mutated");
}

TEST_CASE("mutate renders the parent instructions into the operator prompt") {
  auto backend = ScriptedBackend::from_texts({"combined task"});
  auto a = item("a", "sort a list", 0);
  auto b = item("b", "parse a csv", 0);
  mutate({&a, &b}, MutationOp::crossover_combine, *backend,
         templates::TemplateCatalog::builtin());
  auto request = backend->transcript()[0].messages[0].content;
  CHECK(request.find("Task 1:\nsort a list") != std::string::npos);
  CHECK(request.find("Task 2:\nparse a csv") != std::string::npos);
}

TEST_CASE("fitness parses yes/no and fails on gibberish") {
  auto yes = ScriptedBackend::from_texts({"Yes, good."});
  CHECK(fitness("task", "solution", *yes, templates::TemplateCatalog::builtin()));
  auto no = ScriptedBackend::from_texts({"No."});
  CHECK(!fitness("task", "solution", *no, templates::TemplateCatalog::builtin()));
  auto bad = ScriptedBackend::from_texts({"cannot tell"});
  CHECK(!fitness("task", "solution", *bad, templates::TemplateCatalog::builtin()));
}

TEST_CASE("jaccard_similarity agrees with an independent oracle") {
  std::vector<std::string> texts = {
      "write a function that reverses a string in place",
      "write a function that reverses a linked list in place",
      "sum all even numbers in a file",
      "Write A Function That Reverses A String In Place",
      "tiny",
      "",
  };
  for (const auto& a : texts) {
    for (const auto& b : texts) {
      CHECK(jaccard_similarity(a, b) ==
            doctest::Approx(jaccard_oracle(a, b)).epsilon(1e-12));
    }
  }
  CHECK(jaccard_similarity("same text here", "same text here") == 1.0);
}

TEST_CASE("dedup keeps the earlier generation and remaps parent ids") {
  Population population = {
      item("late", "implement a binary search tree with insert and delete", 2),
      item("early", "implement a binary search tree with insert and delete", 1),
      item("child", "unrelated completely different task about regex parsing", 3,
           {"late"}),
  };
  auto kept = dedup(std::move(population), 0.8);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].id == "early");
  // The child pointed at the removed twin; lineage must stay closed.
  CHECK(kept[1].id == "child");
  CHECK(kept[1].parent_ids == std::vector<std::string>{"early"});
}

TEST_CASE("dedup removes near-duplicates above the threshold only") {
  Population population = {
      item("a", "write a function that reverses a string in place quickly", 0),
      item("b", "write a function that reverses a string in place slowly", 1),
      item("c", "count words in a large text file using a hash map", 1),
  };
  double sim = jaccard_similarity(population[0].instruction, population[1].instruction);
  REQUIRE(sim > 0.5);  // sanity: these really are near-duplicates
  auto strict = dedup(population, sim - 0.01);
  CHECK(strict.size() == 2);
  auto lax = dedup(population, 1.0);
  CHECK(lax.size() == 3);
  CHECK_THROWS_AS(dedup(population, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(dedup(population, 1.5), std::invalid_argument);
}

TEST_CASE("sample_operator follows the weights within 3 sigma") {
  std::array<double, kNumMutationOps> weights = {4, 1, 1, 1, 3};
  Rng rng(2024);
  const int n = 20000;
  std::map<MutationOp, int> counts;
  for (int i = 0; i < n; ++i) ++counts[sample_operator(weights, rng)];
  double total_weight = 10.0;
  for (int i = 0; i < kNumMutationOps; ++i) {
    double p = weights[static_cast<size_t>(i)] / total_weight;
    double expect = n * p;
    double sigma = std::sqrt(n * p * (1 - p));
    double got = counts[static_cast<MutationOp>(i)];
    CHECK(std::abs(got - expect) < 3 * sigma + 1);
  }
  std::array<double, kNumMutationOps> zero{};
  CHECK_THROWS_AS(sample_operator(zero, rng), std::invalid_argument);
  std::array<double, kNumMutationOps> negative = {1, -1, 1, 1, 1};
  CHECK_THROWS_AS(sample_operator(negative, rng), std::invalid_argument);
}

TEST_CASE("evolve reaches the target with distinct instructions and closed lineage") {
  // Mutator answers with a fresh instruction derived from a counter in the
  // request text, so every child is distinct; judge always accepts.
  auto counter = std::make_shared<int>(0);
  FunctionBackend model([counter](const std::vector<ChatMessage>& messages) {
    const std::string& content = messages.back().content;
    if (content.find("\"Yes\" or \"No\"") != std::string::npos) return std::string("Yes");
    if (content.rfind("Implement variant", 0) == 0) return std::string("solution body");
    ++*counter;
    return "Implement variant " + std::to_string(*counter) +
           " of the task with different words each time number " +
           std::to_string(*counter * 7);
  });
  ColonyConfig config;
  config.n_colonies = 3;
  config.target_size = 20;
  config.max_generations = 30;
  config.children_per_generation = 4;
  EvolveBackends backends{&model, &model, &model};
  Rng rng(5);
  auto result = evolve({{"seed task one about strings", "s1"},
                        {"seed task two about numbers", "s2"},
                        {"seed task three about files", "s3"}},
                       config, backends, templates::TemplateCatalog::builtin(), rng);
  CHECK(!result.shortfall);
  CHECK(static_cast<int>(result.population.size()) == config.target_size);

  std::set<std::string> ids, instructions;
  for (const auto& it : result.population) {
    ids.insert(it.id);
    instructions.insert(it.instruction);
  }
  CHECK(ids.size() == result.population.size());
  CHECK(instructions.size() == result.population.size());

  // Lineage closure: every parent id is a population member.
  for (const auto& it : result.population) {
    for (const auto& parent : it.parent_ids) {
      CHECK(ids.count(parent) == 1);
    }
    if (it.generation == 0) CHECK(it.parent_ids.empty());
  }
}

TEST_CASE("evolve is deterministic for a fixed seed") {
  auto run = [] {
    auto counter = std::make_shared<int>(0);
    FunctionBackend model([counter](const std::vector<ChatMessage>& messages) {
      const std::string& content = messages.back().content;
      if (content.find("\"Yes\" or \"No\"") != std::string::npos) {
        return std::string("Yes");
      }
      if (content.rfind("Variant task", 0) == 0) return std::string("body");
      ++*counter;
      return "Variant task " + std::to_string(*counter) + " spelled differently " +
             std::to_string(*counter * 13);
    });
    ColonyConfig config;
    config.target_size = 8;
    config.max_generations = 10;
    EvolveBackends backends{&model, &model, &model};
    Rng rng(77);
    auto result = evolve({{"start here with a seed", "s"}}, config, backends,
                         templates::TemplateCatalog::builtin(), rng);
    std::vector<std::string> out;
    for (const auto& it : result.population) out.push_back(it.instruction);
    return out;
  };
  CHECK(run() == run());
}

TEST_CASE("evolve reports a shortfall when the budget is too small") {
  FunctionBackend model([](const std::vector<ChatMessage>& messages) {
    const std::string& content = messages.back().content;
    if (content.find("\"Yes\" or \"No\"") != std::string::npos) return std::string("No");
    return std::string("anything");  // every child fails fitness anyway
  });
  ColonyConfig config;
  config.target_size = 10;
  config.max_generations = 2;
  EvolveBackends backends{&model, &model, &model};
  Rng rng(1);
  auto result = evolve({{"lonely seed instruction", "s"}}, config, backends,
                       templates::TemplateCatalog::builtin(), rng);
  CHECK(result.shortfall);
  CHECK(result.population.size() == 1);  // only the seed survives
}
