#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sdg/backend.hpp"
#include "sdg/record.hpp"
#include "sdg/templates.hpp"
#include "sdg/util.hpp"

namespace sdg::prompt_synth {

enum class TopicSource { synthetic_macro, synthetic_sub, manual };

const char* topic_source_name(TopicSource source);

struct TopicNode {
  std::string id;
  std::string name;
  std::optional<std::string> parent;  // present iff source == synthetic_sub
  TopicSource source = TopicSource::synthetic_macro;
};

TopicNode make_topic(std::string name, TopicSource source,
                     std::optional<std::string> parent = std::nullopt);

enum class KeywordDomain { math, coding };

const char* keyword_domain_name(KeywordDomain d);

enum class KeywordProvenance { llm_topic, wiki_classified, corpus_frequency, manual };

struct KeywordSet {
  KeywordDomain domain = KeywordDomain::math;
  // keyword -> provenance; keys are normalized (lowercased, trimmed,
  // internal whitespace collapsed).
  std::map<std::string, KeywordProvenance> keywords;

  void add(const std::string& keyword, KeywordProvenance provenance);
};

class StageError : public std::runtime_error {
 public:
  StageError(const std::string& msg, std::string raw)
      : std::runtime_error(msg), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

struct SynthParams {
  backend::GenParams gen;  // defaults: temperature 1.0, top_p 0.95
  SynthParams() {
    gen.temperature = 1.0;
    gen.top_p = 0.95;
  }
};

struct Context {
  const templates::TemplateCatalog* catalog;
  backend::Backend* generator;
  std::string generator_id;
  SynthParams params;

  Context(const templates::TemplateCatalog& cat, backend::Backend& gen, std::string id)
      : catalog(&cat), generator(&gen), generator_id(std::move(id)) {}
};

std::vector<TopicNode> gen_macro_topics(Context& ctx, int n);
std::vector<TopicNode> gen_math_macro_topics(Context& ctx, int n,
                                             const std::string& school_level);
std::vector<TopicNode> gen_python_macro_topics(Context& ctx, int n);

enum class SubtopicVariant { general, math, python };

std::vector<TopicNode> gen_subtopics(Context& ctx, const TopicNode& topic, int n,
                                     SubtopicVariant variant = SubtopicVariant::general);

std::vector<PromptRecord> gen_open_qa(Context& ctx, const TopicNode& topic, int n);
std::vector<PromptRecord> refine_open_qa(Context& ctx, const PromptRecord& question,
                                         int n_tasks);

std::vector<PromptRecord> gen_writing_tasks(Context& ctx, const TopicNode& topic,
                                            const std::string& doc_type, int n);
std::vector<PromptRecord> refine_writing_task(Context& ctx, const PromptRecord& task,
                                              int n_tasks);

struct ClosedQaOptions {
  int min_document_chars = 64;
};

struct ClosedQaResult {
  std::vector<PromptRecord> records;
  size_t skipped_short_documents = 0;
};

// Each record composes the document with one elicited instruction using a
// locally defined concatenation template chosen per record under rng.
ClosedQaResult gen_closed_qa(Context& ctx, const std::string& document,
                             int n_instructions, Rng& rng,
                             const ClosedQaOptions& options = {});

struct ClassifyResult {
  std::optional<bool> related;  // nullopt: unparseable, entity discarded
};

ClassifyResult classify_keyword(Context& ctx, const std::string& entity,
                                KeywordDomain domain);

void harvest_corpus_keywords(const std::map<std::string, int>& corpus_frequencies,
                             int min_count, const std::set<std::string>& stoplist,
                             KeywordSet& out);

enum class ProblemLevel { general, beginner, intermediate, advanced };

const char* problem_level_name(ProblemLevel level);

// Only the template variants that exist: math general/beginner, coding
// beginner/intermediate/advanced.
std::vector<PromptRecord> gen_problems(Context& ctx, const std::string& keyword,
                                       KeywordDomain domain, ProblemLevel level, int n);

}  // namespace sdg::prompt_synth
