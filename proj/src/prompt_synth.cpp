#include "sdg/prompt_synth.hpp"

namespace sdg::prompt_synth {

using backend::GenParams;

const char* topic_source_name(TopicSource source) {
  switch (source) {
    case TopicSource::synthetic_macro: return "synthetic_macro";
    case TopicSource::synthetic_sub: return "synthetic_sub";
    case TopicSource::manual: return "manual";
  }
  return "manual";
}

TopicNode make_topic(std::string name, TopicSource source,
                     std::optional<std::string> parent) {
  if ((source == TopicSource::synthetic_sub) != parent.has_value()) {
    throw std::invalid_argument("parent present iff source is synthetic_sub");
  }
  TopicNode node;
  node.name = std::move(name);
  node.source = source;
  node.parent = std::move(parent);
  uint64_t h = fnv1a(topic_source_name(node.source));
  h = fnv1a("\x1f", h);
  h = fnv1a(node.name, h);
  if (node.parent) {
    h = fnv1a("\x1f", h);
    h = fnv1a(*node.parent, h);
  }
  node.id = hex64(h);
  return node;
}

const char* keyword_domain_name(KeywordDomain d) {
  return d == KeywordDomain::math ? "math" : "coding";
}

void KeywordSet::add(const std::string& keyword, KeywordProvenance provenance) {
  std::string normalized = normalize_keyword(keyword);
  if (normalized.empty()) return;
  keywords.emplace(normalized, provenance);  // first provenance wins
}

namespace {

std::string generate_text(Context& ctx, const std::string& prompt) {
  std::vector<ChatMessage> messages = {{Role::user, prompt}};
  return backend::generate(*ctx.generator, messages, ctx.params.gen).text;
}

// One re-ask on parse failure, then fail the item with the raw text.
templates::NumberedList generate_list(Context& ctx, const std::string& prompt,
                                      std::optional<int> expected_n) {
  std::string raw;
  for (int attempt = 0; attempt < 2; ++attempt) {
    raw = generate_text(ctx, prompt);
    try {
      return templates::parse_numbered_list(raw, expected_n);
    } catch (const templates::ParseError&) {
      // fall through to re-ask
    }
  }
  throw StageError("list output unparseable after re-ask", raw);
}

std::vector<TopicNode> topics_from_list(const templates::NumberedList& list,
                                        TopicSource source,
                                        std::optional<std::string> parent) {
  std::vector<TopicNode> out;
  out.reserve(list.items.size());
  for (const auto& item : list.items) {
    out.push_back(make_topic(item, source, parent));
  }
  return out;
}

}  // namespace

std::vector<TopicNode> gen_macro_topics(Context& ctx, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::string prompt =
      ctx.catalog->render("macro_topics", {{"n_macro_topics", std::to_string(n)}});
  auto list = generate_list(ctx, prompt, n);
  return topics_from_list(list, TopicSource::synthetic_macro, std::nullopt);
}

std::vector<TopicNode> gen_math_macro_topics(Context& ctx, int n,
                                             const std::string& school_level) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::string prompt = ctx.catalog->render(
      "math_macro_topics",
      {{"n_macro_topics", std::to_string(n)}, {"school_level", school_level}});
  auto list = generate_list(ctx, prompt, n);
  return topics_from_list(list, TopicSource::synthetic_macro, std::nullopt);
}

std::vector<TopicNode> gen_python_macro_topics(Context& ctx, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  std::string prompt =
      ctx.catalog->render("python_macro_topics", {{"n_macro_topics", std::to_string(n)}});
  auto list = generate_list(ctx, prompt, n);
  return topics_from_list(list, TopicSource::synthetic_macro, std::nullopt);
}

std::vector<TopicNode> gen_subtopics(Context& ctx, const TopicNode& topic, int n,
                                     SubtopicVariant variant) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (topic.name.empty()) throw std::invalid_argument("empty topic name");
  const char* template_id = variant == SubtopicVariant::math     ? "math_subtopics"
                            : variant == SubtopicVariant::python ? "python_subtopics"
                                                                 : "subtopics";
  std::string prompt = ctx.catalog->render(
      template_id, {{"n_subtopics", std::to_string(n)}, {"text1", topic.name}});
  auto list = generate_list(ctx, prompt, n);
  return topics_from_list(list, TopicSource::synthetic_sub, topic.id);
}

std::vector<PromptRecord> gen_open_qa(Context& ctx, const TopicNode& topic, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (topic.name.empty()) throw std::invalid_argument("empty topic name");
  std::string prompt = ctx.catalog->render(
      "open_qa_questions", {{"n_openlines", std::to_string(n)}, {"text1", topic.name}});
  auto list = generate_list(ctx, prompt, n);
  std::vector<PromptRecord> out;
  for (const auto& item : list.items) {
    out.push_back(
        make_prompt_record(TaskKind::open_qa, item, {topic.id}, ctx.generator_id));
  }
  return out;
}

namespace {

std::vector<PromptRecord> refine_common(Context& ctx, const PromptRecord& parent,
                                        const std::string& template_id, int n_tasks) {
  if (n_tasks < 1) throw std::invalid_argument("n_tasks must be >= 1");
  std::string prompt = ctx.catalog->render(
      template_id, {{"text1", parent.text}, {"n_tasks", std::to_string(n_tasks)}});
  auto list = generate_list(ctx, prompt, n_tasks);
  std::vector<std::string> lineage = parent.lineage;
  lineage.push_back(parent.id);
  std::vector<PromptRecord> out;
  for (const auto& item : list.items) {
    PromptRecord rec =
        make_prompt_record(parent.task_kind, item, lineage, ctx.generator_id);
    if (rec.id == parent.id) continue;  // identical revision dedupes away
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace

std::vector<PromptRecord> refine_open_qa(Context& ctx, const PromptRecord& question,
                                         int n_tasks) {
  return refine_common(ctx, question, "open_qa_revise", n_tasks);
}

std::vector<PromptRecord> gen_writing_tasks(Context& ctx, const TopicNode& topic,
                                            const std::string& doc_type, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (topic.name.empty()) throw std::invalid_argument("empty topic name");
  if (doc_type.empty()) throw std::invalid_argument("empty doc_type");
  std::string prompt = ctx.catalog->render(
      "writing_tasks", {{"n_openlines", std::to_string(n)},
                        {"text2", doc_type},
                        {"text1", topic.name}});
  auto list = generate_list(ctx, prompt, n);
  std::vector<PromptRecord> out;
  for (const auto& item : list.items) {
    out.push_back(
        make_prompt_record(TaskKind::writing, item, {topic.id}, ctx.generator_id));
  }
  return out;
}

std::vector<PromptRecord> refine_writing_task(Context& ctx, const PromptRecord& task,
                                              int n_tasks) {
  return refine_common(ctx, task, "writing_revise", n_tasks);
}

ClosedQaResult gen_closed_qa(Context& ctx, const std::string& document,
                             int n_instructions, Rng& rng,
                             const ClosedQaOptions& options) {
  if (n_instructions < 1) throw std::invalid_argument("n_instructions must be >= 1");
  ClosedQaResult result;
  if (static_cast<int>(document.size()) < options.min_document_chars) {
    result.skipped_short_documents = 1;
    return result;
  }
  std::string doc_id = content_hash(document);
  std::string prompt = ctx.catalog->render(
      "closed_qa_instructions",
      {{"text1", document}, {"n_instructions", std::to_string(n_instructions)}});
  auto list = generate_list(ctx, prompt, n_instructions);
  for (const auto& instruction : list.items) {
    const char* compose_id = rng.next_below(2) == 0
                                 ? "closed_qa_compose_instruction_first"
                                 : "closed_qa_compose_document_first";
    std::string text = ctx.catalog->render(
        compose_id, {{"instruction", instruction}, {"document", document}});
    result.records.push_back(make_prompt_record(TaskKind::closed_qa, text,
                                                {doc_id, compose_id},
                                                ctx.generator_id));
  }
  return result;
}

ClassifyResult classify_keyword(Context& ctx, const std::string& entity,
                                KeywordDomain domain) {
  if (entity.empty()) throw std::invalid_argument("empty entity");
  const char* template_id =
      domain == KeywordDomain::math ? "math_classify" : "python_classify";
  std::string prompt = ctx.catalog->render(template_id, {{"text1", entity}});
  std::string reply = generate_text(ctx, prompt);
  ClassifyResult result;
  try {
    result.related = templates::parse_yes_no(reply);
  } catch (const templates::ParseError&) {
    result.related = std::nullopt;
  }
  return result;
}

void harvest_corpus_keywords(const std::map<std::string, int>& corpus_frequencies,
                             int min_count, const std::set<std::string>& stoplist,
                             KeywordSet& out) {
  for (const auto& [token, count] : corpus_frequencies) {
    if (count < min_count) continue;
    std::string normalized = normalize_keyword(token);
    if (normalized.empty() || stoplist.count(normalized)) continue;
    out.add(normalized, KeywordProvenance::corpus_frequency);
  }
}

const char* problem_level_name(ProblemLevel level) {
  switch (level) {
    case ProblemLevel::general: return "general";
    case ProblemLevel::beginner: return "beginner";
    case ProblemLevel::intermediate: return "intermediate";
    case ProblemLevel::advanced: return "advanced";
  }
  return "general";
}

std::vector<PromptRecord> gen_problems(Context& ctx, const std::string& keyword,
                                       KeywordDomain domain, ProblemLevel level, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (keyword.empty()) throw std::invalid_argument("empty keyword");

  std::string prompt;
  TaskKind kind;
  if (domain == KeywordDomain::math) {
    kind = TaskKind::math;
    const char* template_id;
    switch (level) {
      case ProblemLevel::general: template_id = "math_problems_general"; break;
      case ProblemLevel::beginner: template_id = "math_problems_beginner"; break;
      default:
        throw std::invalid_argument("no math template for level " +
                                    std::string(problem_level_name(level)));
    }
    prompt = ctx.catalog->render(
        template_id, {{"n_problems_per_topic", std::to_string(n)}, {"text1", keyword}});
  } else {
    kind = TaskKind::coding;
    const char* template_id;
    switch (level) {
      case ProblemLevel::beginner: template_id = "coding_problems_beginner"; break;
      case ProblemLevel::intermediate: template_id = "coding_problems_intermediate"; break;
      case ProblemLevel::advanced: template_id = "coding_problems_advanced"; break;
      default:
        throw std::invalid_argument("no coding template for level " +
                                    std::string(problem_level_name(level)));
    }
    prompt = ctx.catalog->render(template_id,
                                 {{"n_problems_per_entity", std::to_string(n)},
                                  {"language", "python"},
                                  {"text1", keyword}});
  }
  auto list = generate_list(ctx, prompt, n);
  std::vector<PromptRecord> out;
  for (const auto& item : list.items) {
    out.push_back(make_prompt_record(kind, item, {normalize_keyword(keyword)},
                                     ctx.generator_id));
  }
  return out;
}

}  // namespace sdg::prompt_synth
