#include "sdg/record.hpp"

#include <stdexcept>

#include "sdg/util.hpp"

namespace sdg {

namespace {
constexpr const char* kTaskKindNames[] = {
    "open_qa", "writing", "closed_qa", "math",
    "coding",  "instruction_following", "two_turn", "real_world"};
}

const char* task_kind_name(TaskKind kind) {
  return kTaskKindNames[static_cast<int>(kind)];
}

TaskKind task_kind_from_name(const std::string& name) {
  for (int i = 0; i < 8; ++i) {
    if (name == kTaskKindNames[i]) return static_cast<TaskKind>(i);
  }
  throw std::invalid_argument("unknown task kind: " + name);
}

const char* split_name(Split split) {
  switch (split) {
    case Split::supervised: return "supervised";
    case Split::preference: return "preference";
    case Split::unassigned: return "unassigned";
  }
  return "unassigned";
}

Split split_from_name(const std::string& name) {
  if (name == "supervised") return Split::supervised;
  if (name == "preference") return Split::preference;
  if (name == "unassigned") return Split::unassigned;
  throw std::invalid_argument("unknown split: " + name);
}

std::string prompt_content_hash(TaskKind kind, const std::string& text,
                                const std::vector<ChatMessage>& turns) {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(task_kind_name(kind), h);
  h = fnv1a("\x1f", h);
  h = fnv1a(text, h);
  for (const auto& turn : turns) {
    h = fnv1a("\x1e", h);
    h = fnv1a(role_name(turn.role), h);
    h = fnv1a("\x1f", h);
    h = fnv1a(turn.content, h);
  }
  return hex64(h);
}

PromptRecord make_prompt_record(TaskKind kind, std::string text,
                                std::vector<std::string> lineage,
                                std::string generator_id) {
  PromptRecord rec;
  rec.task_kind = kind;
  rec.text = std::move(text);
  rec.lineage = std::move(lineage);
  rec.generator_id = std::move(generator_id);
  rec.id = prompt_content_hash(rec.task_kind, rec.text, rec.turns);
  return rec;
}

PromptRecord make_two_turn_record(std::vector<ChatMessage> turns,
                                  std::vector<std::string> lineage,
                                  std::string generator_id) {
  PromptRecord rec;
  rec.task_kind = TaskKind::two_turn;
  rec.turns = std::move(turns);
  rec.lineage = std::move(lineage);
  rec.generator_id = std::move(generator_id);
  rec.id = prompt_content_hash(rec.task_kind, rec.text, rec.turns);
  return rec;
}

}  // namespace sdg
