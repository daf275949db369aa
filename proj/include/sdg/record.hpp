#pragma once

#include <string>
#include <vector>

#include "sdg/chat.hpp"

namespace sdg {

enum class TaskKind {
  open_qa,
  writing,
  closed_qa,
  math,
  coding,
  instruction_following,
  two_turn,
  real_world,
};

const char* task_kind_name(TaskKind kind);
TaskKind task_kind_from_name(const std::string& name);

enum class Split { supervised, preference, unassigned };

const char* split_name(Split split);
Split split_from_name(const std::string& name);

// A synthesized or ingested prompt. id is a content hash of
// (task_kind, text/turns), so identical prompts dedupe to one record.
struct PromptRecord {
  std::string id;
  TaskKind task_kind = TaskKind::open_qa;
  std::string text;                // single-turn payload
  std::vector<ChatMessage> turns;  // two_turn payload
  std::vector<std::string> lineage;
  Split split = Split::unassigned;
  bool unsafe_flagged = false;
  std::string generator_id;
};

std::string prompt_content_hash(TaskKind kind, const std::string& text,
                                const std::vector<ChatMessage>& turns);

PromptRecord make_prompt_record(TaskKind kind, std::string text,
                                std::vector<std::string> lineage,
                                std::string generator_id);

PromptRecord make_two_turn_record(std::vector<ChatMessage> turns,
                                  std::vector<std::string> lineage,
                                  std::string generator_id);

}  // namespace sdg
