#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdg/chat.hpp"
#include "sdg/record.hpp"
#include "sdg/util.hpp"

namespace sdg::instruct {

enum class VerifierKind {
  paragraph_count,
  word_count_min,
  word_count_max,
  json_object,
  yes_no_answer,
  keyword_include,
  keyword_exclude,
  bullet_count,
  title_present,
};

const char* verifier_kind_name(VerifierKind kind);
VerifierKind verifier_kind_from_name(const std::string& name);

// A mechanically checkable response constraint. params: "n" (positive
// integer) for count kinds, "keyword" for keyword kinds, none otherwise.
struct VerifiableInstruction {
  std::string id;
  VerifierKind kind = VerifierKind::paragraph_count;
  std::map<std::string, std::string> params;
};

VerifiableInstruction make_instruction(VerifierKind kind,
                                       std::map<std::string, std::string> params = {});

// Statement form, e.g. "Your response should have three paragraphs."
std::string render_instruction(const VerifiableInstruction& instruction);

// Imperative form used inside the multi-turn scope wrapper, e.g.
// "Answer with three paragraphs."
std::string render_instruction_scoped(const VerifiableInstruction& instruction);

struct VerifierReport {
  bool pass = false;
  std::string diagnostics;  // non-empty when pass is false
};

VerifierReport verify(const VerifiableInstruction& instruction,
                      const std::string& response);

// prompt text + separator + rendered instruction; instruction choice by
// the caller (seeded rng upstream keeps selection reproducible).
PromptRecord compose_single(const PromptRecord& prompt,
                            const VerifiableInstruction& instruction);

// Pick one instruction from a pool under rng and compose it.
PromptRecord compose_single(const PromptRecord& prompt,
                            const std::vector<VerifiableInstruction>& pool, Rng& rng);

// "[BEGIN OF INSTRUCTION] ... [END OF INSTRUCTION]" scoping wrapper.
std::string compose_multi_turn_scope(const VerifiableInstruction& instruction);

// Prior exchange + a new user turn requesting revision per the instruction.
PromptRecord compose_second_turn_revision(const Dialogue& dialogue,
                                          const VerifiableInstruction& instruction);

// The shipped default instruction pool (all 9 kinds).
std::vector<VerifiableInstruction> default_instruction_pool();

void save_instruction_catalog(const std::vector<VerifiableInstruction>& pool,
                              const std::string& path);
std::vector<VerifiableInstruction> load_instruction_catalog(const std::string& path);

}  // namespace sdg::instruct
