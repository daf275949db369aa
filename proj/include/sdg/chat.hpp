#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdg {

enum class Role { system, user, assistant };

const char* role_name(Role role);
Role role_from_name(const std::string& name);

struct ChatMessage {
  Role role = Role::user;
  std::string content;
};

// content must be non-empty for user/assistant turns (system may be empty).
void validate_message(const ChatMessage& msg);

enum class PersonaVariant { V1_normal, V2_complex, V3_concise };

const char* persona_name(PersonaVariant v);

// Role-alternating conversation: turns[0] is user, roles strictly
// alternate, and a complete k-exchange dialogue has exactly 2k turns.
struct Dialogue {
  std::vector<ChatMessage> turns;
  std::string origin_prompt;  // PromptRecord id
  PersonaVariant persona_variant = PersonaVariant::V1_normal;
  std::optional<double> aggregate_reward;

  bool complete() const {
    return !turns.empty() && turns.back().role == Role::assistant;
  }
};

// Throws std::invalid_argument on alternation/role violations.
void validate_dialogue(const Dialogue& dialogue);

}  // namespace sdg
