#include "sdg/chat.hpp"

namespace sdg {

const char* role_name(Role role) {
  switch (role) {
    case Role::system: return "system";
    case Role::user: return "user";
    case Role::assistant: return "assistant";
  }
  return "user";
}

Role role_from_name(const std::string& name) {
  if (name == "system") return Role::system;
  if (name == "user") return Role::user;
  if (name == "assistant") return Role::assistant;
  throw std::invalid_argument("unknown role: " + name);
}

void validate_message(const ChatMessage& msg) {
  if (msg.role != Role::system && msg.content.empty()) {
    throw std::invalid_argument("empty content for non-system message");
  }
}

const char* persona_name(PersonaVariant v) {
  switch (v) {
    case PersonaVariant::V1_normal: return "V1_normal";
    case PersonaVariant::V2_complex: return "V2_complex";
    case PersonaVariant::V3_concise: return "V3_concise";
  }
  return "V1_normal";
}

void validate_dialogue(const Dialogue& dialogue) {
  if (dialogue.turns.empty()) throw std::invalid_argument("empty dialogue");
  if (dialogue.turns[0].role != Role::user) {
    throw std::invalid_argument("dialogue must start with a user turn");
  }
  for (size_t i = 0; i < dialogue.turns.size(); ++i) {
    Role expected = (i % 2 == 0) ? Role::user : Role::assistant;
    if (dialogue.turns[i].role != expected) {
      throw std::invalid_argument("roles must alternate user/assistant");
    }
    validate_message(dialogue.turns[i]);
  }
}

}  // namespace sdg
