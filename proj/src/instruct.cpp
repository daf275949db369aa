#include "sdg/instruct.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdg/templates.hpp"

namespace sdg::instruct {

using json = nlohmann::json;

namespace {
constexpr const char* kKindNames[] = {
    "paragraph_count", "word_count_min", "word_count_max",
    "json_object",     "yes_no_answer",  "keyword_include",
    "keyword_exclude", "bullet_count",   "title_present"};
constexpr int kNumKinds = 9;
}  // namespace

const char* verifier_kind_name(VerifierKind kind) {
  return kKindNames[static_cast<int>(kind)];
}

VerifierKind verifier_kind_from_name(const std::string& name) {
  for (int i = 0; i < kNumKinds; ++i) {
    if (name == kKindNames[i]) return static_cast<VerifierKind>(i);
  }
  throw std::invalid_argument("unknown verifier kind: " + name);
}

namespace {

bool needs_n(VerifierKind kind) {
  return kind == VerifierKind::paragraph_count || kind == VerifierKind::word_count_min ||
         kind == VerifierKind::word_count_max || kind == VerifierKind::bullet_count;
}

bool needs_keyword(VerifierKind kind) {
  return kind == VerifierKind::keyword_include || kind == VerifierKind::keyword_exclude;
}

int param_n(const VerifiableInstruction& instruction) {
  return std::stoi(instruction.params.at("n"));
}

std::string param_keyword(const VerifiableInstruction& instruction) {
  return instruction.params.at("keyword");
}

std::string number_words(int n) {
  static const char* words[] = {"zero", "one", "two",   "three", "four", "five",
                                "six",  "seven", "eight", "nine", "ten"};
  if (n >= 0 && n <= 10) return words[n];
  return std::to_string(n);
}

}  // namespace

VerifiableInstruction make_instruction(VerifierKind kind,
                                       std::map<std::string, std::string> params) {
  VerifiableInstruction instruction;
  instruction.kind = kind;
  instruction.params = std::move(params);
  if (needs_n(kind)) {
    int n = 0;
    try {
      n = std::stoi(instruction.params.at("n"));
    } catch (...) {
      throw std::invalid_argument("instruction kind requires positive integer param n");
    }
    if (n < 1) throw std::invalid_argument("param n must be positive");
  } else if (needs_keyword(kind)) {
    if (!instruction.params.count("keyword") || instruction.params.at("keyword").empty()) {
      throw std::invalid_argument("instruction kind requires param keyword");
    }
  }
  uint64_t h = fnv1a(verifier_kind_name(kind));
  for (const auto& [k, v] : instruction.params) {
    h = fnv1a("\x1f", h);
    h = fnv1a(k, h);
    h = fnv1a("=", h);
    h = fnv1a(v, h);
  }
  instruction.id = std::string("instr_") + verifier_kind_name(kind) + "_" + hex64(h).substr(0, 8);
  return instruction;
}

std::string render_instruction(const VerifiableInstruction& instruction) {
  switch (instruction.kind) {
    case VerifierKind::paragraph_count:
      return "Your response should have " + number_words(param_n(instruction)) +
             " paragraphs.";
    case VerifierKind::word_count_min:
      return "Your response should contain at least " +
             std::to_string(param_n(instruction)) + " words.";
    case VerifierKind::word_count_max:
      return "Your response should contain at most " +
             std::to_string(param_n(instruction)) + " words.";
    case VerifierKind::json_object:
      return "The output has to be in the json format.";
    case VerifierKind::yes_no_answer:
      return "Your answer should start with \"Yes\" or \"No\".";
    case VerifierKind::keyword_include:
      return "Your response must include the word \"" + param_keyword(instruction) +
             "\".";
    case VerifierKind::keyword_exclude:
      return "Your response must not include the word \"" + param_keyword(instruction) +
             "\".";
    case VerifierKind::bullet_count:
      return "Your response should contain exactly " +
             number_words(param_n(instruction)) + " bullet points.";
    case VerifierKind::title_present:
      return "Your response should start with a title wrapped in double angular "
             "brackets, such as <<poem of joy>>.";
  }
  return "";
}

std::string render_instruction_scoped(const VerifiableInstruction& instruction) {
  switch (instruction.kind) {
    case VerifierKind::paragraph_count:
      return "Answer with " + number_words(param_n(instruction)) + " paragraphs.";
    case VerifierKind::word_count_min:
      return "Answer with at least " + std::to_string(param_n(instruction)) + " words.";
    case VerifierKind::word_count_max:
      return "Answer with at most " + std::to_string(param_n(instruction)) + " words.";
    case VerifierKind::json_object:
      return "Answer in the json format.";
    case VerifierKind::yes_no_answer:
      return "Answer starting with \"Yes\" or \"No\".";
    case VerifierKind::keyword_include:
      return "Answer including the word \"" + param_keyword(instruction) + "\".";
    case VerifierKind::keyword_exclude:
      return "Answer without using the word \"" + param_keyword(instruction) + "\".";
    case VerifierKind::bullet_count:
      return "Answer with exactly " + number_words(param_n(instruction)) +
             " bullet points.";
    case VerifierKind::title_present:
      return "Answer starting with a title wrapped in double angular brackets.";
  }
  return "";
}

namespace {

std::vector<std::string> paragraphs_of(const std::string& response) {
  std::vector<std::string> blocks;
  std::string current;
  for (const auto& line : split_lines(response)) {
    if (trim(line).empty()) {
      if (!trim(current).empty()) blocks.push_back(current);
      current.clear();
    } else {
      if (!current.empty()) current += "\n";
      current += line;
    }
  }
  if (!trim(current).empty()) blocks.push_back(current);
  return blocks;
}

int word_count(const std::string& response) {
  std::istringstream in(response);
  std::string token;
  int count = 0;
  while (in >> token) ++count;
  return count;
}

// Strips a leading ``` fence line (with optional language tag) and the
// matching trailing fence.
std::string strip_code_fences(const std::string& response) {
  std::string body = trim(response);
  if (body.rfind("```", 0) != 0) return body;
  size_t first_newline = body.find('\n');
  if (first_newline == std::string::npos) return body;
  body = body.substr(first_newline + 1);
  size_t closing = body.rfind("```");
  if (closing != std::string::npos) body = body.substr(0, closing);
  return trim(body);
}

VerifierReport fail(std::string diagnostics) {
  return VerifierReport{false, std::move(diagnostics)};
}

VerifierReport pass() { return VerifierReport{true, ""}; }

}  // namespace

VerifierReport verify(const VerifiableInstruction& instruction,
                      const std::string& response) {
  switch (instruction.kind) {
    case VerifierKind::paragraph_count: {
      int want = param_n(instruction);
      int got = static_cast<int>(paragraphs_of(response).size());
      if (got == want) return pass();
      return fail("found " + std::to_string(got) + " paragraphs, expected " +
                  std::to_string(want));
    }
    case VerifierKind::word_count_min: {
      int want = param_n(instruction);
      int got = word_count(response);
      if (got >= want) return pass();
      return fail("found " + std::to_string(got) + " words, need at least " +
                  std::to_string(want));
    }
    case VerifierKind::word_count_max: {
      int want = param_n(instruction);
      int got = word_count(response);
      if (got <= want) return pass();
      return fail("found " + std::to_string(got) + " words, allowed at most " +
                  std::to_string(want));
    }
    case VerifierKind::json_object: {
      std::string payload = strip_code_fences(response);
      json parsed = json::parse(payload, nullptr, false);
      if (parsed.is_discarded()) return fail("response does not parse as json");
      if (!parsed.is_object()) return fail("json payload is not a single object");
      return pass();
    }
    case VerifierKind::yes_no_answer: {
      try {
        templates::parse_yes_no(response);
        return pass();
      } catch (const templates::ParseError&) {
        return fail("response does not start with Yes or No");
      }
    }
    case VerifierKind::keyword_include: {
      std::string kw = param_keyword(instruction);
      if (contains_ci(response, kw)) return pass();
      return fail("keyword \"" + kw + "\" not found");
    }
    case VerifierKind::keyword_exclude: {
      std::string kw = param_keyword(instruction);
      if (!contains_ci(response, kw)) return pass();
      return fail("forbidden keyword \"" + kw + "\" present");
    }
    case VerifierKind::bullet_count: {
      int want = param_n(instruction);
      int got = 0;
      for (const auto& line : split_lines(response)) {
        std::string t = trim(line);
        if (!t.empty() && (t[0] == '-' || t[0] == '*')) ++got;
      }
      if (got == want) return pass();
      return fail("found " + std::to_string(got) + " bullet points, expected " +
                  std::to_string(want));
    }
    case VerifierKind::title_present: {
      for (const auto& line : split_lines(response)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        bool angle = t.size() >= 5 && t.rfind("<<", 0) == 0 &&
                     t.compare(t.size() - 2, 2, ">>") == 0;
        bool star = t.size() >= 5 && t.rfind("**", 0) == 0 &&
                    t.compare(t.size() - 2, 2, "**") == 0;
        if (angle || star) return pass();
        return fail("first line is not a wrapped title");
      }
      return fail("response is empty");
    }
  }
  return fail("unknown verifier kind");
}

namespace {

bool ends_with_sentence_punct(const std::string& text) {
  std::string t = rtrim(text);
  if (t.empty()) return false;
  char c = t.back();
  return c == '.' || c == '!' || c == '?';
}

}  // namespace

PromptRecord compose_single(const PromptRecord& prompt,
                            const VerifiableInstruction& instruction) {
  if (prompt.task_kind == TaskKind::instruction_following ||
      prompt.task_kind == TaskKind::two_turn) {
    throw std::invalid_argument("cannot compose onto an " +
                                std::string(task_kind_name(prompt.task_kind)) +
                                " record");
  }
  std::string separator = ends_with_sentence_punct(prompt.text) ? " " : ". ";
  std::string text = rtrim(prompt.text) + separator + render_instruction(instruction);
  std::vector<std::string> lineage = prompt.lineage;
  lineage.push_back(prompt.id);
  lineage.push_back(instruction.id);
  PromptRecord rec = make_prompt_record(TaskKind::instruction_following, text,
                                        std::move(lineage), prompt.generator_id);
  return rec;
}

PromptRecord compose_single(const PromptRecord& prompt,
                            const std::vector<VerifiableInstruction>& pool, Rng& rng) {
  if (pool.empty()) throw std::invalid_argument("empty instruction pool");
  return compose_single(prompt, pool[rng.next_below(pool.size())]);
}

std::string compose_multi_turn_scope(const VerifiableInstruction& instruction) {
  std::string payload = render_instruction_scoped(instruction);
  if (payload.empty()) throw std::invalid_argument("empty instruction");
  return "Answer the question and all following questions according to: "
         "[BEGIN OF INSTRUCTION] " +
         payload + " [END OF INSTRUCTION]";
}

PromptRecord compose_second_turn_revision(const Dialogue& dialogue,
                                          const VerifiableInstruction& instruction) {
  if (dialogue.turns.size() < 2 || dialogue.turns[0].role != Role::user ||
      dialogue.turns[1].role != Role::assistant) {
    throw std::invalid_argument(
        "dialogue needs at least one completed (user, assistant) exchange");
  }
  std::vector<ChatMessage> turns = {dialogue.turns[0], dialogue.turns[1]};
  turns.push_back({Role::user, "Please revise your previous response. " +
                                   render_instruction(instruction)});
  return make_two_turn_record(std::move(turns), {dialogue.origin_prompt, instruction.id},
                              "");
}

std::vector<VerifiableInstruction> default_instruction_pool() {
  return {
      make_instruction(VerifierKind::paragraph_count, {{"n", "3"}}),
      make_instruction(VerifierKind::word_count_min, {{"n", "50"}}),
      make_instruction(VerifierKind::word_count_max, {{"n", "100"}}),
      make_instruction(VerifierKind::json_object),
      make_instruction(VerifierKind::yes_no_answer),
      make_instruction(VerifierKind::keyword_include, {{"keyword", "example"}}),
      make_instruction(VerifierKind::keyword_exclude, {{"keyword", "basically"}}),
      make_instruction(VerifierKind::bullet_count, {{"n", "4"}}),
      make_instruction(VerifierKind::title_present),
  };
}

void save_instruction_catalog(const std::vector<VerifiableInstruction>& pool,
                              const std::string& path) {
  json records = json::array();
  for (const auto& instruction : pool) {
    records.push_back({{"id", instruction.id},
                       {"kind", verifier_kind_name(instruction.kind)},
                       {"params", instruction.params},
                       {"statement", render_instruction(instruction)},
                       {"scoped", render_instruction_scoped(instruction)}});
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instruction catalog: " + path);
  out << records.dump(2) << "\n";
}

std::vector<VerifiableInstruction> load_instruction_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read instruction catalog: " + path);
  json records = json::parse(in);
  std::vector<VerifiableInstruction> pool;
  for (const auto& rec : records) {
    std::map<std::string, std::string> params =
        rec.at("params").get<std::map<std::string, std::string>>();
    pool.push_back(
        make_instruction(verifier_kind_from_name(rec.at("kind").get<std::string>()),
                         std::move(params)));
  }
  return pool;
}

}  // namespace sdg::instruct
