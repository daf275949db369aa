#include "sdg/templates.hpp"

#include <fstream>

#include <json.hpp>

#include "sdg/util.hpp"

namespace sdg::templates {

using json = nlohmann::json;

std::set<std::string> placeholders_in(const std::string& body) {
  std::set<std::string> names;
  size_t pos = 0;
  while ((pos = body.find('{', pos)) != std::string::npos) {
    size_t end = body.find('}', pos + 1);
    if (end == std::string::npos) break;
    std::string name = body.substr(pos + 1, end - pos - 1);
    if (!name.empty() && name.find('{') == std::string::npos) {
      names.insert(name);
    }
    pos = end + 1;
  }
  return names;
}

void TemplateCatalog::add(PromptTemplate t) {
  auto found = placeholders_in(t.body);
  if (found != t.required_params) {
    throw TemplateError("placeholder/param mismatch in template " + t.id);
  }
  templates_[t.id] = std::move(t);
}

const PromptTemplate& TemplateCatalog::get(const std::string& id) const {
  auto it = templates_.find(id);
  if (it == templates_.end()) throw TemplateError("unknown template id: " + id);
  return it->second;
}

std::vector<std::string> TemplateCatalog::ids() const {
  std::vector<std::string> out;
  out.reserve(templates_.size());
  for (const auto& [id, _] : templates_) out.push_back(id);
  return out;
}

std::string TemplateCatalog::render(const std::string& id,
                                    const std::map<std::string, std::string>& params) const {
  const PromptTemplate& tpl = get(id);
  for (const auto& [name, _] : params) {
    if (!tpl.required_params.count(name)) {
      throw TemplateError("unexpected param \"" + name + "\" for template " + id);
    }
  }
  for (const auto& name : tpl.required_params) {
    if (!params.count(name)) {
      throw TemplateError("missing param \"" + name + "\" for template " + id);
    }
  }
  std::string out;
  out.reserve(tpl.body.size());
  size_t pos = 0;
  while (pos < tpl.body.size()) {
    size_t open = tpl.body.find('{', pos);
    if (open == std::string::npos) {
      out.append(tpl.body, pos, std::string::npos);
      break;
    }
    size_t close = tpl.body.find('}', open + 1);
    std::string name =
        close == std::string::npos ? "" : tpl.body.substr(open + 1, close - open - 1);
    auto it = params.find(name);
    if (close != std::string::npos && it != params.end()) {
      out.append(tpl.body, pos, open - pos);
      out.append(it->second);
      pos = close + 1;
    } else {
      out.append(tpl.body, pos, open - pos + 1);
      pos = open + 1;
    }
  }
  return out;
}

std::string TemplateCatalog::checksum() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [id, tpl] : templates_) {
    h = fnv1a(id, h);
    h = fnv1a("\x1f", h);
    h = fnv1a(tpl.body, h);
    h = fnv1a("\x1e", h);
  }
  return hex64(h);
}

void TemplateCatalog::save(const std::string& path) const {
  json records = json::array();
  for (const auto& [id, tpl] : templates_) {
    json params = json::array();
    for (const auto& p : tpl.required_params) params.push_back(p);
    records.push_back({{"id", id},
                       {"params", params},
                       {"paper_text", tpl.paper_text},
                       {"body", tpl.body}});
  }
  std::ofstream out(path);
  if (!out) throw TemplateError("cannot write catalog: " + path);
  out << records.dump(2) << "\n";
}

TemplateCatalog TemplateCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TemplateError("cannot read catalog: " + path);
  json records = json::parse(in);
  TemplateCatalog catalog;
  for (const auto& rec : records) {
    PromptTemplate tpl;
    tpl.id = rec.at("id").get<std::string>();
    tpl.body = rec.at("body").get<std::string>();
    tpl.paper_text = rec.value("paper_text", true);
    for (const auto& p : rec.at("params")) {
      tpl.required_params.insert(p.get<std::string>());
    }
    catalog.add(std::move(tpl));
  }
  return catalog;
}

namespace {

PromptTemplate tpl(std::string id, std::string body, bool paper_text = true) {
  PromptTemplate t;
  t.id = std::move(id);
  t.body = std::move(body);
  t.required_params = placeholders_in(t.body);
  t.paper_text = paper_text;
  return t;
}

constexpr const char* kHistoryPreamble =
    "Here is a conversation between a user and an assistant.\n"
    "<|The Start of Assistant's Conversation with User|>\n"
    "{Conversation History}\n"
    "<|The End of Assistant's Conversation with User|>\n"
    "\n"
    "Given the conversation above, generate a followup request or question in the tone "
    "of User. ";

TemplateCatalog make_builtin() {
  TemplateCatalog c;

  // -- Topic generation --
  c.add(tpl("macro_topics",
            "Can you generate {n_macro_topics} comprehensive topics that encompass "
            "various aspects of our daily life, the world, and science? Your answer "
            "should be a list of topics. Make the topics as diverse as possible.For "
            "example, 1. Food and drinks.\n2. Technology.\n"));
  c.add(tpl("subtopics",
            "Can you generate {n_subtopics} comprehensive topics that encompass various "
            "aspects of {text1}? Your answer should be a list of topics. Make the topics "
            "as diverse as possible."));
  c.add(tpl("math_macro_topics",
            "Can you generate {n_macro_topics} comprehensive topics that encompass the "
            "mathematics knowledge taughted in {school_level}? Your answer should be a "
            "list of topics. Make the topics as diverse as possible."));
  c.add(tpl("math_subtopics",
            "List {n_subtopics} mathemathics topics that encompass various aspects of "
            "\"{text1}\". Your answer should be a list of topics. Make the topics as "
            "diverse as possible."));
  c.add(tpl("math_classify",
            "Does the concept \"{text1}\" belong to one of the following categories?\n"
            "- Math concepts taught at elementary school, middle school, high school, "
            "and univiersity.\n"
            "- Important mathematics axioms, theorems, algorithms, equations, or "
            "inequalities.\n"
            "- Representative math problems, functions, and applications.\n"
            "\n"
            "Your answer should start with \"Yes\" or \"No\"."));
  c.add(tpl("python_macro_topics",
            "List {n_macro_topics} important concepts in the python language."));
  c.add(tpl("python_subtopics",
            "List {n_subtopics} important concepts related to \"{text1}\" in the python "
            "language."));
  c.add(tpl("python_classify",
            "Does the concept \"{text1}\" belong to one of the following categories?\n"
            "- Programming concepts like loops, functions, and data structures in "
            "python.\n"
            "- Important functions, objects, or libraries in python.\n"
            "- Mathematical concepts like linear algebra which can be implemented in "
            "python.\n"
            "- Basic algorithms or problems in computer science likes Greedy Search and "
            "Dynamics programming which can be addressed in python.\n"
            "\n"
            "Your answer should start with \"Yes\" or \"No\"."));

  // -- Open Q&A --
  c.add(tpl("open_qa_questions",
            "Can you generate {n_openlines} questions or requests related to {text1}? "
            "The questions and requests should be as diverse possible. Your answer "
            "should be a list."));
  c.add(tpl("open_qa_revise",
            "Question: {text1}\n"
            "\n"
            "Can you revise the question above to include more contexts or details? The "
            "revised questions can be any of the follows:\n"
            "1. Adding some context to the original question. The context might state "
            "the importance of the question, explain background knowledge, or add other "
            "reasonable information.\n"
            "2. Change the questions into a different format or style, e.g., imperative "
            "statements, length requirements for the answer, etc.\n"
            "3. Elongated questions that require to elaborate on specific topic or "
            "discuss a certain point.\n"
            "4. Any other related questions or statements.\n"
            "\n"
            "The revised question should contain two, three, or four sentences. You "
            "should generate {n_tasks} revised questions or statements in a list. Make "
            "them as diverse as possible."));

  // -- Writing --
  c.add(tpl("writing_tasks",
            "Can you generate {n_openlines} tasks, each of which requires to create a "
            "\"{text2}\" related to {text1}? Each task should be concise and include "
            "one or two sentences only. The tasks should be as diverse as possible. "
            "Your answer should be a list of tasks."));
  c.add(tpl("writing_revise",
            "TASK: {text1}\n"
            "\n"
            "Can you revise the task above to include more detailed requirements? These "
            "requirements can be any of the follows:\n"
            "1. Require to elaborate on a specific topic or discuss a certain point.\n"
            "2. Require to include some examples, data points, or references.\n"
            "3. Require to follow specific formats or styles, e.g., no more than 300 "
            "words, including specific words, etc.\n"
            "4. Any other reasonable requests to make the task more detailed.\n"
            "\n"
            "The revised task should contain two, three, or four sentences. You should "
            "generate {n_tasks} revised tasks in a list. Make the tasks as diverse as "
            "possible."));

  // -- Closed Q&A --
  c.add(tpl("closed_qa_instructions",
            "TEXT: {text1}\n"
            "\n"
            "Given the text above, can you come up with {n_instructions} questions or "
            "tasks? They can be any of the follows:\n"
            "1. Asking certain information in the text;\n"
            "2. Summarizing, repharsing or explaining the text;\n"
            "3. Writing something similar to the text;\n"
            "4. Any other reasonable requests related to the text.\n"
            "\n"
            "Make the questions or tasks as diverse as possible."));

  // -- Math & coding problems --
  c.add(tpl("math_problems_general",
            "Generate {n_problems_per_topic} mathematics problems which are related to "
            "\"{text1}\" or can be addressed using \"{text1}\". Your answer should be a "
            "list of problems. Make them as diverse as possible."));
  c.add(tpl("math_problems_beginner",
            "Generate {n_problems_per_topic} mathematics problems which are related to "
            "\"{text1}\" or can be addressed using \"{text1}\". These problems should "
            "be suitable for beginners who just learnt \"{text1}\". Your answer should "
            "be a list of problems. Make them as diverse as possible."));
  c.add(tpl("coding_problems_beginner",
            "Generate {n_problems_per_entity} {language} coding problems related to "
            "\"{text1}\". These problems should be suitable for beginners who just "
            "learnt \"{text1}\". Your answer should be a list of problems. Make them as "
            "diverse as possible."));
  c.add(tpl("coding_problems_intermediate",
            "Generate {n_problems_per_entity} {language} coding problems related to "
            "\"{text1}\". These problems should be suitable for medium-level "
            "programmers with some experiences of \"{text1}\". Your answer should be a "
            "list of problems. Make them as diverse as possible."));
  c.add(tpl("coding_problems_advanced",
            "Generate {n_problems_per_entity} {language} coding problems related to "
            "\"{text1}\". These problems should be suitable for advanced programmers "
            "with solid knowledge and experiences of \"{text1}\". Your answer should be "
            "a list of problems. Make them as diverse as possible."));

  // -- User-turn elicitation personas --
  c.add(tpl("user_turn_v1",
            std::string(kHistoryPreamble) +
                "Directly give me the question without extraneous words."));
  c.add(tpl("user_turn_v2",
            std::string(kHistoryPreamble) +
                "Make sure the question is complex and diverse enough and suitable as a "
                "followup question. Directly give me the question without extraneous "
                "words."));
  c.add(tpl("user_turn_v3",
            std::string(kHistoryPreamble) +
                "Be critical. Make sure the question is concise and has a real-life "
                "tone. Directly give me the question without extraneous words."));

  // -- Pairwise judge --
  c.add(tpl("llm_judge",
            "Please act as an impartial judge and evaluate the quality of the responses "
            "provided by two AI assistants to the user question displayed below. You "
            "should choose the assistant that follows the user's instructions and "
            "answers the user's question better. Your evaluation should consider "
            "factors such as the helpfulness, relevance, accuracy, depth, creativity, "
            "and level of detail of their responses. Begin your evaluation by comparing "
            "the two responses and provide a short explanation. Avoid any positional "
            "biases and ensure that the order in which the responses were presented "
            "does not influence your decision. Do not allow the length of the responses "
            "to influence your evaluation. Do not favor certain names of the "
            "assistants. Be as objective as possible. After providing your explanation, "
            "output your final verdict by strictly following this format: \"[[A]]\" if "
            "assistant A is better, \"[[B]]\" if assistant B is better, and \"[[C]]\" "
            "for a tie.\n"
            "\n"
            "[User Question]\n{text1}\n"
            "\n"
            "[The Start of Assistant A's Answer]\n{text2}\n[The End of Assistant A's "
            "Answer]\n"
            "\n"
            "[The Start of Assistant B's Answer]\n{text3}\n[The End of Assistant B's "
            "Answer]"));

  // -- Evaluation answer-format templates --
  c.add(tpl("gsm8k_eval",
            "<extra_id_0>System\n"
            "\n"
            "<extra_id_1>User\n"
            "Below is a math question. I want you to first reason through the steps "
            "required to reach the answer, then end your response with \"#### \" "
            "followed by the answer. For instance, if the answer is 42 then your "
            "response must end with \"#### 42\" (without the quotes).\n"
            "\n"
            "{question}\n"
            "<extra_id_1>Assistant\n"));
  c.add(tpl("general_eval",
            "<extra_id_0>System\n"
            "\n"
            "<extra_id_1>User\n"
            "{question}\n"
            "<extra_id_1>Assistant\n"));

  // -- Locally authored helpers (no published text exists for these) --
  c.add(tpl("closed_qa_compose_instruction_first", "{instruction}\n\nText: {document}",
            /*paper_text=*/false));
  c.add(tpl("closed_qa_compose_document_first", "{document}\n\n{instruction}",
            /*paper_text=*/false));
  c.add(tpl("genetic_fitness_judge",
            "You are given a coding instruction and a candidate solution.\n"
            "\n"
            "Instruction:\n{instruction}\n"
            "\n"
            "Solution:\n{solution}\n"
            "\n"
            "Is the instruction clear and self-contained, and is the solution a correct "
            "and high-quality answer to it? Your answer should start with \"Yes\" or "
            "\"No\".",
            /*paper_text=*/false));
  c.add(tpl("genetic_self_instruct_new",
            "Here is an example coding task:\n{instruction}\n"
            "\n"
            "Write one new, different coding task in the same general area. Give only "
            "the task itself.",
            /*paper_text=*/false));
  c.add(tpl("genetic_evolve_constraints",
            "Rewrite the following coding task, adding one more requirement or "
            "constraint. Give only the rewritten task.\n"
            "\n"
            "{instruction}",
            /*paper_text=*/false));
  c.add(tpl("genetic_evolve_deepen",
            "Rewrite the following coding task to increase its depth and difficulty. "
            "Give only the rewritten task.\n"
            "\n"
            "{instruction}",
            /*paper_text=*/false));
  c.add(tpl("genetic_evolve_concretize",
            "Rewrite the following coding task, replacing general ideas with specific, "
            "concrete details. Give only the rewritten task.\n"
            "\n"
            "{instruction}",
            /*paper_text=*/false));
  c.add(tpl("genetic_crossover_combine",
            "Combine the following coding tasks into one new coding task that draws on "
            "both. Give only the new task.\n"
            "\n"
            "Task 1:\n{instruction1}\n"
            "\n"
            "Task 2:\n{instruction2}",
            /*paper_text=*/false));

  return c;
}

}  // namespace

const TemplateCatalog& TemplateCatalog::builtin() {
  static const TemplateCatalog catalog = make_builtin();
  return catalog;
}

namespace {

// Ordinal prefix: digits then '.', ')' or ':'.
std::optional<std::string> strip_ordinal(const std::string& line) {
  size_t i = 0;
  while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
  size_t digits_start = i;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == digits_start) return std::nullopt;
  if (i >= line.size()) return std::nullopt;
  char sep = line[i];
  if (sep != '.' && sep != ')' && sep != ':') return std::nullopt;
  return trim(line.substr(i + 1));
}

}  // namespace

NumberedList parse_numbered_list(const std::string& text, std::optional<int> expected_n) {
  NumberedList result;
  for (const auto& line : split_lines(text)) {
    auto payload = strip_ordinal(line);
    if (payload && !payload->empty()) {
      result.items.push_back(*payload);
    }
  }
  if (result.items.empty()) {
    throw ParseError("no numbered list items found", text);
  }
  if (expected_n) {
    result.short_of_expected = static_cast<int>(result.items.size()) < *expected_n;
    result.long_of_expected = static_cast<int>(result.items.size()) > *expected_n;
  }
  return result;
}

bool parse_yes_no(const std::string& text) {
  size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::string token;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
    token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
    ++i;
  }
  if (token == "yes") return true;
  if (token == "no") return false;
  throw ParseError("response does not start with Yes or No", text);
}

Verdict parse_verdict(const std::string& text) {
  Verdict verdict;
  size_t pos = 0;
  size_t last_found = std::string::npos;
  char last_letter = 0;
  while ((pos = text.find("[[", pos)) != std::string::npos) {
    if (pos + 5 <= text.size() && text.compare(pos + 3, 2, "]]") == 0) {
      char letter = text[pos + 2];
      if (letter == 'A' || letter == 'B' || letter == 'C') {
        last_found = pos;
        last_letter = letter;
      }
    }
    pos += 2;
  }
  if (last_found == std::string::npos) {
    verdict.value = Verdict::Value::Invalid;
    verdict.raw = text;
    return verdict;
  }
  verdict.value = last_letter == 'A'   ? Verdict::Value::A
                  : last_letter == 'B' ? Verdict::Value::B
                                       : Verdict::Value::Tie;
  return verdict;
}

}  // namespace sdg::templates
