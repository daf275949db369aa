#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "sdg/instruct.hpp"

using namespace sdg;
using namespace sdg::instruct;

TEST_CASE("verifier kind names round-trip") {
  for (int i = 0; i < 9; ++i) {
    auto kind = static_cast<VerifierKind>(i);
    CHECK(verifier_kind_from_name(verifier_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(verifier_kind_from_name("nope"), std::invalid_argument);
}

TEST_CASE("make_instruction validates parameters per kind") {
  CHECK_THROWS_AS(make_instruction(VerifierKind::paragraph_count), std::invalid_argument);
  CHECK_THROWS_AS(make_instruction(VerifierKind::word_count_min, {{"n", "0"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_instruction(VerifierKind::bullet_count, {{"n", "abc"}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_instruction(VerifierKind::keyword_include), std::invalid_argument);
  CHECK_THROWS_AS(make_instruction(VerifierKind::keyword_include, {{"keyword", ""}}),
                  std::invalid_argument);
  CHECK_NOTHROW(make_instruction(VerifierKind::json_object));
}

TEST_CASE("instruction ids are stable, content-derived, and kind-tagged") {
  auto a = make_instruction(VerifierKind::paragraph_count, {{"n", "3"}});
  auto b = make_instruction(VerifierKind::paragraph_count, {{"n", "3"}});
  auto c = make_instruction(VerifierKind::paragraph_count, {{"n", "4"}});
  CHECK(a.id == b.id);
  CHECK(a.id != c.id);
  CHECK(a.id.rfind("instr_paragraph_count_", 0) == 0);
}

TEST_CASE("render_instruction spells small counts as words") {
  CHECK(render_instruction(make_instruction(VerifierKind::paragraph_count, {{"n", "3"}})) ==
        "Your response should have three paragraphs.");
  CHECK(render_instruction(make_instruction(VerifierKind::bullet_count, {{"n", "4"}})) ==
        "Your response should contain exactly four bullet points.");
  CHECK(render_instruction(make_instruction(VerifierKind::word_count_min, {{"n", "50"}})) ==
        "Your response should contain at least 50 words.");
  CHECK(render_instruction(make_instruction(VerifierKind::yes_no_answer)) ==
        "Your answer should start with \"Yes\" or \"No\".");
  CHECK(render_instruction(make_instruction(VerifierKind::title_present)) ==
        "Your response should start with a title wrapped in double angular brackets, "
        "such as <<poem of joy>>.");
}

TEST_CASE("render_instruction_scoped uses the imperative form") {
  CHECK(render_instruction_scoped(
            make_instruction(VerifierKind::paragraph_count, {{"n", "2"}})) ==
        "Answer with two paragraphs.");
  CHECK(render_instruction_scoped(make_instruction(VerifierKind::json_object)) ==
        "Answer in the json format.");
}

TEST_CASE("paragraph_count verifier counts blank-line-separated blocks") {
  auto instr = make_instruction(VerifierKind::paragraph_count, {{"n", "2"}});
  CHECK(verify(instr, "First block\nstill first.\n\nSecond block.").pass);
  CHECK(verify(instr, "First.\n\n\n\nSecond.").pass);  // extra blanks collapse
  auto fail1 = verify(instr, "Only one paragraph.");
  CHECK(!fail1.pass);
  CHECK(fail1.diagnostics == "found 1 paragraphs, expected 2");
  CHECK(!verify(instr, "a\n\nb\n\nc").pass);
}

TEST_CASE("word count verifiers split on whitespace") {
  auto min5 = make_instruction(VerifierKind::word_count_min, {{"n", "5"}});
  CHECK(verify(min5, "one two three four five").pass);
  CHECK(!verify(min5, "one two three four").pass);
  auto max3 = make_instruction(VerifierKind::word_count_max, {{"n", "3"}});
  CHECK(verify(max3, "just three words").pass);
  CHECK(verify(max3, "two words").pass);
  CHECK(!verify(max3, "this has too many words").pass);
}

TEST_CASE("json_object verifier accepts objects, optionally fenced") {
  auto instr = make_instruction(VerifierKind::json_object);
  CHECK(verify(instr, R"({"a": 1, "b": [2, 3]})").pass);
  CHECK(verify(instr, "```json\n{\"a\": 1}\n```").pass);
  CHECK(verify(instr, "```\n{\"a\": 1}\n```").pass);
  CHECK(!verify(instr, "[1, 2, 3]").pass);  // array is not an object
  CHECK(!verify(instr, "not json at all").pass);
  CHECK(!verify(instr, "{\"a\": }").pass);
}

TEST_CASE("yes_no_answer verifier") {
  auto instr = make_instruction(VerifierKind::yes_no_answer);
  CHECK(verify(instr, "Yes, because...").pass);
  CHECK(verify(instr, "no").pass);
  CHECK(!verify(instr, "Probably yes").pass);
}

TEST_CASE("keyword verifiers match case-insensitive substrings") {
  auto include = make_instruction(VerifierKind::keyword_include, {{"keyword", "tide"}});
  CHECK(verify(include, "The TIDE rises.").pass);
  // Substring semantics: "tides" contains "tide".
  CHECK(verify(include, "watching the tides").pass);
  CHECK(!verify(include, "the ocean moves").pass);
  auto exclude = make_instruction(VerifierKind::keyword_exclude, {{"keyword", "tide"}});
  CHECK(verify(exclude, "the ocean moves").pass);
  CHECK(!verify(exclude, "high Tide tonight").pass);
}

TEST_CASE("bullet_count verifier counts - and * lines") {
  auto instr = make_instruction(VerifierKind::bullet_count, {{"n", "3"}});
  CHECK(verify(instr, "- a\n* b\n  - c").pass);
  CHECK(!verify(instr, "- a\n- b").pass);
  CHECK(!verify(instr, "1. a\n2. b\n3. c").pass);  // numbered lists are not bullets
}

TEST_CASE("title_present verifier checks the first non-empty line") {
  auto instr = make_instruction(VerifierKind::title_present);
  CHECK(verify(instr, "<<poem of joy>>\nbody").pass);
  CHECK(verify(instr, "\n  **Bold Title**\nbody").pass);
  CHECK(!verify(instr, "no title\n<<late title>>").pass);
  CHECK(!verify(instr, "<<unclosed\nbody").pass);
  CHECK(!verify(instr, "").pass);
  CHECK(!verify(instr, "<<>>").pass);  // too short to be a wrapped title
}

TEST_CASE("verify is a pure function of its inputs") {
  auto instr = make_instruction(VerifierKind::word_count_min, {{"n", "3"}});
  std::string response = "alpha beta gamma";
  auto first = verify(instr, response);
  auto second = verify(instr, response);
  CHECK(first.pass == second.pass);
  CHECK(first.diagnostics == second.diagnostics);
}

TEST_CASE("compose_single joins with the right separator") {
  PromptRecord with_punct = make_prompt_record(TaskKind::open_qa, "Why brine?", {}, "g");
  auto instr = make_instruction(VerifierKind::paragraph_count, {{"n", "2"}});
  auto composed = compose_single(with_punct, instr);
  CHECK(composed.text == "Why brine? Your response should have two paragraphs.");
  CHECK(composed.task_kind == TaskKind::instruction_following);
  // Lineage: parent prompt id then instruction id.
  REQUIRE(composed.lineage.size() == 2);
  CHECK(composed.lineage[0] == with_punct.id);
  CHECK(composed.lineage[1] == instr.id);

  PromptRecord no_punct =
      make_prompt_record(TaskKind::writing, "Describe a tide pool", {}, "g");
  auto composed2 = compose_single(no_punct, instr);
  CHECK(composed2.text ==
        "Describe a tide pool. Your response should have two paragraphs.");
}

TEST_CASE("compose_single refuses already-composed and two-turn prompts") {
  auto instr = make_instruction(VerifierKind::json_object);
  PromptRecord already = make_prompt_record(TaskKind::instruction_following, "x", {}, "g");
  CHECK_THROWS_AS(compose_single(already, instr), std::invalid_argument);
  PromptRecord two_turn = make_two_turn_record(
      {{Role::user, "a"}, {Role::assistant, "b"}, {Role::user, "c"}}, {}, "g");
  CHECK_THROWS_AS(compose_single(two_turn, instr), std::invalid_argument);
}

TEST_CASE("compose_single pool overload draws deterministically") {
  PromptRecord prompt = make_prompt_record(TaskKind::open_qa, "Q?", {}, "g");
  auto pool = default_instruction_pool();
  Rng rng1(77), rng2(77);
  CHECK(compose_single(prompt, pool, rng1).text == compose_single(prompt, pool, rng2).text);
  Rng rng(1);
  CHECK_THROWS_AS(compose_single(prompt, {}, rng), std::invalid_argument);
}

TEST_CASE("compose_multi_turn_scope wraps the imperative instruction") {
  auto instr = make_instruction(VerifierKind::bullet_count, {{"n", "2"}});
  CHECK(compose_multi_turn_scope(instr) ==
        "Answer the question and all following questions according to: "
        "[BEGIN OF INSTRUCTION] Answer with exactly two bullet points. "
        "[END OF INSTRUCTION]");
}

TEST_CASE("compose_second_turn_revision builds a two-turn record") {
  Dialogue d;
  d.origin_prompt = "prompt-1";
  d.turns = {{Role::user, "Tell me about tides."}, {Role::assistant, "Tides are..."}};
  auto instr = make_instruction(VerifierKind::word_count_max, {{"n", "40"}});
  auto rec = compose_second_turn_revision(d, instr);
  CHECK(rec.task_kind == TaskKind::two_turn);
  REQUIRE(rec.turns.size() == 3);
  CHECK(rec.turns[2].role == Role::user);
  CHECK(rec.turns[2].content ==
        "Please revise your previous response. Your response should contain at most 40 "
        "words.");
  CHECK(rec.lineage == std::vector<std::string>{"prompt-1", instr.id});

  Dialogue incomplete;
  incomplete.turns = {{Role::user, "only user"}};
  CHECK_THROWS_AS(compose_second_turn_revision(incomplete, instr), std::invalid_argument);
}

TEST_CASE("default pool covers all nine kinds") {
  auto pool = default_instruction_pool();
  REQUIRE(pool.size() == 9);
  std::set<VerifierKind> kinds;
  for (const auto& instr : pool) kinds.insert(instr.kind);
  CHECK(kinds.size() == 9);
}

TEST_CASE("instruction catalog save/load round-trips") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "instructions_roundtrip.json";
  auto pool = default_instruction_pool();
  save_instruction_catalog(pool, path.string());
  auto loaded = load_instruction_catalog(path.string());
  REQUIRE(loaded.size() == pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    CHECK(loaded[i].id == pool[i].id);
    CHECK(loaded[i].kind == pool[i].kind);
    CHECK(loaded[i].params == pool[i].params);
  }
  fs::remove(path);
}

TEST_CASE("shipped data/instructions.json matches the default pool") {
  auto shipped = load_instruction_catalog("data/instructions.json");
  auto pool = default_instruction_pool();
  REQUIRE(shipped.size() == pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    CHECK(shipped[i].id == pool[i].id);
    CHECK(shipped[i].kind == pool[i].kind);
    CHECK(shipped[i].params == pool[i].params);
  }
}
