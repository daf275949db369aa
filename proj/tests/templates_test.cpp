#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "sdg/templates.hpp"

using namespace sdg::templates;

TEST_CASE("placeholders_in finds brace-delimited names") {
  auto names = placeholders_in("a {x} b {long name} c {x}");
  CHECK(names == std::set<std::string>{"x", "long name"});
  CHECK(placeholders_in("no slots").empty());
}

TEST_CASE("render substitutes byte-exactly") {
  const auto& catalog = TemplateCatalog::builtin();
  std::string out = catalog.render("subtopics", {{"n_subtopics", "5"},
                                                 {"text1", "Machine learning"}});
  CHECK(out ==
        "Can you generate 5 comprehensive topics that encompass various aspects of "
        "Machine learning? Your answer should be a list of topics. Make the topics as "
        "diverse as possible.");
}

TEST_CASE("render rejects missing and unexpected params") {
  const auto& catalog = TemplateCatalog::builtin();
  CHECK_THROWS_AS(catalog.render("subtopics", {{"n_subtopics", "5"}}), TemplateError);
  CHECK_THROWS_AS(catalog.render("subtopics", {{"n_subtopics", "5"},
                                               {"text1", "x"},
                                               {"bogus", "y"}}),
                  TemplateError);
  CHECK_THROWS_AS(catalog.render("does_not_exist", {}), TemplateError);
}

TEST_CASE("the macro-topics opener matches the published phrasing") {
  // The source text runs sentences together ("possible.For example") and
  // that byte sequence must be preserved, not repaired.
  const auto& body = TemplateCatalog::builtin().get("macro_topics").body;
  CHECK(body.find("as diverse as possible.For example, 1. Food and drinks.\n2. "
                  "Technology.\n") != std::string::npos);
  CHECK(body.rfind("Can you generate {n_macro_topics} comprehensive topics", 0) == 0);
}

TEST_CASE("known typos in the source text are preserved verbatim") {
  const auto& catalog = TemplateCatalog::builtin();
  CHECK(catalog.get("math_subtopics").body.find("mathemathics") != std::string::npos);
  CHECK(catalog.get("math_macro_topics").body.find("taughted") != std::string::npos);
  CHECK(catalog.get("math_classify").body.find("univiersity") != std::string::npos);
  CHECK(catalog.get("closed_qa_instructions").body.find("repharsing") !=
        std::string::npos);
  CHECK(catalog.get("open_qa_questions").body.find("as diverse possible") !=
        std::string::npos);
}

TEST_CASE("persona templates wrap the history slot in sentinel markers") {
  const auto& catalog = TemplateCatalog::builtin();
  for (const char* id : {"user_turn_v1", "user_turn_v2", "user_turn_v3"}) {
    const auto& body = catalog.get(id).body;
    CHECK(body.find("<|The Start of Assistant's Conversation with User|>\n"
                    "{Conversation History}\n"
                    "<|The End of Assistant's Conversation with User|>") !=
          std::string::npos);
    CHECK(body.find("Directly give me the question without extraneous words.") !=
          std::string::npos);
  }
}

TEST_CASE("judge template carries the A/B/C verdict protocol and slots") {
  const auto& body = TemplateCatalog::builtin().get("llm_judge").body;
  CHECK(body.find("\"[[A]]\" if assistant A is better") != std::string::npos);
  CHECK(body.find("\"[[C]]\" for a tie") != std::string::npos);
  CHECK(body.find("[The Start of Assistant A's Answer]\n{text2}") != std::string::npos);
  CHECK(body.find("[The Start of Assistant B's Answer]\n{text3}") != std::string::npos);
}

TEST_CASE("adding a template with mismatched params fails") {
  TemplateCatalog catalog;
  PromptTemplate t;
  t.id = "broken";
  t.body = "uses {x}";
  t.required_params = {"y"};
  CHECK_THROWS_AS(catalog.add(std::move(t)), TemplateError);
}

TEST_CASE("checksum is stable and sensitive to edits") {
  TemplateCatalog a, b;
  PromptTemplate t;
  t.id = "one";
  t.body = "body {x}";
  t.required_params = {"x"};
  a.add(t);
  b.add(t);
  CHECK(a.checksum() == b.checksum());
  PromptTemplate t2 = t;
  t2.body = "body2 {x}";
  TemplateCatalog c;
  c.add(t2);
  CHECK(a.checksum() != c.checksum());
}

TEST_CASE("save/load round-trips the builtin catalog exactly") {
  namespace fs = std::filesystem;
  fs::path path = fs::temp_directory_path() / "catalog_roundtrip.json";
  const auto& builtin = TemplateCatalog::builtin();
  builtin.save(path.string());
  auto loaded = TemplateCatalog::load(path.string());
  CHECK(loaded.checksum() == builtin.checksum());
  for (const auto& id : builtin.ids()) {
    CHECK(loaded.get(id).body == builtin.get(id).body);
    CHECK(loaded.get(id).paper_text == builtin.get(id).paper_text);
  }
  fs::remove(path);
}

TEST_CASE("parse_numbered_list strips ordinals and trims payloads") {
  auto list = parse_numbered_list("1. First item\n2) Second\n 3: Third \nignored");
  REQUIRE(list.items.size() == 3);
  CHECK(list.items[0] == "First item");
  CHECK(list.items[1] == "Second");
  CHECK(list.items[2] == "Third");
}

TEST_CASE("parse_numbered_list flags count mismatches against expectations") {
  auto short_list = parse_numbered_list("1. only", 3);
  CHECK(short_list.short_of_expected);
  CHECK(!short_list.long_of_expected);
  auto long_list = parse_numbered_list("1. a\n2. b\n3. c", 2);
  CHECK(long_list.long_of_expected);
  auto exact = parse_numbered_list("1. a\n2. b", 2);
  CHECK(!exact.short_of_expected);
  CHECK(!exact.long_of_expected);
}

TEST_CASE("parse_numbered_list drops empty payloads and requires one item") {
  auto list = parse_numbered_list("1.\n2. real");
  REQUIRE(list.items.size() == 1);
  CHECK(list.items[0] == "real");
  CHECK_THROWS_AS(parse_numbered_list("no list here"), ParseError);
  try {
    parse_numbered_list("raw text");
    FAIL("expected throw");
  } catch (const ParseError& e) {
    CHECK(e.raw() == "raw text");  // raw text preserved for diagnostics
  }
}

TEST_CASE("parse_yes_no reads the first token case-insensitively") {
  CHECK(parse_yes_no("Yes, that is right."));
  CHECK(parse_yes_no("  yes"));
  CHECK(!parse_yes_no("No. Definitely not."));
  CHECK(!parse_yes_no("NO"));
  CHECK_THROWS_AS(parse_yes_no("Maybe"), ParseError);
  CHECK_THROWS_AS(parse_yes_no(""), ParseError);
  // "Yesterday" starts with alphabetic run "yesterday", not "yes".
  CHECK_THROWS_AS(parse_yes_no("Yesterday"), ParseError);
}

TEST_CASE("parse_verdict takes the last bracketed verdict") {
  CHECK(parse_verdict("I think [[A]] ... no wait, [[B]]").value == Verdict::Value::B);
  CHECK(parse_verdict("[[C]]").value == Verdict::Value::Tie);
  CHECK(parse_verdict("verdict: [[A]]").value == Verdict::Value::A);
  auto invalid = parse_verdict("no verdict at all [[D]] [[AB]]");
  CHECK(invalid.value == Verdict::Value::Invalid);
  CHECK(invalid.raw == "no verdict at all [[D]] [[AB]]");
}

TEST_CASE("parse_verdict handles brackets at string boundaries") {
  CHECK(parse_verdict("[[B]]").value == Verdict::Value::B);
  CHECK(parse_verdict("x[[B]").value == Verdict::Value::Invalid);
  CHECK(parse_verdict("[[").value == Verdict::Value::Invalid);
}

TEST_CASE("shipped data/template_catalog.json matches the builtin catalog") {
  // ctest runs from the repo root.
  auto shipped = TemplateCatalog::load("data/template_catalog.json");
  CHECK(shipped.checksum() == TemplateCatalog::builtin().checksum());
}
