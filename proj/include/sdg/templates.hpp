#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdg::templates {

struct PromptTemplate {
  std::string id;
  std::string body;  // contains {placeholder} slots
  std::set<std::string> required_params;
  bool paper_text = true;  // false for locally authored templates
};

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::string raw)
      : std::runtime_error(msg), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Placeholder names occurring in a body ({...}, any chars but braces).
std::set<std::string> placeholders_in(const std::string& body);

class TemplateCatalog {
 public:
  // The full shipped template set: prompt-generation templates, the
  // user-turn persona prompts, the pairwise judge prompt, the evaluation
  // answer-format templates, and the locally authored helpers.
  static const TemplateCatalog& builtin();

  static TemplateCatalog load(const std::string& path);
  void save(const std::string& path) const;

  const PromptTemplate& get(const std::string& id) const;
  bool has(const std::string& id) const { return templates_.count(id) > 0; }
  std::vector<std::string> ids() const;

  // Byte-exact substitution: every required param present, no extras, no
  // other transformation of the body.
  std::string render(const std::string& id,
                     const std::map<std::string, std::string>& params) const;

  std::string checksum() const;

  void add(PromptTemplate t);

 private:
  std::map<std::string, PromptTemplate> templates_;
};

struct NumberedList {
  std::vector<std::string> items;
  bool short_of_expected = false;
  bool long_of_expected = false;
};

// Lines with an ordinal prefix ("1.", "2)", "3:"), prefix stripped,
// whitespace trimmed, empty payloads dropped. Zero items -> ParseError.
NumberedList parse_numbered_list(const std::string& text,
                                 std::optional<int> expected_n = std::nullopt);

// First token, case-insensitive, punctuation-stripped, must be yes or no.
bool parse_yes_no(const std::string& text);

struct Verdict {
  enum class Value { A, B, Tie, Invalid };
  Value value = Value::Invalid;
  std::string raw;  // populated for Invalid, for diagnostics
};

// Last occurrence of [[A]] / [[B]] / [[C]] wins; none -> Invalid.
Verdict parse_verdict(const std::string& text);

}  // namespace sdg::templates
