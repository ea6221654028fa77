#pragma once

#include <map>
#include <string>
#include <vector>

namespace bef {

enum class ValidationCode {
  Malformed,
  WrongNamespace,
  SchemaViolation,
  DuplicateId,
  DanglingRef,
  TooFewNodes,
};

const char* to_string(ValidationCode code);

struct ValidationError {
  ValidationCode code;
  std::string location;  // element/id path
  std::string message;

  // Stable single-line rendering; embedded verbatim into the refinement
  // prompt, so the format is contractual.
  std::string line() const;
};

struct ValidationReport {
  bool valid = false;
  std::vector<ValidationError> errors;

  std::vector<std::string> error_lines() const;
};

// Vocabulary + required-attribute + containment rules distilled from the
// BPMN 2.0 interchange schema; see schemas/bpmn20/elements.tsv.
struct SchemaRules {
  struct Rule {
    std::vector<std::string> parents;  // "*" = any, "ROOT" = document root
    std::vector<std::string> required_attributes;
  };
  std::map<std::string, Rule> elements;

  static SchemaRules bundled();
  static SchemaRules load(const std::string& path);
  static SchemaRules parse(const std::string& tsv);
};

// Staged validity check: well-formedness, BPMN namespace, schema rules,
// id uniqueness, reference integrity, >= 2 flow objects. Stops at the
// first failing stage but reports every error found within it.
ValidationReport validate(const std::string& xml_text);
ValidationReport validate(const std::string& xml_text,
                          const SchemaRules& rules);

// Eq.-(3)-style step function: 1.0 iff the report is clean.
double validity_score(const ValidationReport& report);

}  // namespace bef
