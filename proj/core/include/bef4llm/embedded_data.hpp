#pragma once

// Bundled defaults compiled in from core/data, core/schemas and
// core/prompts at build time. File-based overrides take precedence
// everywhere these are used.
namespace bef::data {

extern const char* const kSchemaRulesTsv;
extern const char* const kThresholdsTsv;
extern const char* const kSynonymsTxt;
extern const char* const kStopwordsTxt;
extern const char* const kPromptSystem;
extern const char* const kPromptModeling;
extern const char* const kPromptRefinement;
extern const char* const kPromptCommonMistakes;

}  // namespace bef::data
