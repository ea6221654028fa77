#pragma once

#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bef4llm/model.hpp"
#include "bef4llm/scoring.hpp"
#include "bef4llm/validity.hpp"

namespace bef {

struct Sample {
  std::string id;
  std::string description;
  ProcessModel ground_truth;
  std::string source_tag;
};

enum class ApiProfile { OllamaChat, OpenAiChat };

struct GenerationConfig {
  std::string endpoint_url;
  ApiProfile api_profile = ApiProfile::OllamaChat;
  std::string model_name;
  double temperature = 0.1;
  int context_length = 40960;
  int timeout_seconds = 360;
  int runs = 5;
  int max_refinements = 1;
  std::string api_key;  // sent as a bearer token when non-empty
};

struct MissingFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidGroundTruth : std::runtime_error {
  std::string sample_id;
  std::vector<std::string> errors;

  InvalidGroundTruth(std::string id, std::vector<std::string> errs)
      : std::runtime_error("invalid ground truth for sample \"" + id + "\""),
        sample_id(std::move(id)),
        errors(std::move(errs)) {}
};

struct TemplateMissing : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Loads one directory per sample, each with description.txt and
// ground_truth.bpmn; samples come back sorted by id. Ground truths must
// validate and have more than 2 flow objects.
std::vector<Sample> load_dataset(const std::string& root_path);

struct PromptSet {
  std::string system_template;
  std::string modeling_template;    // placeholder {description}
  std::string refinement_template;  // {common_mistakes}, {errors}
  std::string common_mistakes;

  static PromptSet bundled();
  static PromptSet load(const std::string& dir);  // throws TemplateMissing
};

struct RenderedPrompts {
  std::string system;
  std::string modeling;
  std::optional<std::string> refinement;
};

RenderedPrompts render_prompts(
    const PromptSet& prompts, const Sample& sample,
    const std::optional<std::vector<std::string>>& validation_errors);

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct ChatResult {
  bool ok = false;
  bool timed_out = false;
  std::string content;
  std::string error;  // transport failures, recorded not thrown
};

class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual ChatResult chat(const std::vector<ChatMessage>& messages) = 0;
};

// Talks to /api/chat or /v1/chat/completions depending on the profile.
class HttpChatClient : public ChatClient {
 public:
  explicit HttpChatClient(GenerationConfig config);
  ChatResult chat(const std::vector<ChatMessage>& messages) override;

 private:
  GenerationConfig config_;
};

// Pulls candidate BPMN XML out of an LLM answer: strip any <think> spans,
// then first fenced code block, else the first <?xml .. </definitions>
// span, else the whole text.
std::string extract_candidate_xml(const std::string& response_text);

struct GenerationOutcome {
  std::optional<std::string> xml;
  ValidationReport validation;
  bool refinement_used = false;
  bool timed_out = false;
  std::vector<std::string> errors;  // transport-level
  long long generate_ms = 0;
  long long refine_ms = 0;
};

GenerationOutcome generate_with_refinement(ChatClient& client,
                                           const GenerationConfig& config,
                                           const PromptSet& prompts,
                                           const Sample& sample);

struct RunRecord {
  std::string llm;
  std::string sample_id;
  int run_index = 0;
  std::string timestamp_utc;
  int q_val = 0;
  bool refinement_used = false;
  bool timed_out = false;
  std::optional<SampleEvaluation> scores;  // present iff q_val = 1
  long long generate_ms = 0;
  long long refine_ms = 0;
  long long evaluate_ms = 0;
  std::vector<std::string> errors;

  std::string to_json_line() const;
  static RunRecord from_json_line(const std::string& line);
};

// Append-only line-delimited record log, uniquely keyed by
// (llm, sample_id, run_index); completed keys survive restarts.
class RecordStore {
 public:
  explicit RecordStore(std::string path);

  bool contains(const std::string& llm, const std::string& sample_id,
                int run_index) const;
  void append(const RunRecord& record);
  std::vector<RunRecord> records() const;

 private:
  std::string path_;
  std::set<std::string> keys_;
  std::vector<RunRecord> records_;
};

// Full benchmark sweep: runs x samples, skipping keys already in the
// store; returns the records appended by this call.
std::vector<RunRecord> run_benchmark(
    ChatClient& client, const GenerationConfig& config,
    const PromptSet& prompts, const std::vector<Sample>& dataset,
    const ThresholdTable& thresholds, const SemanticConfig& semantic_config,
    RecordStore& store,
    const std::function<void(const RunRecord&)>& on_record = {});

}  // namespace bef
