#include "bef4llm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

#include "bef4llm/embedded_data.hpp"

namespace bef {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string replace_all(std::string text, const std::string& placeholder,
                        const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(placeholder, pos)) != std::string::npos) {
    text.replace(pos, placeholder.size(), value);
    pos += value.size();
  }
  return text;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string store_key(const std::string& llm, const std::string& sample_id,
                      int run_index) {
  return llm + "\x1f" + sample_id + "\x1f" + std::to_string(run_index);
}

ValidationReport synthetic_invalid(const std::string& message) {
  ValidationReport report;
  report.valid = false;
  report.errors.push_back(
      {ValidationCode::Malformed, "response", message});
  return report;
}

}  // namespace

std::vector<Sample> load_dataset(const std::string& root_path) {
  const fs::path root(root_path);
  if (!fs::is_directory(root))
    throw MissingFile("dataset root " + root_path + " is not a directory");

  std::vector<Sample> samples;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const fs::path dir = entry.path();
    const fs::path description = dir / "description.txt";
    const fs::path truth = dir / "ground_truth.bpmn";
    if (!fs::exists(description))
      throw MissingFile("missing " + description.string());
    if (!fs::exists(truth)) throw MissingFile("missing " + truth.string());

    Sample sample;
    sample.id = dir.filename().string();
    sample.description = read_file(description);
    sample.source_tag = dir.string();

    const std::string xml = read_file(truth);
    const ValidationReport report = validate(xml);
    if (!report.valid)
      throw InvalidGroundTruth(sample.id, report.error_lines());
    sample.ground_truth = parse_model(xml);
    if (sample.ground_truth.flow_objects.size() <= 2)
      throw InvalidGroundTruth(
          sample.id, {"TooFewNodes: ground truth must have more than 2 "
                      "flow objects"});
    samples.push_back(std::move(sample));
  }
  std::sort(samples.begin(), samples.end(),
            [](const Sample& a, const Sample& b) { return a.id < b.id; });
  return samples;
}

PromptSet PromptSet::bundled() {
  PromptSet set;
  set.system_template = data::kPromptSystem;
  set.modeling_template = data::kPromptModeling;
  set.refinement_template = data::kPromptRefinement;
  set.common_mistakes = data::kPromptCommonMistakes;
  return set;
}

PromptSet PromptSet::load(const std::string& dir) {
  auto read_template = [&](const char* name) {
    const fs::path path = fs::path(dir) / name;
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw TemplateMissing("missing prompt template " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  PromptSet set;
  set.system_template = read_template("system.txt");
  set.modeling_template = read_template("modeling.txt");
  set.refinement_template = read_template("refinement.txt");
  set.common_mistakes = read_template("common_mistakes.txt");
  return set;
}

RenderedPrompts render_prompts(
    const PromptSet& prompts, const Sample& sample,
    const std::optional<std::vector<std::string>>& validation_errors) {
  RenderedPrompts out;
  out.system = prompts.system_template;
  out.modeling =
      replace_all(prompts.modeling_template, "{description}",
                  sample.description);
  if (validation_errors) {
    std::string errors;
    for (const auto& line : *validation_errors) {
      if (!errors.empty()) errors += "\n";
      errors += line;
    }
    std::string refinement = replace_all(
        prompts.refinement_template, "{common_mistakes}",
        prompts.common_mistakes);
    out.refinement = replace_all(refinement, "{errors}", errors);
  }
  return out;
}

HttpChatClient::HttpChatClient(GenerationConfig config)
    : config_(std::move(config)) {}

ChatResult HttpChatClient::chat(const std::vector<ChatMessage>& messages) {
  ChatResult result;
  httplib::Client client(config_.endpoint_url);
  client.set_connection_timeout(config_.timeout_seconds, 0);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_write_timeout(config_.timeout_seconds, 0);
  if (!config_.api_key.empty()) client.set_bearer_token_auth(config_.api_key);

  json body;
  body["model"] = config_.model_name;
  body["messages"] = json::array();
  for (const auto& message : messages)
    body["messages"].push_back(
        {{"role", message.role}, {"content", message.content}});

  const char* path = nullptr;
  if (config_.api_profile == ApiProfile::OllamaChat) {
    path = "/api/chat";
    body["stream"] = false;
    body["options"] = {{"temperature", config_.temperature},
                       {"num_ctx", config_.context_length}};
  } else {
    path = "/v1/chat/completions";
    body["temperature"] = config_.temperature;
  }

  const auto started = std::chrono::steady_clock::now();
  auto response = client.Post(path, body.dump(), "application/json");
  const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::steady_clock::now() - started)
                           .count();

  if (!response) {
    result.error = "transport failure: " + httplib::to_string(response.error());
    result.timed_out = elapsed >= config_.timeout_seconds;
    return result;
  }
  if (response->status != 200) {
    result.error =
        "endpoint returned status " + std::to_string(response->status);
    return result;
  }

  const json parsed = json::parse(response->body, nullptr, false);
  if (parsed.is_discarded()) {
    result.error = "endpoint returned unparseable JSON";
    return result;
  }
  try {
    if (config_.api_profile == ApiProfile::OllamaChat)
      result.content = parsed.at("message").at("content").get<std::string>();
    else
      result.content = parsed.at("choices")
                           .at(0)
                           .at("message")
                           .at("content")
                           .get<std::string>();
  } catch (const json::exception& e) {
    result.error = std::string("unexpected response shape: ") + e.what();
    return result;
  }
  result.ok = true;
  return result;
}

std::string extract_candidate_xml(const std::string& response_text) {
  // reasoning spans are never part of the answer
  static const std::regex think_span("<think>[\\s\\S]*?</think>");
  const std::string text = std::regex_replace(response_text, think_span, "");

  const std::size_t fence = text.find("```");
  if (fence != std::string::npos) {
    std::size_t start = text.find('\n', fence);
    if (start != std::string::npos) {
      ++start;
      const std::size_t end = text.find("```", start);
      if (end != std::string::npos) return text.substr(start, end - start);
    }
  }

  const std::size_t declaration = text.find("<?xml");
  if (declaration != std::string::npos) {
    const std::size_t close = text.find("</definitions>", declaration);
    if (close != std::string::npos)
      return text.substr(declaration,
                         close + std::strlen("</definitions>") - declaration);
    const std::size_t prefixed_close =
        text.find(":definitions>", declaration);
    if (prefixed_close != std::string::npos) {
      const std::size_t end = prefixed_close + std::strlen(":definitions>");
      return text.substr(declaration, end - declaration);
    }
  }
  return text;
}

GenerationOutcome generate_with_refinement(ChatClient& client,
                                           const GenerationConfig& config,
                                           const PromptSet& prompts,
                                           const Sample& sample) {
  GenerationOutcome outcome;
  const RenderedPrompts initial = render_prompts(prompts, sample, std::nullopt);
  std::vector<ChatMessage> conversation = {
      {"system", initial.system},
      {"user", initial.modeling},
  };

  const auto t0 = std::chrono::steady_clock::now();
  ChatResult first = client.chat(conversation);
  outcome.generate_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();

  if (!first.ok) {
    outcome.timed_out = first.timed_out;
    outcome.errors.push_back(first.error);
    outcome.validation = synthetic_invalid(
        first.timed_out ? "generation timed out" : first.error);
    return outcome;
  }

  outcome.xml = extract_candidate_xml(first.content);
  outcome.validation = validate(*outcome.xml);
  if (outcome.validation.valid || config.max_refinements < 1) return outcome;

  const RenderedPrompts refined =
      render_prompts(prompts, sample, outcome.validation.error_lines());
  conversation.push_back({"assistant", first.content});
  conversation.push_back({"user", *refined.refinement});

  const auto t1 = std::chrono::steady_clock::now();
  ChatResult second = client.chat(conversation);
  outcome.refine_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t1)
                          .count();
  outcome.refinement_used = true;

  if (!second.ok) {
    outcome.timed_out = second.timed_out;
    outcome.errors.push_back(second.error);
    return outcome;  // first attempt's validation stands
  }
  outcome.xml = extract_candidate_xml(second.content);
  outcome.validation = validate(*outcome.xml);
  return outcome;
}

std::string RunRecord::to_json_line() const {
  json j;
  j["llm"] = llm;
  j["sample_id"] = sample_id;
  j["run_index"] = run_index;
  j["timestamp_utc"] = timestamp_utc;
  j["q_val"] = q_val;
  j["refinement_used"] = refinement_used;
  j["timed_out"] = timed_out;
  if (scores && q_val == 1) {
    json s;
    for (const auto& [k, v] : scores->syn->scores) s["syn"][k] = v;
    s["syn"]["q_syn"] = scores->syn->q_syn;
    for (const auto& [k, v] : scores->prag->normalized) s["prag"][k] = v;
    s["prag"]["q_prag"] = scores->prag->q_prag;
    for (const auto& [k, v] : scores->sem->scores) s["sem"][k] = v;
    s["sem"]["q_sem"] = scores->sem->q_sem;
    s["q_qual"] = *scores->q_qual;
    s["q_total"] = scores->q_total;
    j["scores"] = s;
  } else {
    j["scores"] = nullptr;
  }
  j["durations_ms"] = {{"generate", generate_ms},
                       {"refine", refine_ms},
                       {"evaluate", evaluate_ms}};
  j["errors"] = errors;
  return j.dump();
}

RunRecord RunRecord::from_json_line(const std::string& line) {
  const json j = json::parse(line);
  RunRecord record;
  record.llm = j.at("llm").get<std::string>();
  record.sample_id = j.at("sample_id").get<std::string>();
  record.run_index = j.at("run_index").get<int>();
  record.timestamp_utc = j.at("timestamp_utc").get<std::string>();
  record.q_val = j.at("q_val").get<int>();
  record.refinement_used = j.at("refinement_used").get<bool>();
  record.timed_out = j.at("timed_out").get<bool>();
  if (j.contains("scores") && !j["scores"].is_null()) {
    const json& s = j["scores"];
    SampleEvaluation eval;
    eval.q_val = record.q_val;
    SyntacticScores syn;
    for (const auto& [k, v] : s.at("syn").items()) {
      if (k == "q_syn")
        syn.q_syn = v.get<double>();
      else
        syn.scores[k] = v.get<double>();
    }
    PragmaticScores prag;
    for (const auto& [k, v] : s.at("prag").items()) {
      if (k == "q_prag")
        prag.q_prag = v.get<double>();
      else
        prag.normalized[k] = v.get<double>();
    }
    SemanticScores sem;
    for (const auto& [k, v] : s.at("sem").items()) {
      if (k == "q_sem")
        sem.q_sem = v.get<double>();
      else
        sem.scores[k] = v.get<double>();
    }
    eval.syn = std::move(syn);
    eval.prag = std::move(prag);
    eval.sem = std::move(sem);
    eval.q_qual = s.at("q_qual").get<double>();
    eval.q_total = s.at("q_total").get<double>();
    record.scores = std::move(eval);
  }
  const json& durations = j.at("durations_ms");
  record.generate_ms = durations.at("generate").get<long long>();
  record.refine_ms = durations.at("refine").get<long long>();
  record.evaluate_ms = durations.at("evaluate").get<long long>();
  record.errors = j.at("errors").get<std::vector<std::string>>();
  return record;
}

RecordStore::RecordStore(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    RunRecord record = RunRecord::from_json_line(line);
    keys_.insert(store_key(record.llm, record.sample_id, record.run_index));
    records_.push_back(std::move(record));
  }
}

bool RecordStore::contains(const std::string& llm,
                           const std::string& sample_id,
                           int run_index) const {
  return keys_.count(store_key(llm, sample_id, run_index)) > 0;
}

void RecordStore::append(const RunRecord& record) {
  const std::string key =
      store_key(record.llm, record.sample_id, record.run_index);
  if (keys_.count(key))
    throw std::runtime_error("duplicate record key " + key);
  std::ofstream out(path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to " + path_);
  out << record.to_json_line() << "\n";
  out.flush();
  keys_.insert(key);
  records_.push_back(record);
}

std::vector<RunRecord> RecordStore::records() const { return records_; }

std::vector<RunRecord> run_benchmark(
    ChatClient& client, const GenerationConfig& config,
    const PromptSet& prompts, const std::vector<Sample>& dataset,
    const ThresholdTable& thresholds, const SemanticConfig& semantic_config,
    RecordStore& store,
    const std::function<void(const RunRecord&)>& on_record) {
  std::vector<RunRecord> appended;
  for (int run_index = 1; run_index <= config.runs; ++run_index) {
    for (const auto& sample : dataset) {
      if (store.contains(config.model_name, sample.id, run_index)) continue;

      const GenerationOutcome outcome =
          generate_with_refinement(client, config, prompts, sample);

      RunRecord record;
      record.llm = config.model_name;
      record.sample_id = sample.id;
      record.run_index = run_index;
      record.timestamp_utc = utc_timestamp();
      record.refinement_used = outcome.refinement_used;
      record.timed_out = outcome.timed_out;
      record.generate_ms = outcome.generate_ms;
      record.refine_ms = outcome.refine_ms;
      record.errors = outcome.errors;

      if (outcome.validation.valid && outcome.xml) {
        const auto t0 = std::chrono::steady_clock::now();
        SampleEvaluation eval =
            evaluate_sample(*outcome.xml, sample.ground_truth, thresholds,
                            semantic_config);
        record.evaluate_ms =
            std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
        record.q_val = eval.q_val;
        if (eval.q_val == 1) record.scores = std::move(eval);
      } else {
        record.q_val = 0;
        for (const auto& line : outcome.validation.error_lines())
          record.errors.push_back(line);
      }

      store.append(record);
      appended.push_back(record);
      if (on_record) on_record(record);
    }
  }
  return appended;
}

}  // namespace bef
