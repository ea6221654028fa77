#include "doctest.h"

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"

#include "bef4llm/harness.hpp"
#include "support/fixtures.hpp"

using namespace bef;
using bef::testing::fixture_path;
using bef::testing::read_fixture;
namespace fs = std::filesystem;

namespace {

// Replays canned responses and records every conversation it was given.
class ScriptedClient : public ChatClient {
 public:
  std::vector<ChatResult> script;
  std::vector<std::vector<ChatMessage>> calls;

  ChatResult chat(const std::vector<ChatMessage>& messages) override {
    calls.push_back(messages);
    if (calls.size() > script.size()) {
      ChatResult out;
      out.error = "script exhausted";
      return out;
    }
    return script[calls.size() - 1];
  }
};

ChatResult ok_response(const std::string& content) {
  ChatResult out;
  out.ok = true;
  out.content = content;
  return out;
}

GenerationConfig test_config() {
  GenerationConfig config;
  config.model_name = "mock-model";
  config.runs = 5;
  return config;
}

fs::path scratch_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("bef_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("dataset loads sorted with parsed ground truths") {
  const auto samples = load_dataset(fixture_path("dataset"));
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].id == "sample_a");
  CHECK(samples[1].id == "sample_b");
  CHECK_FALSE(samples[0].description.empty());
  CHECK(samples[0].ground_truth.flow_objects.size() == 7);
  CHECK(samples[1].ground_truth.flow_objects.size() == 4);
}

TEST_CASE("dataset loader rejects broken sample directories") {
  const fs::path root = scratch_dir("dataset");

  SUBCASE("missing description") {
    fs::create_directories(root / "s1");
    std::ofstream(root / "s1" / "ground_truth.bpmn") << read_fixture("M1.bpmn");
    CHECK_THROWS_AS(load_dataset(root.string()), MissingFile);
  }
  SUBCASE("missing ground truth") {
    fs::create_directories(root / "s1");
    std::ofstream(root / "s1" / "description.txt") << "a process";
    CHECK_THROWS_AS(load_dataset(root.string()), MissingFile);
  }
  SUBCASE("invalid ground truth") {
    fs::create_directories(root / "s1");
    std::ofstream(root / "s1" / "description.txt") << "a process";
    std::ofstream(root / "s1" / "ground_truth.bpmn")
        << read_fixture("invalid/dup_id_nodes.bpmn");
    CHECK_THROWS_AS(load_dataset(root.string()), InvalidGroundTruth);
  }
  SUBCASE("too small ground truth") {
    // valid but only 2 flow objects; ground truths need more than 2
    fs::create_directories(root / "s1");
    std::ofstream(root / "s1" / "description.txt") << "a process";
    std::ofstream(root / "s1" / "ground_truth.bpmn") << R"(<?xml version="1.0"?>
<definitions xmlns="http://www.omg.org/spec/BPMN/20100524/MODEL">
  <process id="p">
    <startEvent id="s"/>
    <endEvent id="e"/>
    <sequenceFlow id="f" sourceRef="s" targetRef="e"/>
  </process>
</definitions>)";
    CHECK_THROWS_AS(load_dataset(root.string()), InvalidGroundTruth);
  }
  fs::remove_all(root);
}

namespace {

std::string trimmed(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.erase(s.begin());
  return s;
}

}  // namespace

TEST_CASE("candidate extraction strategies") {
  const std::string xml = trimmed(read_fixture("M0.bpmn"));

  CHECK(trimmed(extract_candidate_xml(xml)) == xml);

  SUBCASE("fenced block wins") {
    const std::string text = "Here is the model:\n```xml\n" + xml + "\n```\n";
    CHECK(trimmed(extract_candidate_xml(text)) == xml);
  }
  SUBCASE("plain fence without a language tag") {
    const std::string text = "```\n" + xml + "\n```";
    CHECK(trimmed(extract_candidate_xml(text)) == xml);
  }
  SUBCASE("bare xml inside prose") {
    const std::string text = "Sure. " + xml + " Hope that helps.";
    CHECK(trimmed(extract_candidate_xml(text)) == xml);
  }
  SUBCASE("think spans are stripped first") {
    const std::string text =
        "<think>I should produce a fenced block here</think>\n" + xml;
    CHECK(trimmed(extract_candidate_xml(text)) == xml);
  }
  SUBCASE("prefixed definitions close tag") {
    const std::string prefixed =
        "<?xml version=\"1.0\"?>\n<bpmn:definitions "
        "xmlns:bpmn=\"http://www.omg.org/spec/BPMN/20100524/MODEL\">\n"
        "</bpmn:definitions>";
    CHECK(extract_candidate_xml("answer: " + prefixed + " done") == prefixed);
  }
  SUBCASE("no recognizable payload returns the text itself") {
    CHECK(extract_candidate_xml("no model here") == "no model here");
  }
}

TEST_CASE("prompt rendering substitutes the placeholders") {
  const PromptSet prompts = PromptSet::bundled();
  const auto samples = load_dataset(fixture_path("dataset"));
  const std::vector<std::string> errors = {
      "DuplicateId: duplicate id \"n1\"", "DanglingRef: unknown sourceRef"};

  const RenderedPrompts without = render_prompts(prompts, samples[0], {});
  CHECK(without.modeling.find(samples[0].description) != std::string::npos);
  CHECK(without.modeling.find("{description}") == std::string::npos);
  CHECK_FALSE(without.refinement.has_value());

  const RenderedPrompts with = render_prompts(prompts, samples[0], errors);
  REQUIRE(with.refinement.has_value());
  for (const auto& line : errors)
    CHECK(with.refinement->find(line) != std::string::npos);
  CHECK(with.refinement->find("{errors}") == std::string::npos);
  CHECK(with.refinement->find("{common_mistakes}") == std::string::npos);
  if (!prompts.common_mistakes.empty())
    CHECK(with.refinement->find(prompts.common_mistakes) != std::string::npos);
}

TEST_CASE("a valid first answer needs a single request") {
  ScriptedClient client;
  client.script = {ok_response(read_fixture("M1.bpmn"))};
  const auto samples = load_dataset(fixture_path("dataset"));

  const GenerationOutcome outcome = generate_with_refinement(
      client, test_config(), PromptSet::bundled(), samples[0]);
  CHECK(client.calls.size() == 1);
  CHECK(outcome.validation.valid);
  CHECK_FALSE(outcome.refinement_used);
  CHECK_FALSE(outcome.timed_out);
  REQUIRE(outcome.xml.has_value());

  // first conversation: system prompt then the modeling request
  REQUIRE(client.calls[0].size() == 2);
  CHECK(client.calls[0][0].role == "system");
  CHECK(client.calls[0][1].role == "user");
}

TEST_CASE("an invalid first answer triggers exactly one refinement") {
  const std::string bad = read_fixture("invalid/dup_id_nodes.bpmn");
  ScriptedClient client;
  client.script = {ok_response(bad), ok_response(read_fixture("M1.bpmn"))};
  const auto samples = load_dataset(fixture_path("dataset"));

  const GenerationOutcome outcome = generate_with_refinement(
      client, test_config(), PromptSet::bundled(), samples[0]);
  CHECK(client.calls.size() == 2);
  CHECK(outcome.refinement_used);
  CHECK(outcome.validation.valid);

  // second conversation replays the exchange and appends the refinement
  const auto& convo = client.calls[1];
  REQUIRE(convo.size() == 4);
  CHECK(convo[0].role == "system");
  CHECK(convo[1].role == "user");
  CHECK(convo[2].role == "assistant");
  CHECK(convo[2].content == bad);
  CHECK(convo[3].role == "user");
  CHECK(convo[3].content.find("DuplicateId:") != std::string::npos);
}

TEST_CASE("two invalid answers stop after the single refinement") {
  const std::string bad = read_fixture("invalid/too_few_empty.bpmn");
  ScriptedClient client;
  client.script = {ok_response(bad), ok_response(bad)};
  const auto samples = load_dataset(fixture_path("dataset"));

  const GenerationOutcome outcome = generate_with_refinement(
      client, test_config(), PromptSet::bundled(), samples[0]);
  CHECK(client.calls.size() == 2);
  CHECK(outcome.refinement_used);
  CHECK_FALSE(outcome.validation.valid);
}

TEST_CASE("transport failures are terminal") {
  ScriptedClient client;
  ChatResult failure;
  failure.error = "transport failure: connection refused";
  client.script = {failure};
  const auto samples = load_dataset(fixture_path("dataset"));

  const GenerationOutcome outcome = generate_with_refinement(
      client, test_config(), PromptSet::bundled(), samples[0]);
  CHECK(client.calls.size() == 1);  // no refinement after a dead connection
  CHECK_FALSE(outcome.validation.valid);
  CHECK_FALSE(outcome.refinement_used);
  REQUIRE_FALSE(outcome.errors.empty());
}

TEST_CASE("run records survive a json round trip") {
  const auto samples = load_dataset(fixture_path("dataset"));
  RunRecord record;
  record.llm = "mock-model";
  record.sample_id = "sample_a";
  record.run_index = 3;
  record.timestamp_utc = "2026-08-26T12:00:00Z";
  record.q_val = 1;
  record.refinement_used = true;
  record.scores = evaluate_sample(read_fixture("M1.bpmn"),
                                  samples[0].ground_truth,
                                  ThresholdTable::bundled(), SemanticConfig{});
  record.generate_ms = 1200;
  record.refine_ms = 300;
  record.evaluate_ms = 5;

  const std::string line = record.to_json_line();
  CHECK(line.find('\n') == std::string::npos);
  const RunRecord back = RunRecord::from_json_line(line);
  CHECK(back.llm == record.llm);
  CHECK(back.sample_id == record.sample_id);
  CHECK(back.run_index == record.run_index);
  CHECK(back.q_val == 1);
  CHECK(back.refinement_used);
  REQUIRE(back.scores.has_value());
  CHECK(back.scores->syn->q_syn == doctest::Approx(1.0));
  CHECK(back.scores->sem->q_sem == doctest::Approx(1.0));
  CHECK(back.scores->q_total == doctest::Approx(record.scores->q_total));
  CHECK(back.generate_ms == 1200);

  // invalid records serialize a null score block
  RunRecord invalid;
  invalid.llm = "mock-model";
  invalid.sample_id = "sample_b";
  invalid.run_index = 1;
  invalid.errors = {"Malformed: not well-formed XML at line 1"};
  const RunRecord invalid_back =
      RunRecord::from_json_line(invalid.to_json_line());
  CHECK(invalid_back.q_val == 0);
  CHECK_FALSE(invalid_back.scores.has_value());
  REQUIRE(invalid_back.errors.size() == 1);
}

TEST_CASE("benchmark produces ten uniquely keyed records and resumes") {
  const fs::path dir = scratch_dir("store");
  const std::string store_path = (dir / "records.jsonl").string();
  const auto samples = load_dataset(fixture_path("dataset"));
  const auto thresholds = ThresholdTable::bundled();
  const SemanticConfig semantic_config;
  const GenerationConfig config = test_config();

  auto fresh_client = [&] {
    ScriptedClient client;
    for (int i = 0; i < 10; ++i)
      client.script.push_back(ok_response(read_fixture("M1.bpmn")));
    return client;
  };

  {
    ScriptedClient client = fresh_client();
    RecordStore store(store_path);
    const auto appended =
        run_benchmark(client, config, PromptSet::bundled(), samples,
                      thresholds, semantic_config, store);
    CHECK(appended.size() == 10);  // 2 samples x 5 runs
    CHECK(client.calls.size() == 10);

    std::set<std::string> keys;
    for (const auto& r : store.records()) {
      keys.insert(r.llm + "/" + r.sample_id + "/" + std::to_string(r.run_index));
      CHECK(r.run_index >= 1);
      CHECK(r.run_index <= 5);
    }
    CHECK(keys.size() == 10);
  }

  // a full rerun finds every key present and adds nothing
  {
    ScriptedClient client = fresh_client();
    RecordStore store(store_path);
    const auto appended =
        run_benchmark(client, config, PromptSet::bundled(), samples,
                      thresholds, semantic_config, store);
    CHECK(appended.empty());
    CHECK(client.calls.empty());
    CHECK(store.records().size() == 10);
  }

  // drop the last three lines; a resume regenerates exactly those
  {
    std::vector<std::string> lines;
    std::ifstream in(store_path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    in.close();
    REQUIRE(lines.size() == 10);
    std::ofstream out(store_path, std::ios::trunc);
    for (std::size_t i = 0; i < 7; ++i) out << lines[i] << "\n";
    out.close();

    ScriptedClient client = fresh_client();
    RecordStore store(store_path);
    const auto appended =
        run_benchmark(client, config, PromptSet::bundled(), samples,
                      thresholds, semantic_config, store);
    CHECK(appended.size() == 3);
    CHECK(client.calls.size() == 3);
    CHECK(store.records().size() == 10);
  }

  // duplicate keys are refused outright
  {
    RecordStore store(store_path);
    RunRecord dup = store.records().front();
    CHECK_THROWS(store.append(dup));
  }
  fs::remove_all(dir);
}

TEST_CASE("http client speaks both chat protocols") {
  httplib::Server server;
  nlohmann::json last_ollama, last_openai;
  server.Post("/api/chat", [&](const httplib::Request& req,
                               httplib::Response& res) {
    last_ollama = nlohmann::json::parse(req.body);
    res.set_content(
        nlohmann::json{{"message", {{"role", "assistant"},
                                    {"content", "ollama says hi"}}}}
            .dump(),
        "application/json");
  });
  server.Post("/v1/chat/completions", [&](const httplib::Request& req,
                                          httplib::Response& res) {
    last_openai = nlohmann::json::parse(req.body);
    res.set_content(
        nlohmann::json{
            {"choices",
             {{{"message",
                {{"role", "assistant"}, {"content", "openai says hi"}}}}}}}
            .dump(),
        "application/json");
  });

  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  GenerationConfig config;
  config.endpoint_url = "http://127.0.0.1:" + std::to_string(port);
  config.model_name = "mock-model";
  config.temperature = 0.2;
  config.context_length = 2048;
  config.timeout_seconds = 10;

  const std::vector<ChatMessage> messages = {{"system", "be brief"},
                                             {"user", "model this"}};

  {
    config.api_profile = ApiProfile::OllamaChat;
    HttpChatClient client(config);
    const ChatResult result = client.chat(messages);
    CHECK(result.ok);
    CHECK(result.content == "ollama says hi");
    CHECK(last_ollama["model"] == "mock-model");
    CHECK(last_ollama["stream"] == false);
    CHECK(last_ollama["options"]["temperature"] == doctest::Approx(0.2));
    CHECK(last_ollama["options"]["num_ctx"] == 2048);
    REQUIRE(last_ollama["messages"].size() == 2);
    CHECK(last_ollama["messages"][0]["role"] == "system");
    CHECK(last_ollama["messages"][1]["content"] == "model this");
  }
  {
    config.api_profile = ApiProfile::OpenAiChat;
    HttpChatClient client(config);
    const ChatResult result = client.chat(messages);
    CHECK(result.ok);
    CHECK(result.content == "openai says hi");
    CHECK(last_openai["model"] == "mock-model");
    CHECK(last_openai["temperature"] == doctest::Approx(0.2));
    CHECK(last_openai["messages"].size() == 2);
  }

  server.stop();
  worker.join();
}

TEST_CASE("a stalled endpoint times out and marks the run invalid") {
  httplib::Server server;
  server.Post("/api/chat", [](const httplib::Request&, httplib::Response& res) {
    std::this_thread::sleep_for(std::chrono::seconds(3));
    res.set_content("{\"message\":{\"content\":\"late\"}}",
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  GenerationConfig config = test_config();
  config.endpoint_url = "http://127.0.0.1:" + std::to_string(port);
  config.timeout_seconds = 1;

  HttpChatClient client(config);
  const auto samples = load_dataset(fixture_path("dataset"));
  const GenerationOutcome outcome = generate_with_refinement(
      client, config, PromptSet::bundled(), samples[0]);
  CHECK(outcome.timed_out);
  CHECK_FALSE(outcome.validation.valid);
  CHECK_FALSE(outcome.refinement_used);  // no retry against a dead clock

  server.stop();
  worker.join();
}
