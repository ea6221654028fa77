#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "bef4llm/harness.hpp"
#include "bef4llm/model.hpp"
#include "bef4llm/report.hpp"
#include "bef4llm/scoring.hpp"
#include "bef4llm/stats.hpp"
#include "bef4llm/validity.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidCandidate = 1;
constexpr int kExitUsage = 2;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bef::ThresholdTable load_thresholds(const std::string& override_path) {
  if (override_path.empty()) return bef::ThresholdTable::bundled();
  return bef::ThresholdTable::load(override_path);
}

bef::SemanticConfig load_semantic_config(const std::string& synonyms_path) {
  bef::SemanticConfig config;
  if (!synonyms_path.empty())
    config.lexicon = bef::SynonymLexicon::load(synonyms_path);
  return config;
}

bef::ReportFormat parse_format(const std::string& name) {
  if (name == "csv") return bef::ReportFormat::Csv;
  if (name == "md") return bef::ReportFormat::Markdown;
  return bef::ReportFormat::Json;
}

void print_metric_table(std::ostream& out, const std::string& title,
                        const std::map<std::string, double>& scores,
                        double mean, const std::string& mean_label) {
  out << title << "\n";
  for (const auto& [metric, value] : scores) {
    std::ostringstream line;
    line.precision(4);
    line << std::fixed << "  " << metric << " = " << value;
    out << line.str() << "\n";
  }
  std::ostringstream line;
  line.precision(4);
  line << std::fixed << "  " << mean_label << " = " << mean;
  out << line.str() << "\n";
}

json scores_json(const bef::SampleEvaluation& eval, bool has_truth) {
  json s;
  for (const auto& [k, v] : eval.syn->scores) s["syn"][k] = v;
  s["syn"]["q_syn"] = eval.syn->q_syn;
  for (const auto& [k, v] : eval.prag->normalized) s["prag"][k] = v;
  s["prag"]["q_prag"] = eval.prag->q_prag;
  if (has_truth) {
    for (const auto& [k, v] : eval.sem->scores) s["sem"][k] = v;
    s["sem"]["q_sem"] = eval.sem->q_sem;
    s["q_qual"] = *eval.q_qual;
    s["q_total"] = eval.q_total;
  } else {
    for (const char* key :
         {"SEM1", "SEM2", "SEM3", "SEM4", "SEM5", "SEM6", "SEM7", "q_sem"})
      s["sem"][key] = nullptr;
    s["q_qual"] = nullptr;
    s["q_total"] = nullptr;
  }
  return s;
}

int run_evaluate(const std::string& candidate_path,
                 const std::string& truth_path, bool as_json,
                 const std::string& thresholds_path,
                 const std::string& synonyms_path) {
  const auto candidate_xml = read_file(candidate_path);
  if (!candidate_xml) {
    std::cerr << "error: cannot read " << candidate_path << "\n";
    return kExitUsage;
  }

  bef::ThresholdTable thresholds;
  bef::SemanticConfig semantic_config;
  try {
    thresholds = load_thresholds(thresholds_path);
    semantic_config = load_semantic_config(synonyms_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const bef::ValidationReport report = bef::validate(*candidate_xml);
  if (!report.valid) {
    if (as_json) {
      json out;
      out["q_val"] = 0;
      out["scores"] = nullptr;
      out["errors"] = report.error_lines();
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "invalid\n";
      for (const auto& line : report.error_lines())
        std::cout << "  " << line << "\n";
    }
    return kExitInvalidCandidate;
  }

  const bool has_truth = !truth_path.empty();
  bef::ProcessModel truth;
  if (has_truth) {
    const auto truth_xml = read_file(truth_path);
    if (!truth_xml) {
      std::cerr << "error: cannot read " << truth_path << "\n";
      return kExitUsage;
    }
    const bef::ValidationReport truth_report = bef::validate(*truth_xml);
    if (!truth_report.valid) {
      std::cerr << "error: truth model is invalid\n";
      for (const auto& line : truth_report.error_lines())
        std::cerr << "  " << line << "\n";
      return kExitUsage;
    }
    truth = bef::parse_model(*truth_xml);
  }

  const bef::ProcessModel candidate = bef::parse_model(*candidate_xml);
  bef::SampleEvaluation eval;
  eval.q_val = 1;
  eval.syn = bef::syntactic_dimension(candidate);
  eval.prag = bef::pragmatic_dimension(candidate, thresholds);
  if (has_truth) {
    eval.sem = bef::semantic_dimension(candidate, truth, semantic_config);
    eval.q_qual = bef::quality_score(eval.syn->q_syn, eval.prag->q_prag,
                                     eval.sem->q_sem);
    eval.q_total = bef::total_score(1.0, eval.syn->q_syn, eval.prag->q_prag,
                                    eval.sem->q_sem);
  }

  if (as_json) {
    json out;
    out["q_val"] = 1;
    out["scores"] = scores_json(eval, has_truth);
    out["errors"] = json::array();
    std::cout << out.dump(2) << "\n";
    return kExitOk;
  }

  std::cout << "valid\n";
  print_metric_table(std::cout, "syntactic", eval.syn->scores,
                     eval.syn->q_syn, "q_syn");
  print_metric_table(std::cout, "pragmatic", eval.prag->normalized,
                     eval.prag->q_prag, "q_prag");
  if (has_truth) {
    print_metric_table(std::cout, "semantic", eval.sem->scores,
                       eval.sem->q_sem, "q_sem");
    std::ostringstream line;
    line.precision(4);
    line << std::fixed << "q_qual = " << *eval.q_qual
         << "\nq_total = " << eval.q_total;
    std::cout << line.str() << "\n";
  }
  return kExitOk;
}

std::map<std::string, std::string> parse_config_file(
    const std::string& path) {
  const auto text = read_file(path);
  if (!text) throw std::runtime_error("cannot read config " + path);
  std::map<std::string, std::string> values;
  std::istringstream stream(*text);
  std::string line;
  while (std::getline(stream, line)) {
    const std::size_t comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto begin = s.find_first_not_of(" \t\r");
      const auto end = s.find_last_not_of(" \t\r");
      return begin == std::string::npos ? std::string()
                                        : s.substr(begin, end - begin + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) values[key] = value;
  }
  return values;
}

int run_benchmark_cmd(const std::string& config_path,
                      const std::string& dataset_dir,
                      const std::string& out_dir,
                      const std::string& endpoint_override,
                      const std::string& model_override, int runs_override,
                      double temperature_override, int timeout_override,
                      const std::string& thresholds_path,
                      const std::string& synonyms_path) {
  bef::GenerationConfig config;
  std::string prompts_dir;
  try {
    if (!config_path.empty()) {
      const auto values = parse_config_file(config_path);
      auto get = [&](const char* key) -> std::optional<std::string> {
        const auto it = values.find(key);
        if (it == values.end()) return std::nullopt;
        return it->second;
      };
      if (const auto v = get("endpoint")) config.endpoint_url = *v;
      if (const auto v = get("model")) config.model_name = *v;
      if (const auto v = get("api_profile")) {
        if (*v == "openai-chat")
          config.api_profile = bef::ApiProfile::OpenAiChat;
        else if (*v == "ollama-chat")
          config.api_profile = bef::ApiProfile::OllamaChat;
        else
          throw std::runtime_error("unknown api_profile \"" + *v + "\"");
      }
      if (const auto v = get("temperature")) config.temperature = std::stod(*v);
      if (const auto v = get("context_length"))
        config.context_length = std::stoi(*v);
      if (const auto v = get("timeout_seconds"))
        config.timeout_seconds = std::stoi(*v);
      if (const auto v = get("runs")) config.runs = std::stoi(*v);
      if (const auto v = get("max_refinements"))
        config.max_refinements = std::stoi(*v);
      if (const auto v = get("api_key")) config.api_key = *v;
      if (const auto v = get("prompts")) prompts_dir = *v;
    }
    if (!endpoint_override.empty()) config.endpoint_url = endpoint_override;
    if (!model_override.empty()) config.model_name = model_override;
    if (runs_override > 0) config.runs = runs_override;
    if (temperature_override >= 0.0) config.temperature = temperature_override;
    if (timeout_override > 0) config.timeout_seconds = timeout_override;

    if (config.endpoint_url.empty())
      throw std::runtime_error("no endpoint configured");
    if (config.model_name.empty())
      throw std::runtime_error("no model configured");
    if (dataset_dir.empty()) throw std::runtime_error("no dataset given");

    const auto dataset = bef::load_dataset(dataset_dir);
    const auto thresholds = load_thresholds(thresholds_path);
    const auto semantic_config = load_semantic_config(synonyms_path);
    const bef::PromptSet prompts = prompts_dir.empty()
                                       ? bef::PromptSet::bundled()
                                       : bef::PromptSet::load(prompts_dir);

    fs::create_directories(out_dir);
    bef::RecordStore store((fs::path(out_dir) / "records.jsonl").string());
    bef::HttpChatClient client(config);
    bef::run_benchmark(client, config, prompts, dataset, thresholds,
                       semantic_config, store,
                       [](const bef::RunRecord& record) {
                         std::cout << record.llm << " " << record.sample_id
                                   << " run " << record.run_index
                                   << " q_val=" << record.q_val << "\n";
                       });

    const auto summaries = bef::summarize(store.records());
    std::ofstream summary((fs::path(out_dir) / "summary.md").string());
    summary << bef::render_summary(summaries, bef::ReportFormat::Markdown);
    std::cout << bef::render_summary(summaries, bef::ReportFormat::Markdown);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

std::vector<bef::RunRecord> load_records(const std::string& path) {
  const auto text = read_file(path);
  if (!text) throw std::runtime_error("cannot read records " + path);
  std::vector<bef::RunRecord> records;
  std::istringstream stream(*text);
  std::string line;
  while (std::getline(stream, line))
    if (!line.empty())
      records.push_back(bef::RunRecord::from_json_line(line));
  return records;
}

int run_stats(const std::string& records_path, const std::string& dimension,
              double min_avbm, const std::string& format_name) {
  try {
    const auto records = load_records(records_path);
    const bef::ScoreMatrix matrix =
        bef::score_matrix(records, dimension, min_avbm);
    if (matrix.treatments.size() < 2)
      throw std::runtime_error(
          "need at least two llms after the AVBM filter");
    const bef::TestResult global = bef::skillings_mack(matrix);
    std::ostringstream line;
    line.precision(6);
    line << std::fixed << "global T = " << global.statistic
         << ", df = " << global.df << ", p = " << global.p_value;
    std::cout << line.str() << "\n";
    const auto contrasts = bef::pairwise_contrasts(matrix);
    std::cout << bef::render_contrasts(contrasts,
                                       parse_format(format_name));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int run_report(const std::string& records_path,
               const std::string& format_name, const std::string& out_dir,
               double min_avbm) {
  try {
    const auto records = load_records(records_path);
    if (records.empty()) throw std::runtime_error("no records to report");
    const bef::ReportFormat format = parse_format(format_name);
    const char* extension = format == bef::ReportFormat::Csv    ? ".csv"
                            : format == bef::ReportFormat::Json ? ".json"
                                                                : ".md";

    const std::string summary =
        bef::render_summary(bef::summarize(records, min_avbm), format);
    std::map<std::string, std::string> tables;
    for (const char* dimension : {"syntactic", "pragmatic", "semantic"})
      tables[dimension] = bef::render_metric_table(
          bef::metric_means(records, dimension), format);

    if (out_dir.empty()) {
      std::cout << summary;
      for (const auto& [dimension, table] : tables)
        std::cout << "\n" << dimension << "\n" << table;
    } else {
      fs::create_directories(out_dir);
      std::ofstream((fs::path(out_dir) / ("summary" + std::string(extension)))
                        .string())
          << summary;
      for (const auto& [dimension, table] : tables)
        std::ofstream(
            (fs::path(out_dir) / (dimension + std::string(extension)))
                .string())
            << table;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BPMN model quality scoring and LLM benchmarking"};
  app.require_subcommand(1);

  std::string candidate_path, truth_path, thresholds_path, synonyms_path;
  bool as_json = false;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score one BPMN file, optionally against a ground truth");
  evaluate->add_option("candidate", candidate_path)->required();
  evaluate->add_option("--truth", truth_path);
  evaluate->add_flag("--json", as_json);
  evaluate->add_option("--thresholds", thresholds_path);
  evaluate->add_option("--synonyms", synonyms_path);

  std::string config_path, dataset_dir, out_dir, endpoint_override,
      model_override;
  int runs_override = 0, timeout_override = 0;
  double temperature_override = -1.0;
  auto* benchmark = app.add_subcommand(
      "benchmark", "Run the generation benchmark against an endpoint");
  benchmark->add_option("--config", config_path);
  benchmark->add_option("--dataset", dataset_dir)->required();
  benchmark->add_option("--out", out_dir)->required();
  benchmark->add_option("--endpoint", endpoint_override);
  benchmark->add_option("--model", model_override);
  benchmark->add_option("--runs", runs_override);
  benchmark->add_option("--temperature", temperature_override);
  benchmark->add_option("--timeout-seconds", timeout_override);
  benchmark->add_option("--thresholds", thresholds_path);
  benchmark->add_option("--synonyms", synonyms_path);

  std::string records_path, dimension = "syntactic", format_name = "md";
  double min_avbm = 30.0;
  auto* stats = app.add_subcommand(
      "stats", "Global and pairwise tests over stored records");
  stats->add_option("records", records_path)->required();
  stats->add_option("--dimension", dimension)
      ->check(CLI::IsMember({"syntactic", "pragmatic", "semantic"}));
  stats->add_option("--min-avbm", min_avbm);
  stats->add_option("--format", format_name)
      ->check(CLI::IsMember({"csv", "md", "json"}));

  auto* report =
      app.add_subcommand("report", "Emit summary tables from stored records");
  report->add_option("records", records_path)->required();
  report->add_option("--format", format_name)
      ->check(CLI::IsMember({"csv", "md", "json"}));
  report->add_option("--out", out_dir);
  report->add_option("--min-avbm", min_avbm);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (evaluate->parsed())
    return run_evaluate(candidate_path, truth_path, as_json, thresholds_path,
                        synonyms_path);
  if (benchmark->parsed())
    return run_benchmark_cmd(config_path, dataset_dir, out_dir,
                             endpoint_override, model_override, runs_override,
                             temperature_override, timeout_override,
                             thresholds_path, synonyms_path);
  if (stats->parsed())
    return run_stats(records_path, dimension, min_avbm, format_name);
  return run_report(records_path, format_name, out_dir, min_avbm);
}
