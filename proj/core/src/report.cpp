#include "bef4llm/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

namespace bef {

using nlohmann::json;

namespace {

std::string format_number(double value) {
  std::ostringstream out;
  out.precision(4);
  out << std::fixed << value;
  return out.str();
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (const char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

double dimension_score(const RunRecord& record, const std::string& dimension) {
  const SampleEvaluation& eval = *record.scores;
  if (dimension == "syntactic") return eval.syn->q_syn;
  if (dimension == "pragmatic") return eval.prag->q_prag;
  if (dimension == "semantic") return eval.sem->q_sem;
  throw std::invalid_argument("unknown dimension \"" + dimension + "\"");
}

const std::map<std::string, double>& dimension_metrics(
    const RunRecord& record, const std::string& dimension) {
  const SampleEvaluation& eval = *record.scores;
  if (dimension == "syntactic") return eval.syn->scores;
  if (dimension == "pragmatic") return eval.prag->normalized;
  if (dimension == "semantic") return eval.sem->scores;
  throw std::invalid_argument("unknown dimension \"" + dimension + "\"");
}

// Metric-id order: dimension prefix then numeric suffix, so S2 < S10.
bool metric_id_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& id) {
    std::size_t i = 0;
    while (i < id.size() && !std::isdigit(static_cast<unsigned char>(id[i])))
      ++i;
    const int n = i < id.size() ? std::stoi(id.substr(i)) : 0;
    return std::make_pair(id.substr(0, i), n);
  };
  return split(a) < split(b);
}

}  // namespace

std::vector<LlmSummary> summarize(const std::vector<RunRecord>& records,
                                  double min_avbm) {
  std::map<std::string, std::vector<const RunRecord*>> by_llm;
  for (const auto& record : records) by_llm[record.llm].push_back(&record);

  std::vector<LlmSummary> out;
  for (const auto& [llm, rows] : by_llm) {
    LlmSummary summary;
    summary.llm = llm;
    summary.attempts = static_cast<int>(rows.size());

    std::map<int, int> valid_by_run;
    std::set<int> runs;
    std::vector<SampleEvaluation> evals;
    for (const auto* record : rows) {
      runs.insert(record->run_index);
      valid_by_run[record->run_index] += record->q_val;
      summary.valid += record->q_val;
      SampleEvaluation eval;
      if (record->scores) {
        eval = *record->scores;
      } else {
        eval.q_val = record->q_val;
      }
      evals.push_back(std::move(eval));
    }
    std::vector<int> valid_per_run;
    for (const int run : runs) valid_per_run.push_back(valid_by_run[run]);
    summary.means = mean_scores(evals, valid_per_run, min_avbm);
    out.push_back(std::move(summary));
  }
  return out;
}

ScoreMatrix score_matrix(const std::vector<RunRecord>& records,
                         const std::string& dimension, double min_avbm) {
  std::set<std::string> admitted;
  for (const auto& summary : summarize(records, min_avbm))
    if (!summary.means.excluded) admitted.insert(summary.llm);

  ScoreMatrix matrix;
  matrix.treatments.assign(admitted.begin(), admitted.end());
  std::map<std::string, int> column;
  for (std::size_t j = 0; j < matrix.treatments.size(); ++j)
    column[matrix.treatments[j]] = static_cast<int>(j);

  std::map<std::pair<std::string, int>,
           std::vector<std::optional<double>>> blocks;
  for (const auto& record : records) {
    const auto it = column.find(record.llm);
    if (it == column.end()) continue;
    auto& block = blocks[{record.sample_id, record.run_index}];
    block.resize(matrix.treatments.size());
    if (record.q_val == 1 && record.scores)
      block[it->second] = dimension_score(record, dimension);
  }
  for (auto& [_, block] : blocks) matrix.blocks.push_back(std::move(block));
  return matrix;
}

std::map<std::string, std::map<std::string, double>> metric_means(
    const std::vector<RunRecord>& records, const std::string& dimension) {
  std::map<std::string, std::map<std::string, double>> sums;
  std::map<std::string, int> counts;
  for (const auto& record : records) {
    if (record.q_val != 1 || !record.scores) continue;
    ++counts[record.llm];
    for (const auto& [metric, value] : dimension_metrics(record, dimension))
      sums[record.llm][metric] += value;
  }
  for (auto& [llm, metrics] : sums)
    for (auto& [_, value] : metrics) value /= counts[llm];
  return sums;
}

std::string render_summary(const std::vector<LlmSummary>& summaries,
                           ReportFormat format) {
  const std::vector<std::string> header = {
      "llm",    "attempts", "q_val",  "avbm",   "q_syn",    "q_prag",
      "q_sem",  "q_qual",   "q_total", "excluded"};
  auto row_fields = [](const LlmSummary& s) {
    auto opt = [](const std::optional<double>& v) {
      return v ? format_number(*v) : std::string("-");
    };
    return std::vector<std::string>{
        s.llm,
        std::to_string(s.attempts),
        format_number(s.means.q_val),
        format_number(s.means.avbm),
        opt(s.means.q_syn),
        opt(s.means.q_prag),
        opt(s.means.q_sem),
        opt(s.means.q_qual),
        opt(s.means.q_total),
        s.means.excluded ? "yes" : "no"};
  };

  if (format == ReportFormat::Json) {
    json out = json::array();
    for (const auto& s : summaries) {
      json row;
      row["llm"] = s.llm;
      row["attempts"] = s.attempts;
      row["q_val"] = s.means.q_val;
      row["avbm"] = s.means.avbm;
      auto set_opt = [&](const char* key, const std::optional<double>& v) {
        if (v)
          row[key] = *v;
        else
          row[key] = nullptr;
      };
      set_opt("q_syn", s.means.q_syn);
      set_opt("q_prag", s.means.q_prag);
      set_opt("q_sem", s.means.q_sem);
      set_opt("q_qual", s.means.q_qual);
      set_opt("q_total", s.means.q_total);
      row["excluded"] = s.means.excluded;
      out.push_back(row);
    }
    return out.dump(2) + "\n";
  }

  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    for (std::size_t i = 0; i < header.size(); ++i)
      out << (i ? "," : "") << csv_quote(header[i]);
    out << "\r\n";
    for (const auto& s : summaries) {
      const auto fields = row_fields(s);
      for (std::size_t i = 0; i < fields.size(); ++i)
        out << (i ? "," : "") << csv_quote(fields[i]);
      out << "\r\n";
    }
    return out.str();
  }

  out << "|";
  for (const auto& h : header) out << " " << h << " |";
  out << "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out << " --- |";
  out << "\n";
  for (const auto& s : summaries) {
    out << "|";
    for (const auto& field : row_fields(s)) out << " " << field << " |";
    out << "\n";
  }
  return out.str();
}

std::string render_metric_table(
    const std::map<std::string, std::map<std::string, double>>& table,
    ReportFormat format) {
  std::set<std::string, bool (*)(const std::string&, const std::string&)>
      metrics(metric_id_less);
  for (const auto& [_, row] : table)
    for (const auto& [metric, __] : row) metrics.insert(metric);

  if (format == ReportFormat::Json) {
    json out;
    for (const auto& [llm, row] : table) out[llm] = row;
    return out.dump(2) + "\n";
  }

  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "llm";
    for (const auto& metric : metrics) out << "," << csv_quote(metric);
    out << "\r\n";
    for (const auto& [llm, row] : table) {
      out << csv_quote(llm);
      for (const auto& metric : metrics) {
        const auto it = row.find(metric);
        out << "," << (it != row.end() ? format_number(it->second) : "-");
      }
      out << "\r\n";
    }
    return out.str();
  }

  out << "| llm |";
  for (const auto& metric : metrics) out << " " << metric << " |";
  out << "\n| --- |";
  for (std::size_t i = 0; i < metrics.size(); ++i) out << " --- |";
  out << "\n";
  for (const auto& [llm, row] : table) {
    out << "| " << llm << " |";
    for (const auto& metric : metrics) {
      const auto it = row.find(metric);
      out << " " << (it != row.end() ? format_number(it->second) : "-")
          << " |";
    }
    out << "\n";
  }
  return out.str();
}

std::string render_contrasts(const std::vector<Contrast>& contrasts,
                             ReportFormat format) {
  std::vector<Contrast> sorted = contrasts;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Contrast& a, const Contrast& b) {
                     return a.p_adj < b.p_adj;
                   });

  if (format == ReportFormat::Json) {
    json out = json::array();
    for (const auto& c : sorted)
      out.push_back({{"better", c.better},
                     {"worse", c.worse},
                     {"p_adj", c.p_adj},
                     {"n_pairs", c.n_pairs},
                     {"significant", c.significant}});
    return out.dump(2) + "\n";
  }

  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "better,worse,p_adj,n_pairs,significant\r\n";
    for (const auto& c : sorted)
      out << csv_quote(c.better) << "," << csv_quote(c.worse) << ","
          << format_number(c.p_adj) << "," << c.n_pairs << ","
          << (c.significant ? "yes" : "n.s.") << "\r\n";
    return out.str();
  }

  out << "| better | worse | p_adj | n_pairs | significant |\n"
      << "| --- | --- | --- | --- | --- |\n";
  for (const auto& c : sorted)
    out << "| " << c.better << " | " << c.worse << " | "
        << format_number(c.p_adj) << " | " << c.n_pairs << " | "
        << (c.significant ? "yes" : "n.s.") << " |\n";
  return out.str();
}

}  // namespace bef
