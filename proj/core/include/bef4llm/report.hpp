#pragma once

#include <map>
#include <string>
#include <vector>

#include "bef4llm/harness.hpp"
#include "bef4llm/scoring.hpp"
#include "bef4llm/stats.hpp"

namespace bef {

enum class ReportFormat { Csv, Markdown, Json };

struct LlmSummary {
  std::string llm;
  int attempts = 0;
  int valid = 0;
  DimensionMeans means;
};

// Per-llm aggregates derived strictly from stored records.
std::vector<LlmSummary> summarize(const std::vector<RunRecord>& records,
                                  double min_avbm = 30.0);

// Blocks = (sample_id, run_index) units, columns = llms that pass the
// AVBM gate, cells = the chosen dimension score of valid records.
// `dimension` is one of "syntactic", "pragmatic", "semantic".
ScoreMatrix score_matrix(const std::vector<RunRecord>& records,
                         const std::string& dimension,
                         double min_avbm = 30.0);

// Mean of each individual metric (S1.., P1.., SEM1..) over the valid
// records of each llm. Outer key: llm, inner key: metric id.
std::map<std::string, std::map<std::string, double>> metric_means(
    const std::vector<RunRecord>& records, const std::string& dimension);

std::string render_summary(const std::vector<LlmSummary>& summaries,
                           ReportFormat format);
std::string render_metric_table(
    const std::map<std::string, std::map<std::string, double>>& table,
    ReportFormat format);
std::string render_contrasts(const std::vector<Contrast>& contrasts,
                             ReportFormat format);

}  // namespace bef
