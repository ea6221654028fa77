#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bef4llm/pragmatic.hpp"
#include "bef4llm/semantic.hpp"
#include "bef4llm/syntactic.hpp"
#include "bef4llm/validity.hpp"

namespace bef {

// Full score sheet for one candidate model against its ground truth.
// Quality dimensions are present exactly when the candidate is valid.
struct SampleEvaluation {
  int q_val = 0;  // 0 or 1
  std::optional<SyntacticScores> syn;
  std::optional<PragmaticScores> prag;
  std::optional<SemanticScores> sem;
  std::optional<double> q_qual;
  double q_total = 0.0;
  std::vector<std::string> validity_errors;  // "Code: message" lines
};

double quality_score(double q_syn, double q_prag, double q_sem);
double total_score(double q_val, double q_syn, double q_prag, double q_sem);

// Validates the candidate, and when valid scores all three quality
// dimensions against the ground truth. Invalid candidates score 0 overall
// with the validation error lines attached.
SampleEvaluation evaluate_sample(const std::string& candidate_xml,
                                 const ProcessModel& truth,
                                 const ThresholdTable& thresholds,
                                 const SemanticConfig& semantic_config);

struct WrongRunCount : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Average valid BPMN models: mean of the per-run valid-generation counts.
// Throws WrongRunCount unless exactly `expected_runs` counts are given.
double avbm(const std::vector<int>& valid_per_run, int expected_runs = 5);

// Per-dimension means over all (sample, run) evaluations of one llm.
// Validity averages over every attempt; quality averages cover valid
// records only and are absent when there are none.
struct DimensionMeans {
  double q_val = 0.0;
  std::optional<double> q_syn;
  std::optional<double> q_prag;
  std::optional<double> q_sem;
  std::optional<double> q_qual;
  std::optional<double> q_total;
  double avbm = 0.0;
  bool excluded = false;  // avbm below the admission threshold
};

DimensionMeans mean_scores(const std::vector<SampleEvaluation>& records,
                           const std::vector<int>& valid_per_run,
                           double min_avbm = 30.0);

}  // namespace bef
