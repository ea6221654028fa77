#include "bef4llm/scoring.hpp"

#include <numeric>

namespace bef {

double quality_score(double q_syn, double q_prag, double q_sem) {
  return (q_syn + q_prag + q_sem) / 3.0;
}

double total_score(double q_val, double q_syn, double q_prag, double q_sem) {
  return (q_val + q_syn + q_prag + q_sem) / 4.0;
}

SampleEvaluation evaluate_sample(const std::string& candidate_xml,
                                 const ProcessModel& truth,
                                 const ThresholdTable& thresholds,
                                 const SemanticConfig& semantic_config) {
  SampleEvaluation out;
  const ValidationReport report = validate(candidate_xml);
  out.validity_errors = report.error_lines();
  if (!report.valid) return out;  // q_val 0, no quality scores

  out.q_val = 1;
  const ProcessModel candidate = parse_model(candidate_xml);
  out.syn = syntactic_dimension(candidate);
  out.prag = pragmatic_dimension(candidate, thresholds);
  out.sem = semantic_dimension(candidate, truth, semantic_config);
  out.q_qual =
      quality_score(out.syn->q_syn, out.prag->q_prag, out.sem->q_sem);
  out.q_total =
      total_score(1, out.syn->q_syn, out.prag->q_prag, out.sem->q_sem);
  return out;
}

double avbm(const std::vector<int>& valid_per_run, int expected_runs) {
  if (static_cast<int>(valid_per_run.size()) != expected_runs)
    throw WrongRunCount("expected " + std::to_string(expected_runs) +
                        " run counts, got " +
                        std::to_string(valid_per_run.size()));
  const double sum = std::accumulate(valid_per_run.begin(),
                                     valid_per_run.end(), 0.0);
  return sum / static_cast<double>(expected_runs);
}

DimensionMeans mean_scores(const std::vector<SampleEvaluation>& records,
                           const std::vector<int>& valid_per_run,
                           double min_avbm) {
  DimensionMeans out;
  if (!valid_per_run.empty()) {
    out.avbm = avbm(valid_per_run, static_cast<int>(valid_per_run.size()));
    out.excluded = out.avbm < min_avbm;
  }
  if (records.empty()) return out;

  double val_sum = 0.0;
  double syn = 0.0, prag = 0.0, sem = 0.0, qual = 0.0, total = 0.0;
  int valid = 0;
  for (const auto& rec : records) {
    val_sum += rec.q_val;
    if (rec.q_val != 1) continue;
    ++valid;
    syn += rec.syn->q_syn;
    prag += rec.prag->q_prag;
    sem += rec.sem->q_sem;
    qual += *rec.q_qual;
    total += rec.q_total;
  }
  out.q_val = val_sum / static_cast<double>(records.size());
  if (valid > 0) {
    out.q_syn = syn / valid;
    out.q_prag = prag / valid;
    out.q_sem = sem / valid;
    out.q_qual = qual / valid;
    out.q_total = total / valid;
  }
  return out;
}

}  // namespace bef
