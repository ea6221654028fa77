#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bef {

// Blocks x treatments score matrix; a missing cell means the treatment
// produced no valid model for that block.
struct ScoreMatrix {
  std::vector<std::string> treatments;
  std::vector<std::vector<std::optional<double>>> blocks;
};

struct TestResult {
  double statistic = 0.0;
  int df = 0;        // Skillings-Mack only
  double p_value = 1.0;
  int n_pairs = 0;   // Wilcoxon only
};

struct DegenerateDesign : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooFewPairs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Skillings-Mack test for unbalanced incomplete block designs. Blocks
// with fewer than two observations are skipped. Throws DegenerateDesign
// when the treatment co-occurrence graph is disconnected. On complete
// data the statistic equals Friedman's.
TestResult skillings_mack(const ScoreMatrix& matrix);

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
// are dropped; exact enumeration for n <= 25, normal approximation with
// tie and continuity correction beyond. Throws TooFewPairs when nothing
// remains after the zero drop.
TestResult wilcoxon_signed_rank(
    const std::vector<std::pair<double, double>>& pairs);

// p_adj = min(m * p, 1) for each p. Requires m >= |p_values|.
std::vector<double> bonferroni(const std::vector<double>& p_values, int m);

struct Contrast {
  std::string better;
  std::string worse;
  double p_adj = 1.0;
  int n_pairs = 0;
  bool significant = false;  // p_adj <= alpha and the test ran
};

// All-pairs Wilcoxon over the matrix columns, Bonferroni-adjusted with
// m = number of pairs. Pairs where the test cannot run (no nonzero
// differences) are reported not significant with p_adj = 1.
std::vector<Contrast> pairwise_contrasts(const ScoreMatrix& matrix,
                                         double alpha = 0.05);

// Tail helpers, exposed for verification against reference values.
double chi_squared_upper_tail(double x, int df);
double normal_upper_tail(double z);

}  // namespace bef
