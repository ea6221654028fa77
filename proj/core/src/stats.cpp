#include "bef4llm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

namespace bef {

namespace {

// Average ranks (1-based) with ties sharing the mean rank.
std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
    i = j + 1;
  }
  return ranks;
}

bool co_occurrence_connected(const Eigen::MatrixXd& lambda) {
  const int k = static_cast<int>(lambda.rows());
  if (k == 0) return false;
  std::vector<char> seen(k, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v = 0; v < k; ++v) {
      if (!seen[v] && lambda(u, v) > 0) {
        seen[v] = 1;
        stack.push_back(v);
        ++count;
      }
    }
  }
  return count == k;
}

}  // namespace

double chi_squared_upper_tail(double x, int df) {
  if (x <= 0.0) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(df));
  return boost::math::cdf(boost::math::complement(dist, x));
}

double normal_upper_tail(double z) {
  boost::math::normal dist;
  return boost::math::cdf(boost::math::complement(dist, z));
}

TestResult skillings_mack(const ScoreMatrix& matrix) {
  const int k = static_cast<int>(matrix.treatments.size());
  if (k < 2) throw DegenerateDesign("need at least two treatments");

  Eigen::VectorXd a = Eigen::VectorXd::Zero(k);
  Eigen::MatrixXd lambda = Eigen::MatrixXd::Zero(k, k);

  for (const auto& block : matrix.blocks) {
    std::vector<int> observed;
    std::vector<double> values;
    for (int j = 0; j < k; ++j) {
      if (j < static_cast<int>(block.size()) && block[j]) {
        observed.push_back(j);
        values.push_back(*block[j]);
      }
    }
    const int ki = static_cast<int>(observed.size());
    if (ki < 2) continue;  // uninformative block
    const auto ranks = average_ranks(values);
    const double scale = std::sqrt(12.0 / (ki + 1));
    for (int idx = 0; idx < ki; ++idx) {
      a(observed[idx]) += scale * (ranks[idx] - (ki + 1) / 2.0);
    }
    for (int x = 0; x < ki; ++x)
      for (int y = x + 1; y < ki; ++y) {
        lambda(observed[x], observed[y]) += 1.0;
        lambda(observed[y], observed[x]) += 1.0;
      }
  }

  if (!co_occurrence_connected(lambda))
    throw DegenerateDesign("treatment co-occurrence graph is disconnected");

  Eigen::MatrixXd sigma = -lambda;
  for (int j = 0; j < k; ++j) sigma(j, j) = lambda.row(j).sum();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sigma);
  const Eigen::VectorXd& eigenvalues = solver.eigenvalues();
  const Eigen::MatrixXd& vectors = solver.eigenvectors();
  const double cutoff = 1e-10 * eigenvalues.cwiseAbs().maxCoeff();

  double statistic = 0.0;
  int rank = 0;
  const Eigen::VectorXd projected = vectors.transpose() * a;
  for (int j = 0; j < k; ++j) {
    if (eigenvalues(j) > cutoff) {
      statistic += projected(j) * projected(j) / eigenvalues(j);
      ++rank;
    }
  }

  TestResult result;
  result.statistic = statistic;
  result.df = rank;
  result.p_value = rank > 0 ? chi_squared_upper_tail(statistic, rank) : 1.0;
  return result;
}

TestResult wilcoxon_signed_rank(
    const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> diffs;
  for (const auto& [x, y] : pairs) {
    const double d = x - y;
    if (d != 0.0) diffs.push_back(d);
  }
  const int n = static_cast<int>(diffs.size());
  if (n < 1) throw TooFewPairs("no nonzero differences");

  std::vector<double> abs_diffs(diffs.size());
  std::transform(diffs.begin(), diffs.end(), abs_diffs.begin(),
                 [](double d) { return std::fabs(d); });
  const auto ranks = average_ranks(abs_diffs);

  double w_plus = 0.0;
  for (int i = 0; i < n; ++i)
    if (diffs[i] > 0.0) w_plus += ranks[i];
  const double total = n * (n + 1) / 2.0;
  const double w_minus = total - w_plus;
  const double w = std::min(w_plus, w_minus);

  TestResult result;
  result.statistic = w;
  result.n_pairs = n;

  if (n <= 25) {
    // Exact null distribution of W+ over sign assignments. Average ranks
    // are half-integers, so doubling gives exact integer weights.
    std::vector<int> doubled(n);
    for (int i = 0; i < n; ++i)
      doubled[i] = static_cast<int>(std::llround(2.0 * ranks[i]));
    const int max_sum = std::accumulate(doubled.begin(), doubled.end(), 0);
    std::vector<double> count(max_sum + 1, 0.0);
    count[0] = 1.0;
    for (const int r : doubled)
      for (int s = max_sum; s >= r; --s) count[s] += count[s - r];
    const double denom = std::pow(2.0, n);
    const int w2 = static_cast<int>(std::llround(2.0 * w));
    double tail = 0.0;
    for (int s = 0; s <= std::min(w2, max_sum); ++s) tail += count[s];
    result.p_value = std::min(1.0, 2.0 * tail / denom);
  } else {
    const double mean = total / 2.0;
    std::map<double, int> tie_groups;
    for (const double r : abs_diffs) ++tie_groups[r];
    double tie_term = 0.0;
    for (const auto& [_, t] : tie_groups)
      tie_term += static_cast<double>(t) * t * t - t;
    const double variance =
        n * (n + 1) * (2.0 * n + 1) / 24.0 - tie_term / 48.0;
    // W = min(W+, W-) sits in the lower tail; continuity-correct toward
    // the mean and double the one-sided probability.
    const double z = (w - mean + 0.5) / std::sqrt(variance);
    result.p_value = std::min(1.0, 2.0 * normal_upper_tail(-z));
  }
  return result;
}

std::vector<double> bonferroni(const std::vector<double>& p_values, int m) {
  if (m < static_cast<int>(p_values.size()))
    throw std::invalid_argument("m must cover every p-value");
  std::vector<double> out;
  out.reserve(p_values.size());
  for (const double p : p_values) out.push_back(std::min(m * p, 1.0));
  return out;
}

std::vector<Contrast> pairwise_contrasts(const ScoreMatrix& matrix,
                                         double alpha) {
  const int k = static_cast<int>(matrix.treatments.size());
  std::vector<Contrast> out;
  const int m = k * (k - 1) / 2;
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      std::vector<std::pair<double, double>> pairs;
      double sum_a = 0.0, sum_b = 0.0;
      for (const auto& block : matrix.blocks) {
        if (a < static_cast<int>(block.size()) &&
            b < static_cast<int>(block.size()) && block[a] && block[b]) {
          pairs.emplace_back(*block[a], *block[b]);
          sum_a += *block[a];
          sum_b += *block[b];
        }
      }
      Contrast contrast;
      const bool a_better = sum_a >= sum_b;
      contrast.better = matrix.treatments[a_better ? a : b];
      contrast.worse = matrix.treatments[a_better ? b : a];
      contrast.n_pairs = static_cast<int>(pairs.size());
      try {
        const TestResult test = wilcoxon_signed_rank(pairs);
        contrast.n_pairs = test.n_pairs;
        contrast.p_adj = std::min(m * test.p_value, 1.0);
        contrast.significant = contrast.p_adj <= alpha;
      } catch (const TooFewPairs&) {
        contrast.p_adj = 1.0;
        contrast.significant = false;
      }
      out.push_back(contrast);
    }
  }
  return out;
}

}  // namespace bef
