#include "bef4llm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bef {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Square min-cost assignment (Jonker-Volgenant style shortest augmenting
// paths with potentials). Returns col index per row.
std::vector<int> assign_min_cost(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] >= 1) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Max total weight achievable when rows in `row_skip` / cols in `col_skip`
// are excluded; disallowed pairs count as unmatched (weight 0).
double best_total(const std::vector<std::vector<double>>& weights,
                  double cutoff, const std::vector<char>& row_skip,
                  const std::vector<char>& col_skip) {
  std::vector<int> rows, cols;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i)
    if (!row_skip[i]) rows.push_back(i);
  const int m = weights.empty() ? 0 : static_cast<int>(weights[0].size());
  for (int j = 0; j < m; ++j)
    if (!col_skip[j]) cols.push_back(j);
  const int n = static_cast<int>(std::max(rows.size(), cols.size()));
  if (n == 0) return 0.0;
  std::vector<std::vector<double>> cost(n, std::vector<double>(n, 0.0));
  for (int a = 0; a < static_cast<int>(rows.size()); ++a) {
    for (int b = 0; b < static_cast<int>(cols.size()); ++b) {
      const double w = weights[rows[a]][cols[b]];
      if (w >= cutoff) cost[a][b] = -w;
    }
  }
  const auto assignment = assign_min_cost(cost);
  double total = 0.0;
  for (int a = 0; a < n; ++a)
    if (assignment[a] >= 0) total -= cost[a][assignment[a]];
  return total;
}

}  // namespace

Matching max_weight_matching(const std::vector<std::vector<double>>& weights,
                             double cutoff) {
  Matching result;
  const int n = static_cast<int>(weights.size());
  const int m = n == 0 ? 0 : static_cast<int>(weights[0].size());
  if (n == 0 || m == 0) return result;

  std::vector<char> row_done(n, 0), col_done(m, 0);
  const double optimum = best_total(weights, cutoff, row_done, col_done);
  constexpr double kTol = 1e-9;

  // Fix pairs greedily in (row, column) order; a pair is kept only when an
  // optimal completion still exists, which makes ties deterministic.
  double fixed = 0.0;
  for (int i = 0; i < n; ++i) {
    row_done[i] = 1;
    int chosen = -1;
    for (int j = 0; j < m; ++j) {
      if (col_done[j] || weights[i][j] < cutoff) continue;
      col_done[j] = 1;
      const double rest = best_total(weights, cutoff, row_done, col_done);
      col_done[j] = 0;
      if (fixed + weights[i][j] + rest >= optimum - kTol) {
        chosen = j;
        break;
      }
    }
    if (chosen >= 0) {
      col_done[chosen] = 1;
      fixed += weights[i][chosen];
      result.pairs.emplace_back(i, chosen);
    }
  }
  result.score = fixed;
  return result;
}

}  // namespace bef
