#pragma once

#include <string>
#include <utility>
#include <vector>

namespace bef {

struct Matching {
  // (row index, column index) pairs; row/column identity is the caller's
  std::vector<std::pair<int, int>> pairs;
  double score = 0.0;
};

// Exact maximum-total-weight one-to-one assignment over an n x m weight
// matrix (entries below `cutoff` are unmatchable). Among all optimal
// assignments the lexicographically smallest one in (row, column) order is
// returned, so equal-weight alternatives resolve deterministically.
Matching max_weight_matching(const std::vector<std::vector<double>>& weights,
                             double cutoff = 0.0);

}  // namespace bef
