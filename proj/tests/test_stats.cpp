#include "doctest.h"

#include <cmath>
#include <random>

#include "bef4llm/stats.hpp"
#include "support/oracles.hpp"

using namespace bef;
using bef::testing::oracle_friedman;
using bef::testing::oracle_wilcoxon_exact;

namespace {

ScoreMatrix complete_matrix(std::mt19937& rng, int blocks, int treatments) {
  std::uniform_real_distribution<double> value(0.0, 1.0);
  ScoreMatrix m;
  for (int j = 0; j < treatments; ++j)
    m.treatments.push_back("T" + std::to_string(j));
  for (int i = 0; i < blocks; ++i) {
    std::vector<std::optional<double>> row;
    for (int j = 0; j < treatments; ++j) row.emplace_back(value(rng));
    m.blocks.push_back(std::move(row));
  }
  return m;
}

}  // namespace

TEST_CASE("chi-squared upper tail against reference values") {
  const struct {
    double x;
    int df;
    double p;
  } cases[] = {
      {0.5, 1, 0.47950012218695346},    {1.0, 1, 0.3173105078629141},
      {3.84, 1, 0.050043521248705103},  {2.0, 2, 0.36787944117144232},
      {5.99, 2, 0.050036627086586283},  {1.5, 3, 0.68227033033621257},
      {7.81, 3, 0.050106056350005941},  {10.0, 4, 0.040427681994512803},
      {3.0, 5, 0.69998583587862751},    {15.0, 5, 0.010362337915786437},
      {6.0, 6, 0.42319008112684352},    {20.0, 8, 0.010336050675925718},
      {9.0, 10, 0.53210357637471548},   {25.0, 10, 0.0053455054871340643},
      {313.78, 10, 1.891696211589371e-61},
      {12.5, 12, 0.40640403403601311},  {40.0, 20, 0.0049954123083075872},
      {18.3, 15, 0.24722227221112059},  {55.0, 40, 0.057457351676591728},
      {100.0, 60, 0.00091682886145607987},
  };
  for (const auto& c : cases) {
    CAPTURE(c.x);
    CAPTURE(c.df);
    CHECK(chi_squared_upper_tail(c.x, c.df) ==
          doctest::Approx(c.p).epsilon(1e-8));
  }
  CHECK(chi_squared_upper_tail(0.0, 3) == doctest::Approx(1.0));
  CHECK(chi_squared_upper_tail(-1.0, 3) == doctest::Approx(1.0));
}

TEST_CASE("normal upper tail against reference values") {
  const struct {
    double z;
    double p;
  } cases[] = {
      {-3.5, 0.99976737092096447},  {-2.0, 0.97724986805182079},
      {-1.0, 0.84134474606854295},  {-0.5, 0.6914624612740131},
      {0.0, 0.5},                   {0.25, 0.40129367431707628},
      {0.5, 0.3085375387259869},    {1.0, 0.15865525393145705},
      {1.5, 0.066807201268858066},  {1.96, 0.024997895148220436},
      {2.0, 0.022750131948179207},  {2.5, 0.0062096653257761352},
      {3.0, 0.0013498980316300945}, {3.5, 0.00023262907903552504},
      {4.0, 3.1671241833119921e-5}, {4.5, 3.3976731247300604e-6},
      {5.0, 2.8665157187919391e-7}, {1.6448536269514722, 0.050000000000000054},
      {2.5758293035489004, 0.0050000000000000054},
      {0.8416212335729143, 0.19999999999999997},
  };
  for (const auto& c : cases) {
    CAPTURE(c.z);
    CHECK(normal_upper_tail(c.z) == doctest::Approx(c.p).epsilon(1e-8));
  }
}

TEST_CASE("skillings-mack equals friedman on complete untied data") {
  std::mt19937 rng(20260826);
  std::uniform_int_distribution<int> blocks(3, 12);
  std::uniform_int_distribution<int> treatments(3, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = blocks(rng), k = treatments(rng);
    const ScoreMatrix m = complete_matrix(rng, n, k);
    std::vector<std::vector<double>> plain;
    for (const auto& row : m.blocks) {
      std::vector<double> r;
      for (const auto& cell : row) r.push_back(*cell);
      plain.push_back(std::move(r));
    }
    const TestResult result = skillings_mack(m);
    CAPTURE(trial);
    CHECK(result.statistic ==
          doctest::Approx(oracle_friedman(plain)).epsilon(1e-9));
    CHECK(result.df == k - 1);
    CHECK(result.p_value ==
          doctest::Approx(chi_squared_upper_tail(result.statistic, k - 1)));
  }
}

TEST_CASE("skillings-mack on identical columns is null") {
  ScoreMatrix m;
  m.treatments = {"A", "B", "C"};
  for (int i = 0; i < 6; ++i)
    m.blocks.push_back({0.4, 0.4, 0.4});
  const TestResult result = skillings_mack(m);
  CHECK(result.statistic == doctest::Approx(0.0));
  CHECK(result.p_value == doctest::Approx(1.0));
}

TEST_CASE("skillings-mack tolerates missing cells") {
  ScoreMatrix m;
  m.treatments = {"A", "B", "C"};
  m.blocks = {
      {0.9, 0.5, 0.1},
      {0.8, std::nullopt, 0.2},
      {0.7, 0.6, std::nullopt},
      {std::nullopt, 0.4, 0.3},
      {0.95, 0.45, 0.15},
      {0.85, std::nullopt, std::nullopt},  // single observation: skipped
  };
  const TestResult result = skillings_mack(m);
  CHECK(result.df == 2);
  CHECK(result.statistic > 0.0);
  CHECK(result.p_value > 0.0);
  CHECK(result.p_value < 1.0);
}

TEST_CASE("disconnected designs are rejected") {
  ScoreMatrix m;
  m.treatments = {"A", "B", "C", "D"};
  // A/B never co-occur with C/D
  m.blocks = {
      {0.9, 0.5, std::nullopt, std::nullopt},
      {0.8, 0.4, std::nullopt, std::nullopt},
      {std::nullopt, std::nullopt, 0.7, 0.3},
      {std::nullopt, std::nullopt, 0.6, 0.2},
  };
  CHECK_THROWS_AS(skillings_mack(m), DegenerateDesign);
}

TEST_CASE("wilcoxon exact p for six positive differences") {
  std::vector<std::pair<double, double>> pairs;
  for (int i = 1; i <= 6; ++i)
    pairs.emplace_back(static_cast<double>(i), static_cast<double>(i) + 0.5 * i);
  const TestResult result = wilcoxon_signed_rank(pairs);
  CHECK(result.n_pairs == 6);
  CHECK(result.statistic == doctest::Approx(0.0));
  CHECK(result.p_value == doctest::Approx(2.0 / 64.0));  // 0.03125
}

TEST_CASE("wilcoxon exact path matches sign enumeration") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> delta(-1.0, 1.0);
  std::uniform_int_distribution<int> count(15, 20);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = count(rng);
    std::vector<std::pair<double, double>> pairs;
    std::vector<double> diffs;
    for (int i = 0; i < n; ++i) {
      const double d = delta(rng);
      pairs.emplace_back(0.0, d);
      diffs.push_back(d);
    }
    const TestResult result = wilcoxon_signed_rank(pairs);
    CAPTURE(trial);
    CHECK(result.p_value ==
          doctest::Approx(oracle_wilcoxon_exact(diffs)).epsilon(1e-9));
  }
}

// Exact null distribution of W+ over untied integer ranks 1..n, counted
// with a subset-sum table; usable well past the enumeration limit.
static double exact_two_sided_p(int n, double w_obs) {
  const int max_sum = n * (n + 1) / 2;
  std::vector<double> count(max_sum + 1, 0.0);
  count[0] = 1.0;
  for (int rank = 1; rank <= n; ++rank)
    for (int s = max_sum; s >= rank; --s) count[s] += count[s - rank];
  double at_most = 0.0, total = 0.0;
  for (int s = 0; s <= max_sum; ++s) {
    total += count[s];
    if (s <= w_obs + 1e-9) at_most += count[s];
  }
  return std::min(1.0, 2.0 * at_most / total);
}

TEST_CASE("wilcoxon normal approximation tracks the exact answer") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> delta(-1.0, 1.0);
  std::uniform_int_distribution<int> count(26, 30);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = count(rng);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < n; ++i) pairs.emplace_back(0.0, delta(rng));
    const TestResult approx = wilcoxon_signed_rank(pairs);
    const double exact = exact_two_sided_p(n, approx.statistic);
    CAPTURE(trial);
    CHECK(std::abs(approx.p_value - exact) < 0.01);
  }
}

TEST_CASE("wilcoxon drops zeros and is sign symmetric") {
  std::vector<std::pair<double, double>> pairs = {
      {0.5, 0.5}, {0.2, 0.2}, {0.1, 0.4}, {0.9, 0.3}, {0.6, 0.8}, {0.7, 0.1}};
  const TestResult result = wilcoxon_signed_rank(pairs);
  CHECK(result.n_pairs == 4);

  std::vector<std::pair<double, double>> flipped;
  for (const auto& [a, b] : pairs) flipped.emplace_back(b, a);
  const TestResult mirror = wilcoxon_signed_rank(flipped);
  CHECK(mirror.p_value == doctest::Approx(result.p_value));
  CHECK(mirror.statistic == doctest::Approx(result.statistic));

  CHECK_THROWS_AS(
      wilcoxon_signed_rank({{0.5, 0.5}, {0.1, 0.1}}), TooFewPairs);
  CHECK_THROWS_AS(wilcoxon_signed_rank({}), TooFewPairs);
}

TEST_CASE("bonferroni adjustment") {
  CHECK(bonferroni({0.001}, 55)[0] == doctest::Approx(0.055));
  CHECK(bonferroni({0.5}, 3)[0] == doctest::Approx(1.0));  // capped
  const auto adj = bonferroni({0.01, 0.02, 0.005}, 3);
  CHECK(adj[0] == doctest::Approx(0.03));
  CHECK(adj[1] == doctest::Approx(0.06));
  CHECK(adj[2] == doctest::Approx(0.015));
  // adjustment preserves the ordering of raw p values
  CHECK(adj[2] < adj[0]);
  CHECK(adj[0] < adj[1]);
}

TEST_CASE("pairwise contrasts order winners and adjust p values") {
  ScoreMatrix m;
  m.treatments = {"strong", "middling", "weak"};
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> noise(0.0, 0.05);
  for (int i = 0; i < 12; ++i)
    m.blocks.push_back({0.9 + noise(rng), 0.5 + noise(rng), 0.1 + noise(rng)});

  const auto contrasts = pairwise_contrasts(m, 0.05);
  REQUIRE(contrasts.size() == 3);
  for (const auto& c : contrasts) {
    CHECK(c.n_pairs == 12);
    CHECK(c.significant);
    CHECK(c.p_adj <= 0.05);
  }
  // every contrast names the higher-scoring treatment as better
  for (const auto& c : contrasts) {
    if (c.better == "strong") CHECK((c.worse == "middling" || c.worse == "weak"));
    if (c.better == "middling") CHECK(c.worse == "weak");
    CHECK(c.better != "weak");
  }
  // sorted by adjusted p
  for (std::size_t i = 1; i < contrasts.size(); ++i)
    CHECK(contrasts[i - 1].p_adj <= contrasts[i].p_adj);
}

TEST_CASE("contrasts without usable pairs fall back to not significant") {
  ScoreMatrix m;
  m.treatments = {"A", "B"};
  for (int i = 0; i < 5; ++i) m.blocks.push_back({0.5, 0.5});
  const auto contrasts = pairwise_contrasts(m, 0.05);
  REQUIRE(contrasts.size() == 1);
  CHECK_FALSE(contrasts[0].significant);
  CHECK(contrasts[0].p_adj == doctest::Approx(1.0));
}
