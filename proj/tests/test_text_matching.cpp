#include "doctest.h"

#include <random>

#include "bef4llm/matching.hpp"
#include "bef4llm/text.hpp"
#include "support/oracles.hpp"

using namespace bef;
using bef::testing::oracle_matching_total;

TEST_CASE("levenshtein distance") {
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "abc") == 0);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein("check order", "check orders") == 1);
}

TEST_CASE("syntactic label similarity lowercases and normalizes") {
  CHECK(label_sim_syntactic("", "") == doctest::Approx(1.0));
  CHECK(label_sim_syntactic("Ship", "") == doctest::Approx(0.0));
  CHECK(label_sim_syntactic("Check Order", "check order") ==
        doctest::Approx(1.0));
  // lev("check order", "check orders") = 1, max len 12
  CHECK(label_sim_syntactic("Check order", "check orders") ==
        doctest::Approx(1.0 - 1.0 / 12.0));
  CHECK(label_sim_syntactic("abcd", "wxyz") == doctest::Approx(0.0));
}

TEST_CASE("tokenizer lowercases, stems and drops stop words") {
  const auto config = TokenizerConfig::bundled();
  const LabelBag bag = tokenize("Checking the Orders", config);
  CHECK(bag.tokens.count("check") == 1);
  CHECK(bag.tokens.count("order") == 1);
  CHECK(bag.tokens.count("the") == 0);
  CHECK(tokenize("", config).tokens.empty());
  CHECK(tokenize("the a an", config).tokens.empty());
}

TEST_CASE("synonym lexicon is symmetric") {
  auto lex = SynonymLexicon::empty();
  lex.add("ship", "send");
  CHECK(lex.are_synonyms("ship", "send"));
  CHECK(lex.are_synonyms("send", "ship"));
  CHECK_FALSE(lex.are_synonyms("ship", "receive"));
  CHECK_FALSE(lex.are_synonyms("ship", "ship"));
}

TEST_CASE("semantic label similarity weights overlap and synonyms") {
  const auto config = TokenizerConfig::bundled();
  auto lex = SynonymLexicon::empty();
  lex.add("check", "verify");

  const LabelBag a = tokenize("Check order", config);
  const LabelBag b = tokenize("Check order", config);
  CHECK(label_sim_semantic(a, b, lex, 1.0, 0.75) == doctest::Approx(1.0));

  // one exact token plus one synonym pair over two tokens each
  const LabelBag c = tokenize("Verify order", config);
  CHECK(label_sim_semantic(a, c, lex, 1.0, 0.75) ==
        doctest::Approx((1.0 + 0.75) / 2.0));

  const LabelBag d = tokenize("Ship package", config);
  CHECK(label_sim_semantic(a, d, lex, 1.0, 0.75) == doctest::Approx(0.0));
  CHECK(label_sim_semantic(LabelBag{}, LabelBag{}, lex, 1.0, 0.75) <= 1.0);
}

TEST_CASE("assignment score matches exhaustive enumeration") {
  std::mt19937 rng(20260826);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = dim(rng), m = dim(rng);
    std::vector<std::vector<double>> w(n, std::vector<double>(m));
    for (auto& row : w)
      for (auto& x : row) x = weight(rng);
    const double cutoff = trial % 3 == 0 ? 0.4 : 0.0;
    const Matching got = max_weight_matching(w, cutoff);
    CAPTURE(trial);
    CHECK(got.score ==
          doctest::Approx(oracle_matching_total(w, cutoff)).epsilon(1e-9));
    // matching is one-to-one and respects the cutoff
    std::set<int> rows, cols;
    for (const auto& [r, c] : got.pairs) {
      CHECK(rows.insert(r).second);
      CHECK(cols.insert(c).second);
      CHECK(w[r][c] >= cutoff);
    }
  }
}

TEST_CASE("equal-weight ties resolve to the lexicographically first pairs") {
  // every pairing weighs 1.0: the diagonal must come back
  std::vector<std::vector<double>> w(4, std::vector<double>(4, 1.0));
  const Matching got = max_weight_matching(w, 0.5);
  REQUIRE(got.pairs.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(got.pairs[i].first == i);
    CHECK(got.pairs[i].second == i);
  }
}

TEST_CASE("matching is deterministic across repeated calls") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> weight(0.0, 1.0);
  std::vector<std::vector<double>> w(5, std::vector<double>(5));
  for (auto& row : w)
    for (auto& x : row) x = weight(rng);
  const Matching first = max_weight_matching(w, 0.2);
  for (int repeat = 0; repeat < 10; ++repeat) {
    const Matching again = max_weight_matching(w, 0.2);
    CHECK(again.pairs == first.pairs);
    CHECK(again.score == first.score);
  }
}

TEST_CASE("empty matrices yield an empty matching") {
  CHECK(max_weight_matching({}, 0.0).pairs.empty());
  CHECK(max_weight_matching({{}}, 0.0).pairs.empty());
}
