#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace bef {

// Character-level Levenshtein distance.
std::size_t levenshtein(const std::string& a, const std::string& b);

// 1 - ed/max(len) after lowercasing; both empty => 1.0, one empty => 0.0.
double label_sim_syntactic(const std::string& a, const std::string& b);

struct LabelBag {
  std::set<std::string> tokens;
};

struct TokenizerConfig {
  std::set<std::string> stopwords;
  static TokenizerConfig bundled();
};

// Lowercase, split on non-alphanumerics, drop stop words, light suffix
// stemming (-ing, -ed, -s).
LabelBag tokenize(const std::string& label, const TokenizerConfig& config);

class SynonymLexicon {
 public:
  static SynonymLexicon bundled();
  static SynonymLexicon load(const std::string& path);
  static SynonymLexicon parse(const std::string& text);
  static SynonymLexicon empty() { return SynonymLexicon(); }

  void add(const std::string& a, const std::string& b);  // symmetric
  bool are_synonyms(const std::string& a, const std::string& b) const;

 private:
  std::map<std::string, std::set<std::string>> syn_;
};

// Weighted bag overlap with synonym credit, clamped to [0,1].
double label_sim_semantic(const LabelBag& a, const LabelBag& b,
                          const SynonymLexicon& lexicon, double w_intersect,
                          double w_synonym);

}  // namespace bef
