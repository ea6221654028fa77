#include "bef4llm/text.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "bef4llm/embedded_data.hpp"

namespace bef {

namespace {

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string stem(std::string word) {
  auto ends_with = [&](const char* suffix) {
    const std::size_t n = std::strlen(suffix);
    return word.size() > n + 1 &&
           word.compare(word.size() - n, n, suffix) == 0;
  };
  if (ends_with("ing"))
    word.erase(word.size() - 3);
  else if (ends_with("ed"))
    word.erase(word.size() - 2);
  else if (ends_with("s"))
    word.erase(word.size() - 1);
  return word;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

std::size_t levenshtein(const std::string& a, const std::string& b) {
  if (a.empty()) return b.size();
  if (b.empty()) return a.size();
  std::vector<std::size_t> costs(b.size() + 1);
  std::iota(costs.begin(), costs.end(), std::size_t{0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t corner = costs[0];
    costs[0] = i + 1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      const std::size_t upper = costs[j + 1];
      costs[j + 1] = std::min({upper + 1, costs[j] + 1,
                               corner + (a[i] == b[j] ? 0 : 1)});
      corner = upper;
    }
  }
  return costs.back();
}

double label_sim_syntactic(const std::string& a, const std::string& b) {
  const std::string la = lower(a), lb = lower(b);
  if (la.empty() && lb.empty()) return 1.0;
  if (la.empty() || lb.empty()) return 0.0;
  const double ed = static_cast<double>(levenshtein(la, lb));
  return 1.0 - ed / static_cast<double>(std::max(la.size(), lb.size()));
}

TokenizerConfig TokenizerConfig::bundled() {
  TokenizerConfig config;
  std::istringstream stream(data::kStopwordsTxt);
  std::string word;
  while (std::getline(stream, word))
    if (!word.empty()) config.stopwords.insert(word);
  return config;
}

LabelBag tokenize(const std::string& label, const TokenizerConfig& config) {
  LabelBag bag;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !config.stopwords.count(current)) {
      bag.tokens.insert(stem(current));
    }
    current.clear();
  };
  for (unsigned char c : label) {
    if (std::isalnum(c))
      current.push_back(static_cast<char>(std::tolower(c)));
    else
      flush();
  }
  flush();
  return bag;
}

SynonymLexicon SynonymLexicon::parse(const std::string& text) {
  SynonymLexicon lex;
  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    const std::string head = line.substr(0, colon);
    std::istringstream rest(line.substr(colon + 1));
    std::string syn;
    while (std::getline(rest, syn, ',')) {
      syn.erase(std::remove_if(syn.begin(), syn.end(),
                               [](unsigned char c) { return std::isspace(c); }),
                syn.end());
      if (!syn.empty()) lex.add(head, syn);
    }
  }
  return lex;
}

SynonymLexicon SynonymLexicon::bundled() { return parse(data::kSynonymsTxt); }

SynonymLexicon SynonymLexicon::load(const std::string& path) {
  return parse(read_file(path));
}

void SynonymLexicon::add(const std::string& a, const std::string& b) {
  syn_[a].insert(b);
  syn_[b].insert(a);
}

bool SynonymLexicon::are_synonyms(const std::string& a,
                                  const std::string& b) const {
  auto it = syn_.find(a);
  return it != syn_.end() && it->second.count(b) > 0;
}

double label_sim_semantic(const LabelBag& a, const LabelBag& b,
                          const SynonymLexicon& lexicon, double w_intersect,
                          double w_synonym) {
  if (a.tokens.empty() && b.tokens.empty()) return 1.0;
  if (a.tokens.empty() || b.tokens.empty()) return 0.0;

  std::size_t intersection = 0;
  for (const auto& w : a.tokens) intersection += b.tokens.count(w);

  // s(x, y): words of x \ y that have a synonym in y
  auto synonym_hits = [&](const LabelBag& x, const LabelBag& y) {
    std::size_t hits = 0;
    for (const auto& w : x.tokens) {
      if (y.tokens.count(w)) continue;
      hits += std::any_of(y.tokens.begin(), y.tokens.end(),
                          [&](const std::string& v) {
                            return lexicon.are_synonyms(w, v);
                          });
    }
    return hits;
  };
  const double numerator =
      2.0 * w_intersect * static_cast<double>(intersection) +
      w_synonym * static_cast<double>(synonym_hits(a, b) + synonym_hits(b, a));
  const double score =
      numerator / static_cast<double>(a.tokens.size() + b.tokens.size());
  return std::clamp(score, 0.0, 1.0);
}

}  // namespace bef
