#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bef4llm/model.hpp"
#include "bef4llm/text.hpp"

namespace bef {

struct SemanticConfig {
  double w_intersect = 1.0;
  double w_synonym = 0.75;
  double tau_label = 0.0;  // SEM1-SEM3 matchings
  double tau_ged = 0.5;    // SEM4 matching
  double tau_match = 0.75; // SEM5-SEM7 correspondence
  double tau_ctx = 0.75;   // neighbor matching inside context similarity
  SynonymLexicon lexicon = SynonymLexicon::bundled();
  TokenizerConfig tokenizer = TokenizerConfig::bundled();
};

// One-to-one cross-model node correspondence over flow-object ids.
struct NodeMatching {
  std::vector<std::pair<std::string, std::string>> pairs;
  double score = 0.0;

  bool candidate_matched(const std::string& id) const;
  bool truth_matched(const std::string& id) const;
  const std::string* truth_for(const std::string& candidate_id) const;
  const std::string* candidate_for(const std::string& truth_id) const;
};

using NodeSim =
    std::function<double(const FlowObject&, const FlowObject&)>;

// Maximum-similarity assignment over non-gateway node pairs with
// sim >= cutoff; ties resolve by (candidate id, truth id) order.
NodeMatching optimal_matching(const ProcessModel& candidate,
                              const ProcessModel& truth, const NodeSim& sim,
                              double cutoff);

// Context similarity of two non-gateway nodes: share of label-matched
// input and output neighbors, each term weighted by the geometric mean of
// the neighborhood sizes.
double node_context_sim(const ProcessModel& candidate, const std::string& nc,
                        const ProcessModel& truth, const std::string& ng,
                        double tau_ctx);

// SEM1 syntactic-, SEM2 semantic-, SEM3 context-label similarity.
std::array<double, 3> whole_graph_label_scores(const ProcessModel& candidate,
                                               const ProcessModel& truth,
                                               const SemanticConfig& config);

// Correspondence used by SEM4: label-matched non-gateways plus same-kind
// gateway pairs (similarity 1.0), so a model is edit-distance-identical
// to itself.
NodeMatching ged_matching(const ProcessModel& candidate,
                          const ProcessModel& truth,
                          const SemanticConfig& config);

// Correspondence used by SEM5-SEM7: kind-equal nodes by label similarity,
// unlabeled same-kind nodes count as fully similar.
NodeMatching correspondence_matching(const ProcessModel& candidate,
                                     const ProcessModel& truth,
                                     const SemanticConfig& config);

double ged_similarity(const ProcessModel& candidate, const ProcessModel& truth,
                      const NodeMatching& matching,
                      const SemanticConfig& config);

double common_nodes_edges(const ProcessModel& candidate,
                          const ProcessModel& truth,
                          const NodeMatching& matching);

double causal_footprint_sim(const ProcessModel& candidate,
                            const ProcessModel& truth,
                            const NodeMatching& matching);

double dependency_graph_sim(const ProcessModel& candidate,
                            const ProcessModel& truth,
                            const NodeMatching& matching);

// Causal closure and gateway-collapsed dependencies, exposed for tests.
std::vector<std::pair<std::string, std::string>> causal_footprint(
    const ProcessModel& model);
std::vector<std::pair<std::string, std::string>> dependency_graph(
    const ProcessModel& model);

struct SemanticScores {
  std::map<std::string, double> scores;  // keys SEM1..SEM7
  double q_sem = 0.0;
};

SemanticScores semantic_dimension(const ProcessModel& candidate,
                                  const ProcessModel& truth,
                                  const SemanticConfig& config);

}  // namespace bef
