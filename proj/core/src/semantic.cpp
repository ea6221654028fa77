#include "bef4llm/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bef4llm/graph.hpp"
#include "bef4llm/matching.hpp"

namespace bef {

namespace {

std::vector<const FlowObject*> nodes_filtered(const ProcessModel& model,
                                              bool include_gateways) {
  std::vector<const FlowObject*> out;
  for (const auto& [_, fo] : model.flow_objects)
    if (include_gateways || !is_gateway(fo.kind)) out.push_back(&fo);
  return out;  // id-sorted via map order
}

NodeMatching match_nodes(const ProcessModel& candidate,
                         const ProcessModel& truth, const NodeSim& sim,
                         double cutoff, bool include_gateways) {
  const auto cand = nodes_filtered(candidate, include_gateways);
  const auto gt = nodes_filtered(truth, include_gateways);
  NodeMatching result;
  if (cand.empty() || gt.empty()) return result;
  std::vector<std::vector<double>> weights(
      cand.size(), std::vector<double>(gt.size(), 0.0));
  for (std::size_t i = 0; i < cand.size(); ++i)
    for (std::size_t j = 0; j < gt.size(); ++j)
      weights[i][j] = sim(*cand[i], *gt[j]);
  const Matching m = max_weight_matching(weights, cutoff);
  result.score = m.score;
  for (const auto& [i, j] : m.pairs)
    result.pairs.emplace_back(cand[i]->id, gt[j]->id);
  return result;
}

int non_gateway_count(const ProcessModel& model) {
  int n = 0;
  for (const auto& [_, fo] : model.flow_objects) n += !is_gateway(fo.kind);
  return n;
}

std::set<std::pair<std::string, std::string>> flow_edge_set(
    const ProcessModel& model) {
  std::set<std::pair<std::string, std::string>> edges;
  for (const auto& f : model.flows) edges.insert({f.source, f.target});
  return edges;
}

}  // namespace

bool NodeMatching::candidate_matched(const std::string& id) const {
  return truth_for(id) != nullptr;
}

bool NodeMatching::truth_matched(const std::string& id) const {
  return candidate_for(id) != nullptr;
}

const std::string* NodeMatching::truth_for(
    const std::string& candidate_id) const {
  for (const auto& [c, g] : pairs)
    if (c == candidate_id) return &g;
  return nullptr;
}

const std::string* NodeMatching::candidate_for(
    const std::string& truth_id) const {
  for (const auto& [c, g] : pairs)
    if (g == truth_id) return &c;
  return nullptr;
}

NodeMatching optimal_matching(const ProcessModel& candidate,
                              const ProcessModel& truth, const NodeSim& sim,
                              double cutoff) {
  return match_nodes(candidate, truth, sim, cutoff,
                     /*include_gateways=*/false);
}

double node_context_sim(const ProcessModel& candidate, const std::string& nc,
                        const ProcessModel& truth, const std::string& ng,
                        double tau_ctx) {
  const SequenceGraph gc(candidate);
  const SequenceGraph gg(truth);
  auto term = [&](const std::vector<std::string>& side_c,
                  const std::vector<std::string>& side_g) {
    if (side_c.empty() && side_g.empty()) return 0.5;
    if (side_c.empty() || side_g.empty()) return 0.0;
    std::vector<std::vector<double>> weights(
        side_c.size(), std::vector<double>(side_g.size(), 0.0));
    for (std::size_t i = 0; i < side_c.size(); ++i)
      for (std::size_t j = 0; j < side_g.size(); ++j)
        weights[i][j] = label_sim_syntactic(candidate.node(side_c[i])->label,
                                            truth.node(side_g[j])->label);
    const Matching m = max_weight_matching(weights, tau_ctx);
    return static_cast<double>(m.pairs.size()) /
           (2.0 * std::sqrt(static_cast<double>(side_c.size()) *
                            static_cast<double>(side_g.size())));
  };
  return term(gc.predecessors(nc), gg.predecessors(ng)) +
         term(gc.successors(nc), gg.successors(ng));
}

std::array<double, 3> whole_graph_label_scores(const ProcessModel& candidate,
                                               const ProcessModel& truth,
                                               const SemanticConfig& config) {
  const int nc = non_gateway_count(candidate);
  const int ng = non_gateway_count(truth);
  if (nc + ng == 0) return {1.0, 1.0, 1.0};

  const NodeSim sim_syn = [](const FlowObject& a, const FlowObject& b) {
    return label_sim_syntactic(a.label, b.label);
  };
  const NodeSim sim_sem = [&](const FlowObject& a, const FlowObject& b) {
    return label_sim_semantic(tokenize(a.label, config.tokenizer),
                              tokenize(b.label, config.tokenizer),
                              config.lexicon, config.w_intersect,
                              config.w_synonym);
  };
  const NodeSim sim_ctx = [&](const FlowObject& a, const FlowObject& b) {
    return node_context_sim(candidate, a.id, truth, b.id, config.tau_ctx);
  };

  std::array<double, 3> out{};
  const std::array<const NodeSim*, 3> sims = {&sim_syn, &sim_sem, &sim_ctx};
  for (std::size_t k = 0; k < sims.size(); ++k) {
    const NodeMatching m =
        optimal_matching(candidate, truth, *sims[k], config.tau_label);
    out[k] = 2.0 * m.score / static_cast<double>(nc + ng);
  }
  return out;
}

NodeMatching ged_matching(const ProcessModel& candidate,
                          const ProcessModel& truth,
                          const SemanticConfig& config) {
  const NodeSim sim = [](const FlowObject& a, const FlowObject& b) {
    if (is_gateway(a.kind) || is_gateway(b.kind))
      return a.kind == b.kind ? 1.0 : 0.0;
    return label_sim_syntactic(a.label, b.label);
  };
  return match_nodes(candidate, truth, sim, config.tau_ged,
                     /*include_gateways=*/true);
}

NodeMatching correspondence_matching(const ProcessModel& candidate,
                                     const ProcessModel& truth,
                                     const SemanticConfig& config) {
  const NodeSim sim = [](const FlowObject& a, const FlowObject& b) {
    if (a.kind != b.kind) return 0.0;
    if (a.label.empty() && b.label.empty()) return 1.0;
    return label_sim_syntactic(a.label, b.label);
  };
  return match_nodes(candidate, truth, sim, config.tau_match,
                     /*include_gateways=*/true);
}

double ged_similarity(const ProcessModel& candidate, const ProcessModel& truth,
                      const NodeMatching& matching,
                      const SemanticConfig& config) {
  const int total_nodes = static_cast<int>(candidate.flow_objects.size() +
                                           truth.flow_objects.size());
  const int total_edges =
      static_cast<int>(candidate.flows.size() + truth.flows.size());
  if (total_nodes == 0 && total_edges == 0) return 1.0;

  const int unmatched =
      total_nodes - 2 * static_cast<int>(matching.pairs.size());
  const double s_nv =
      total_nodes > 0 ? static_cast<double>(unmatched) / total_nodes : 0.0;

  const auto truth_edges = flow_edge_set(truth);
  const auto cand_edges = flow_edge_set(candidate);
  int uncorresponding = 0;
  for (const auto& [a, b] : cand_edges) {
    const auto* ma = matching.truth_for(a);
    const auto* mb = matching.truth_for(b);
    uncorresponding += !(ma && mb && truth_edges.count({*ma, *mb}));
  }
  for (const auto& [a, b] : truth_edges) {
    const auto* ma = matching.candidate_for(a);
    const auto* mb = matching.candidate_for(b);
    uncorresponding += !(ma && mb && cand_edges.count({*ma, *mb}));
  }
  const double s_ev =
      total_edges > 0 ? static_cast<double>(uncorresponding) / total_edges
                      : 0.0;

  double substitution = 0.0;
  for (const auto& [c, g] : matching.pairs) {
    const auto* a = candidate.node(c);
    const auto* b = truth.node(g);
    const double sim = (is_gateway(a->kind) || is_gateway(b->kind))
                           ? (a->kind == b->kind ? 1.0 : 0.0)
                           : label_sim_syntactic(a->label, b->label);
    substitution += 1.0 - sim;
  }
  const int matched_nodes = total_nodes - unmatched;
  const double s_bv =
      matched_nodes > 0 ? 2.0 * substitution / matched_nodes : 0.0;

  (void)config;
  return 1.0 - (s_nv + s_ev + s_bv) / 3.0;
}

double common_nodes_edges(const ProcessModel& candidate,
                          const ProcessModel& truth,
                          const NodeMatching& matching) {
  const int nodes_c = static_cast<int>(candidate.flow_objects.size());
  const int nodes_g = static_cast<int>(truth.flow_objects.size());
  const int edges_c = static_cast<int>(candidate.flows.size());
  const int edges_g = static_cast<int>(truth.flows.size());
  const int total = nodes_c + nodes_g + edges_c + edges_g;
  if (total == 0) return 1.0;

  const int matched = static_cast<int>(matching.pairs.size());
  const int node_diff = (nodes_c - matched) + (nodes_g - matched);

  const auto truth_edges = flow_edge_set(truth);
  const auto cand_edges = flow_edge_set(candidate);
  int edge_diff = 0;
  for (const auto& [a, b] : cand_edges) {
    const auto* ma = matching.truth_for(a);
    const auto* mb = matching.truth_for(b);
    edge_diff += !(ma && mb && truth_edges.count({*ma, *mb}));
  }
  for (const auto& [a, b] : truth_edges) {
    const auto* ma = matching.candidate_for(a);
    const auto* mb = matching.candidate_for(b);
    edge_diff += !(ma && mb && cand_edges.count({*ma, *mb}));
  }
  return 1.0 - static_cast<double>(node_diff + edge_diff) / total;
}

std::vector<std::pair<std::string, std::string>> causal_footprint(
    const ProcessModel& model) {
  const SequenceGraph dag = SequenceGraph(model).without_back_edges(model);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, fa] : model.flow_objects) {
    if (is_gateway(fa.kind)) continue;
    const auto reach = dag.reachable_from(a);
    for (const auto& b : reach) {
      if (b == a) continue;
      const auto* fb = model.node(b);
      if (fb && !is_gateway(fb->kind)) out.emplace_back(a, b);
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> dependency_graph(
    const ProcessModel& model) {
  const SequenceGraph graph(model);
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [a, fa] : model.flow_objects) {
    if (is_gateway(fa.kind)) continue;
    // BFS allowed to pass through gateways only
    std::set<std::string> seen{a};
    std::vector<std::string> frontier{a};
    while (!frontier.empty()) {
      std::vector<std::string> next;
      for (const auto& u : frontier) {
        for (const auto& v : graph.successors(u)) {
          if (!seen.insert(v).second) continue;
          const auto* fv = model.node(v);
          if (!fv) continue;
          if (is_gateway(fv->kind)) {
            next.push_back(v);
          } else if (v != a) {
            out.emplace_back(a, v);
          }
        }
      }
      frontier = std::move(next);
    }
  }
  return out;
}

namespace {

double mapped_jaccard(
    const std::vector<std::pair<std::string, std::string>>& relation_c,
    const std::vector<std::pair<std::string, std::string>>& relation_g,
    const NodeMatching& matching) {
  // candidate pairs are mapped into truth-id space; unmatched endpoints
  // keep a candidate-side tag so they only enlarge the union
  std::set<std::pair<std::string, std::string>> mapped_c, set_g;
  for (const auto& [a, b] : relation_c) {
    const auto* ma = matching.truth_for(a);
    const auto* mb = matching.truth_for(b);
    mapped_c.insert({ma ? *ma : "c:" + a, mb ? *mb : "c:" + b});
  }
  for (const auto& [a, b] : relation_g) set_g.insert({a, b});
  if (mapped_c.empty() && set_g.empty()) return 1.0;
  std::size_t intersection = 0;
  for (const auto& p : mapped_c) intersection += set_g.count(p);
  const std::size_t unioned = mapped_c.size() + set_g.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unioned);
}

}  // namespace

double causal_footprint_sim(const ProcessModel& candidate,
                            const ProcessModel& truth,
                            const NodeMatching& matching) {
  return mapped_jaccard(causal_footprint(candidate), causal_footprint(truth),
                        matching);
}

double dependency_graph_sim(const ProcessModel& candidate,
                            const ProcessModel& truth,
                            const NodeMatching& matching) {
  return mapped_jaccard(dependency_graph(candidate), dependency_graph(truth),
                        matching);
}

SemanticScores semantic_dimension(const ProcessModel& candidate,
                                  const ProcessModel& truth,
                                  const SemanticConfig& config) {
  SemanticScores out;
  const auto labels = whole_graph_label_scores(candidate, truth, config);
  out.scores["SEM1"] = labels[0];
  out.scores["SEM2"] = labels[1];
  out.scores["SEM3"] = labels[2];
  const NodeMatching ged = ged_matching(candidate, truth, config);
  out.scores["SEM4"] = ged_similarity(candidate, truth, ged, config);
  const NodeMatching corr = correspondence_matching(candidate, truth, config);
  out.scores["SEM5"] = common_nodes_edges(candidate, truth, corr);
  out.scores["SEM6"] = causal_footprint_sim(candidate, truth, corr);
  out.scores["SEM7"] = dependency_graph_sim(candidate, truth, corr);
  double sum = 0.0;
  for (const auto& [_, v] : out.scores) sum += v;
  out.q_sem = sum / 7.0;
  return out;
}

}  // namespace bef
