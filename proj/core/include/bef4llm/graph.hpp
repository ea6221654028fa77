#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bef4llm/model.hpp"

namespace bef {

struct GatewayRole {
  std::string gateway_id;
  bool is_split = false;
  bool is_join = false;
};

struct UnknownId : std::runtime_error {
  explicit UnknownId(const std::string& id)
      : std::runtime_error("unknown flow object id \"" + id + "\"") {}
};

struct NotASplit : std::runtime_error {
  explicit NotASplit(const std::string& id)
      : std::runtime_error("gateway \"" + id + "\" is not a split") {}
};

// Sequence-flow adjacency with deterministic (id-sorted) neighbor order.
class SequenceGraph {
 public:
  explicit SequenceGraph(const ProcessModel& model);

  const std::vector<std::string>& successors(const std::string& id) const;
  const std::vector<std::string>& predecessors(const std::string& id) const;
  const std::vector<std::string>& node_ids() const { return node_ids_; }

  // Edges after removing DFS back edges, starting the DFS from each start
  // event in id order. The result is acyclic on the start-reachable part.
  SequenceGraph without_back_edges(const ProcessModel& model) const;

  std::set<std::string> reachable_from(const std::string& id) const;
  std::vector<std::pair<std::string, std::string>> edges() const;

 private:
  SequenceGraph() = default;
  std::vector<std::string> node_ids_;
  std::map<std::string, std::vector<std::string>> succ_;
  std::map<std::string, std::vector<std::string>> pred_;
  static const std::vector<std::string> kEmpty;
};

// In/out sequence-flow counts (message flows excluded). Throws UnknownId.
std::pair<int, int> degrees(const ProcessModel& model, const std::string& id);

// out-degree > 1 => split; in-degree > 1 => join; degenerate gateways
// (in<=1 and out<=1) classify as splits so rule 15 can judge them.
std::vector<GatewayRole> gateway_roles(const ProcessModel& model);

std::optional<GatewayRole> gateway_role(const ProcessModel& model,
                                        const std::string& id);

// Join gateway of the same logic kind reachable from every outgoing branch
// of the split; nearest by minimal maximum branch distance, ties broken by
// lexicographic id. Throws NotASplit.
std::optional<std::string> find_matching_join(const ProcessModel& model,
                                              const std::string& split_id);

// Longest start->end path in nodes after DFS back-edge removal; 0 when no
// start/end path exists.
int diameter_nodes(const ProcessModel& model);

// Articulation points of the undirected sequence-flow graph.
std::set<std::string> cut_vertices(const ProcessModel& model);

}  // namespace bef
