#include "bef4llm/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <limits>

namespace bef {

const std::vector<std::string> SequenceGraph::kEmpty;

SequenceGraph::SequenceGraph(const ProcessModel& model) {
  for (const auto& [id, _] : model.flow_objects) node_ids_.push_back(id);
  for (const auto& f : model.flows) {
    if (f.kind != FlowKind::Sequence) continue;
    if (!model.flow_objects.count(f.source) ||
        !model.flow_objects.count(f.target))
      continue;  // pool endpoints only occur on message flows
    succ_[f.source].push_back(f.target);
    pred_[f.target].push_back(f.source);
  }
  for (auto& [_, v] : succ_) std::sort(v.begin(), v.end());
  for (auto& [_, v] : pred_) std::sort(v.begin(), v.end());
}

const std::vector<std::string>& SequenceGraph::successors(
    const std::string& id) const {
  auto it = succ_.find(id);
  return it == succ_.end() ? kEmpty : it->second;
}

const std::vector<std::string>& SequenceGraph::predecessors(
    const std::string& id) const {
  auto it = pred_.find(id);
  return it == pred_.end() ? kEmpty : it->second;
}

SequenceGraph SequenceGraph::without_back_edges(
    const ProcessModel& model) const {
  enum class Color { White, Gray, Black };
  std::map<std::string, Color> color;
  for (const auto& id : node_ids_) color[id] = Color::White;
  std::set<std::pair<std::string, std::string>> back_edges;

  std::function<void(const std::string&)> dfs = [&](const std::string& u) {
    color[u] = Color::Gray;
    for (const auto& v : successors(u)) {
      if (color[v] == Color::Gray) {
        back_edges.insert({u, v});
      } else if (color[v] == Color::White) {
        dfs(v);
      }
    }
    color[u] = Color::Black;
  };
  for (const auto& id : node_ids_) {
    const auto* fo = model.node(id);
    if (fo && fo->kind == NodeKind::StartEvent && color[id] == Color::White)
      dfs(id);
  }
  // nodes unreachable from any start still get a deterministic sweep
  for (const auto& id : node_ids_)
    if (color[id] == Color::White) dfs(id);

  SequenceGraph pruned;
  pruned.node_ids_ = node_ids_;
  for (const auto& [u, vs] : succ_) {
    for (const auto& v : vs) {
      if (back_edges.count({u, v})) continue;
      pruned.succ_[u].push_back(v);
      pruned.pred_[v].push_back(u);
    }
  }
  return pruned;
}

std::set<std::string> SequenceGraph::reachable_from(
    const std::string& id) const {
  std::set<std::string> seen;
  std::deque<std::string> queue{id};
  seen.insert(id);
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    for (const auto& v : successors(u)) {
      if (seen.insert(v).second) queue.push_back(v);
    }
  }
  return seen;
}

std::vector<std::pair<std::string, std::string>> SequenceGraph::edges() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [u, vs] : succ_)
    for (const auto& v : vs) out.emplace_back(u, v);
  return out;
}

std::pair<int, int> degrees(const ProcessModel& model, const std::string& id) {
  if (!model.flow_objects.count(id)) throw UnknownId(id);
  int in = 0, out = 0;
  for (const auto& f : model.flows) {
    if (f.kind != FlowKind::Sequence) continue;
    if (f.source == id) ++out;
    if (f.target == id) ++in;
  }
  return {in, out};
}

std::vector<GatewayRole> gateway_roles(const ProcessModel& model) {
  std::vector<GatewayRole> roles;
  for (const auto& [id, fo] : model.flow_objects) {
    if (!is_gateway(fo.kind)) continue;
    auto [in, out] = degrees(model, id);
    GatewayRole role;
    role.gateway_id = id;
    role.is_join = in > 1;
    role.is_split = out > 1 || (in <= 1 && out <= 1);
    roles.push_back(std::move(role));
  }
  return roles;
}

std::optional<GatewayRole> gateway_role(const ProcessModel& model,
                                        const std::string& id) {
  const auto* fo = model.node(id);
  if (!fo || !is_gateway(fo->kind)) return std::nullopt;
  auto [in, out] = degrees(model, id);
  GatewayRole role;
  role.gateway_id = id;
  role.is_join = in > 1;
  role.is_split = out > 1 || (in <= 1 && out <= 1);
  return role;
}

namespace {

std::map<std::string, int> bfs_distances(const SequenceGraph& graph,
                                         const std::string& from) {
  std::map<std::string, int> dist;
  std::deque<std::string> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    std::string u = queue.front();
    queue.pop_front();
    for (const auto& v : graph.successors(u)) {
      if (!dist.count(v)) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

}  // namespace

std::optional<std::string> find_matching_join(const ProcessModel& model,
                                              const std::string& split_id) {
  auto role = gateway_role(model, split_id);
  if (!role || !role->is_split) throw NotASplit(split_id);
  const NodeKind kind = model.node(split_id)->kind;

  SequenceGraph graph(model);
  const auto& branches = graph.successors(split_id);
  if (branches.empty()) return std::nullopt;

  std::vector<std::map<std::string, int>> branch_dists;
  branch_dists.reserve(branches.size());
  for (const auto& b : branches) branch_dists.push_back(bfs_distances(graph, b));

  std::optional<std::string> best;
  int best_dist = std::numeric_limits<int>::max();
  for (const auto& [id, fo] : model.flow_objects) {
    if (fo.kind != kind || id == split_id) continue;
    auto candidate_role = gateway_role(model, id);
    if (!candidate_role || !candidate_role->is_join) continue;
    int max_dist = 0;
    bool on_all_branches = true;
    for (const auto& dist : branch_dists) {
      auto it = dist.find(id);
      if (it == dist.end()) {
        on_all_branches = false;
        break;
      }
      max_dist = std::max(max_dist, it->second);
    }
    if (!on_all_branches) continue;
    if (max_dist < best_dist) {  // map order already breaks ties by id
      best_dist = max_dist;
      best = id;
    }
  }
  return best;
}

int diameter_nodes(const ProcessModel& model) {
  SequenceGraph dag = SequenceGraph(model).without_back_edges(model);
  // longest node count from n to any end event, -1 when no end reachable
  std::map<std::string, int> memo;
  std::function<int(const std::string&)> longest = [&](const std::string& u) {
    auto it = memo.find(u);
    if (it != memo.end()) return it->second;
    memo[u] = -1;  // guards against residual cycles off the start component
    int best = model.node(u)->kind == NodeKind::EndEvent ? 1 : -1;
    for (const auto& v : dag.successors(u)) {
      int sub = longest(v);
      if (sub > 0) best = std::max(best, sub + 1);
    }
    memo[u] = best;
    return best;
  };
  int best = 0;
  for (const auto& [id, fo] : model.flow_objects) {
    if (fo.kind != NodeKind::StartEvent) continue;
    best = std::max(best, longest(id));
  }
  return std::max(best, 0);
}

std::set<std::string> cut_vertices(const ProcessModel& model) {
  std::map<std::string, std::vector<std::string>> adj;
  for (const auto& [id, _] : model.flow_objects) adj[id];
  for (const auto& f : model.flows) {
    if (f.kind != FlowKind::Sequence) continue;
    if (!model.flow_objects.count(f.source) ||
        !model.flow_objects.count(f.target) || f.source == f.target)
      continue;
    adj[f.source].push_back(f.target);
    adj[f.target].push_back(f.source);
  }
  for (auto& [_, v] : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::set<std::string> cuts;
  std::map<std::string, int> disc, low;
  int timer = 0;
  std::function<void(const std::string&, const std::string&)> dfs =
      [&](const std::string& u, const std::string& parent) {
        disc[u] = low[u] = ++timer;
        int children = 0;
        for (const auto& v : adj[u]) {
          if (!disc.count(v)) {
            ++children;
            dfs(v, u);
            low[u] = std::min(low[u], low[v]);
            if (!parent.empty() && low[v] >= disc[u]) cuts.insert(u);
          } else if (v != parent) {
            low[u] = std::min(low[u], disc[v]);
          }
        }
        if (parent.empty() && children > 1) cuts.insert(u);
      };
  for (const auto& [id, _] : adj)
    if (!disc.count(id)) dfs(id, "");
  return cuts;
}

}  // namespace bef
