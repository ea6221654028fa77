#include "bef4llm/pragmatic.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "bef4llm/embedded_data.hpp"
#include "bef4llm/graph.hpp"

namespace bef {

ThresholdTable ThresholdTable::parse(const std::string& tsv) {
  ThresholdTable table;
  std::istringstream stream(tsv);
  std::string line;
  while (std::getline(stream, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string id, t1, t2, t3, t4, direction;
    std::getline(fields, id, '\t');
    std::getline(fields, t1, '\t');
    std::getline(fields, t2, '\t');
    std::getline(fields, t3, '\t');
    std::getline(fields, t4, '\t');
    std::getline(fields, direction, '\t');
    Entry entry;
    entry.t = {std::stod(t1), std::stod(t2), std::stod(t3), std::stod(t4)};
    if (direction == "lower")
      entry.direction = Direction::LowerIsBetter;
    else if (direction == "higher")
      entry.direction = Direction::HigherIsBetter;
    else
      throw std::runtime_error("bad direction \"" + direction +
                               "\" for metric " + id);
    const bool ascending = entry.direction == Direction::LowerIsBetter;
    for (int i = 0; i < 3; ++i) {
      const bool ordered =
          ascending ? entry.t[i] < entry.t[i + 1] : entry.t[i] > entry.t[i + 1];
      if (!ordered)
        throw std::runtime_error("thresholds for " + id +
                                 " are not strictly monotone");
    }
    table.entries_[id] = entry;
  }
  return table;
}

ThresholdTable ThresholdTable::bundled() {
  return parse(data::kThresholdsTsv);
}

ThresholdTable ThresholdTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read thresholds: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ThresholdTable::Entry& ThresholdTable::entry(
    const std::string& metric_id) const {
  auto it = entries_.find(metric_id);
  if (it == entries_.end()) throw UnknownMetric(metric_id);
  return it->second;
}

double ThresholdTable::normalize(double x, const std::string& metric_id) const {
  const Entry& e = entry(metric_id);
  const auto& t = e.t;
  if (e.direction == Direction::LowerIsBetter) {
    if (x < t[0]) return 1.0;
    if (x < t[1]) return 0.75;
    if (x < t[2]) return 0.5;
    if (x < t[3]) return 0.25;
    return 0.0;
  }
  if (x >= t[0]) return 1.0;
  if (x >= t[1]) return 0.75;
  if (x >= t[2]) return 0.5;
  if (x >= t[3]) return 0.25;
  return 0.0;
}

namespace {

int gateway_count(const ProcessModel& model) {
  int n = 0;
  for (const auto& [_, fo] : model.flow_objects) n += is_gateway(fo.kind);
  return n;
}

// Cross-connectivity node weight per Vanderfeesten et al.; event-based
// gateways weigh like exclusive ones.
double cc_node_weight(const FlowObject& fo, int degree) {
  if (!is_gateway(fo.kind)) return 1.0;
  const int d = std::max(degree, 1);
  switch (fo.kind) {
    case NodeKind::GatewayAND:
      return 1.0;
    case NodeKind::GatewayOR: {
      const double m = std::pow(2.0, d) - 1.0;
      return 1.0 / m + ((m - 1.0) / m) * (1.0 / d);
    }
    default:
      return 1.0 / d;
  }
}

}  // namespace

std::array<double, 5> size_metrics(const ProcessModel& model) {
  return {static_cast<double>(model.flow_objects.size()),
          static_cast<double>(gateway_count(model)),
          static_cast<double>(model.sequence_flows().size()),
          static_cast<double>(model.message_flows().size()),
          static_cast<double>(diameter_nodes(model))};
}

std::array<double, 3> density_metrics(const ProcessModel& model) {
  const double n = static_cast<double>(model.flow_objects.size());
  const double seq = static_cast<double>(model.sequence_flows().size());
  const double density = n >= 2 ? seq / (n * (n - 1)) : 0.0;
  double agd = 0.0;
  int gateways = 0;
  for (const auto& [id, fo] : model.flow_objects) {
    if (!is_gateway(fo.kind)) continue;
    const auto [in, out] = degrees(model, id);
    agd += in + out;
    ++gateways;
  }
  if (gateways > 0) agd /= gateways;
  const double cnc = n > 0 ? seq / n : 0.0;
  return {density, agd, cnc};
}

std::array<double, 3> connector_metrics(const ProcessModel& model) {
  // GH: entropy of gateway logic mix, base 3 over {AND, XOR, OR}
  int n_and = 0, n_xor = 0, n_or = 0;
  const int gateways = gateway_count(model);
  for (const auto& [_, fo] : model.flow_objects) {
    n_and += fo.kind == NodeKind::GatewayAND;
    n_xor += fo.kind == NodeKind::GatewayXOR;
    n_or += fo.kind == NodeKind::GatewayOR;
  }
  double gh = 0.0;
  if (gateways > 0) {
    for (int count : {n_and, n_xor, n_or}) {
      if (count == 0) continue;
      const double p = static_cast<double>(count) / gateways;
      gh -= p * std::log(p) / std::log(3.0);
    }
  }

  // CFC
  double cfc = 0.0;
  for (const auto& role : gateway_roles(model)) {
    if (!role.is_split) continue;
    const auto [in, out] = degrees(model, role.gateway_id);
    switch (model.node(role.gateway_id)->kind) {
      case NodeKind::GatewayAND:
        cfc += 1.0;
        break;
      case NodeKind::GatewayXOR:
        cfc += out;
        break;
      case NodeKind::GatewayOR:
        cfc += std::pow(2.0, out) - 1.0;
        break;
      default:
        break;  // event-based gateways carry no CFC weight
    }
  }

  // CC: max-product closure over arcs weighted by endpoint node weights
  double cc = 0.0;
  const auto nodes = model.nodes_sorted();
  const int n = static_cast<int>(nodes.size());
  if (n >= 2) {
    std::map<std::string, int> index;
    std::vector<double> weight(n);
    for (int i = 0; i < n; ++i) index[nodes[i]->id] = i;
    for (int i = 0; i < n; ++i) {
      const auto [in, out] = degrees(model, nodes[i]->id);
      weight[i] = cc_node_weight(*nodes[i], in + out);
    }
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (const auto* f : model.sequence_flows()) {
      auto a = index.find(f->source), b = index.find(f->target);
      if (a == index.end() || b == index.end()) continue;
      v[a->second][b->second] =
          std::max(v[a->second][b->second],
                   weight[a->second] * weight[b->second]);
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          v[i][j] = std::max(v[i][j], v[i][k] * v[k][j]);
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) sum += v[i][j];
    cc = sum / (static_cast<double>(n) * (n - 1));
  }
  return {gh, cfc, cc};
}

std::array<double, 3> partitionability_metrics(const ProcessModel& model) {
  // sequentiality
  int seq_total = 0, non_gateway_flows = 0;
  for (const auto* f : model.sequence_flows()) {
    ++seq_total;
    const auto* src = model.node(f->source);
    const auto* dst = model.node(f->target);
    non_gateway_flows +=
        src && dst && !is_gateway(src->kind) && !is_gateway(dst->kind);
  }
  const double sequentiality =
      seq_total == 0 ? 1.0
                     : static_cast<double>(non_gateway_flows) / seq_total;

  // separability
  const int n = static_cast<int>(model.flow_objects.size());
  const double separability =
      n > 2 ? static_cast<double>(cut_vertices(model).size()) / (n - 2) : 0.0;

  // depth: per node min of split-surplus from starts and join-surplus
  // towards ends, on the back-edge-free graph
  const SequenceGraph dag = SequenceGraph(model).without_back_edges(model);
  constexpr double kUndef = -std::numeric_limits<double>::infinity();
  std::map<std::string, double> lin, lout;
  auto contrib = [&](const std::string& id, bool forward) -> double {
    auto role = gateway_role(model, id);
    if (!role) return 0.0;
    const auto [in, out] = degrees(model, id);
    const bool split = out > 1, join = in > 1;
    if (forward) return (split ? 1.0 : 0.0) - (join ? 1.0 : 0.0);
    return (join ? 1.0 : 0.0) - (split ? 1.0 : 0.0);
  };
  std::function<double(const std::string&)> in_depth =
      [&](const std::string& id) -> double {
    auto it = lin.find(id);
    if (it != lin.end()) return it->second;
    lin[id] = kUndef;
    double best = model.node(id)->kind == NodeKind::StartEvent ? 0.0 : kUndef;
    for (const auto& p : dag.predecessors(id)) {
      const double sub = in_depth(p);
      if (sub != kUndef) best = std::max(best, sub + contrib(p, true));
    }
    lin[id] = best;
    return best;
  };
  std::function<double(const std::string&)> out_depth =
      [&](const std::string& id) -> double {
    auto it = lout.find(id);
    if (it != lout.end()) return it->second;
    lout[id] = kUndef;
    double best = model.node(id)->kind == NodeKind::EndEvent ? 0.0 : kUndef;
    for (const auto& s : dag.successors(id)) {
      const double sub = out_depth(s);
      if (sub != kUndef) best = std::max(best, sub + contrib(s, false));
    }
    lout[id] = best;
    return best;
  };
  double depth = 0.0;
  for (const auto& [id, _] : model.flow_objects) {
    const double a = in_depth(id);
    const double b = out_depth(id);
    if (a == kUndef || b == kUndef) continue;
    depth = std::max(depth, std::min(a, b));
  }
  return {sequentiality, separability, depth};
}

double concurrency_metric(const ProcessModel& model) {
  double ts = 0.0;
  for (const auto& role : gateway_roles(model)) {
    if (!role.is_split) continue;
    const NodeKind kind = model.node(role.gateway_id)->kind;
    if (kind != NodeKind::GatewayAND && kind != NodeKind::GatewayOR) continue;
    const auto [in, out] = degrees(model, role.gateway_id);
    ts += std::max(out - 1, 0);
  }
  return ts;
}

PragmaticScores pragmatic_dimension(const ProcessModel& model,
                                    const ThresholdTable& thresholds) {
  PragmaticScores out;
  const auto size = size_metrics(model);
  const auto density = density_metrics(model);
  const auto connector = connector_metrics(model);
  const auto partition = partitionability_metrics(model);

  auto& raw = out.raw;
  raw["P1"] = size[0];
  raw["P2"] = size[1];
  raw["P3"] = size[2];
  raw["P4"] = size[3];
  raw["P5"] = size[4];
  raw["P6"] = density[0];
  raw["P7"] = density[1];
  raw["P8"] = density[2];
  raw["P9"] = connector[0];
  raw["P10"] = connector[1];
  raw["P11"] = connector[2];
  raw["P12"] = partition[0];
  raw["P13"] = partition[1];
  raw["P14"] = partition[2];
  raw["P15"] = concurrency_metric(model);

  const int n_nodes = static_cast<int>(model.flow_objects.size());
  const bool has_gateways = gateway_count(model) > 0;
  for (const auto& [id, value] : raw) {
    double score;
    if (id == "P12") {
      score = value;  // sequentiality stays raw
    } else if ((id == "P7" || id == "P9") && !has_gateways) {
      score = 1.0;
    } else if ((id == "P6" || id == "P11") && n_nodes < 2) {
      score = 1.0;
    } else if (id == "P13" && n_nodes <= 2) {
      score = 1.0;
    } else {
      score = thresholds.normalize(value, id);
    }
    out.normalized[id] = score;
  }
  double sum = 0.0;
  for (const auto& [_, v] : out.normalized) sum += v;
  out.q_prag = sum / 15.0;
  return out;
}

}  // namespace bef
