#include "bef4llm/syntactic.hpp"

#include <algorithm>

#include "bef4llm/graph.hpp"

namespace bef {

namespace {

double fraction(int conforming, int total) {
  return total == 0 ? 1.0 : static_cast<double>(conforming) / total;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

std::array<double, 4> event_existence_metrics(const ProcessModel& model) {
  bool any_start = false, any_end = false;
  for (const auto& [_, fo] : model.flow_objects) {
    any_start |= fo.kind == NodeKind::StartEvent;
    any_end |= fo.kind == NodeKind::EndEvent;
  }
  int with_start = 0, with_end = 0;
  for (const auto& process : model.processes) {
    bool start = false, end = false;
    for (const auto& id : process.node_ids) {
      const auto* fo = model.node(id);
      if (!fo) continue;
      start |= fo->kind == NodeKind::StartEvent;
      end |= fo->kind == NodeKind::EndEvent;
    }
    with_start += start;
    with_end += end;
  }
  const int n_proc = static_cast<int>(model.processes.size());
  return {any_start ? 1.0 : 0.0, any_end ? 1.0 : 0.0,
          fraction(with_start, n_proc), fraction(with_end, n_proc)};
}

std::array<double, 2> flow_rule_metrics(const ProcessModel& model) {
  int seq_total = 0, seq_ok = 0, msg_total = 0, msg_ok = 0;
  for (const auto& f : model.flows) {
    if (f.kind == FlowKind::Sequence) {
      ++seq_total;
      const auto* src = model.node(f.source);
      const auto* dst = model.node(f.target);
      const bool src_ok =
          src && (src->kind == NodeKind::StartEvent ||
                  src->kind == NodeKind::IntermediateEvent ||
                  is_activity(src->kind) || is_gateway(src->kind));
      const bool dst_ok =
          dst && (dst->kind == NodeKind::EndEvent ||
                  dst->kind == NodeKind::IntermediateEvent ||
                  is_activity(dst->kind) || is_gateway(dst->kind));
      seq_ok += src_ok && dst_ok;
    } else {
      ++msg_total;
      const auto* src = model.node(f.source);
      const auto* dst = model.node(f.target);
      const bool src_ok =
          (!src && model.has_pool(f.source)) ||
          (src && (is_activity(src->kind) ||
                   ((src->kind == NodeKind::EndEvent ||
                     src->kind == NodeKind::IntermediateEvent) &&
                    src->is_message)));
      const bool dst_ok =
          (!dst && model.has_pool(f.target)) ||
          (dst && (is_activity(dst->kind) ||
                   ((dst->kind == NodeKind::StartEvent ||
                     dst->kind == NodeKind::IntermediateEvent) &&
                    dst->is_message)));
      msg_ok += src_ok && dst_ok;
    }
  }
  return {fraction(seq_ok, seq_total), fraction(msg_ok, msg_total)};
}

std::array<double, 7> degree_metrics(const ProcessModel& model) {
  int start_total = 0, start_ok = 0;
  int end_total = 0, end_ok = 0;
  int task_total = 0, task_ok = 0;
  int inter_total = 0, inter_ok = 0;
  int excp_total = 0, excp_ok = 0;
  int split_total = 0, split_ok = 0;
  int join_total = 0, join_ok = 0;

  for (const auto& [id, fo] : model.flow_objects) {
    const auto [in, out] = degrees(model, id);
    switch (fo.kind) {
      case NodeKind::StartEvent:
        ++start_total;
        start_ok += in == 0 && out == 1;
        break;
      case NodeKind::EndEvent:
        ++end_total;
        end_ok += in == 1 && out == 0;
        break;
      case NodeKind::Task:
        ++task_total;
        task_ok += in == 1 && out == 1;
        break;
      case NodeKind::IntermediateEvent:
        if (fo.attached_to) {
          ++excp_total;
          excp_ok += in == 0 && out == 1;
        } else {
          ++inter_total;
          inter_ok += in == 1 && out == 1;
        }
        break;
      default:
        break;
    }
  }
  for (const auto& role : gateway_roles(model)) {
    const auto [in, out] = degrees(model, role.gateway_id);
    if (role.is_split) {
      ++split_total;
      split_ok += in == 1 && out > 1;
    }
    if (role.is_join) {
      ++join_total;
      join_ok += in > 1 && out == 1;
    }
  }
  return {fraction(start_ok, start_total), fraction(end_ok, end_total),
          fraction(task_ok, task_total),   fraction(inter_ok, inter_total),
          fraction(excp_ok, excp_total),   fraction(split_ok, split_total),
          fraction(join_ok, join_total)};
}

double gateway_matching_metric(const ProcessModel& model) {
  int splits = 0, matched = 0;
  for (const auto& role : gateway_roles(model)) {
    if (!role.is_split) continue;
    ++splits;
    matched += find_matching_join(model, role.gateway_id).has_value();
  }
  return fraction(matched, splits);
}

std::array<double, 2> pool_and_label_metrics(const ProcessModel& model) {
  int pool_ok = 0;
  for (const auto& pool : model.pools) {
    int contained = 0;
    for (const auto& pid : pool.process_ids)
      contained += std::any_of(
          model.processes.begin(), model.processes.end(),
          [&](const Process& p) { return p.id == pid; });
    pool_ok += contained == 1;
  }
  int tasks = 0, labeled = 0;
  for (const auto& [_, fo] : model.flow_objects) {
    if (fo.kind != NodeKind::Task) continue;
    ++tasks;
    labeled += !fo.label.empty() && !blank(fo.label);
  }
  return {fraction(pool_ok, static_cast<int>(model.pools.size())),
          fraction(labeled, tasks)};
}

SyntacticScores syntactic_dimension(const ProcessModel& model) {
  SyntacticScores out;
  const auto existence = event_existence_metrics(model);
  const auto flow_rules = flow_rule_metrics(model);
  const auto degree = degree_metrics(model);
  const auto pool_label = pool_and_label_metrics(model);

  auto& s = out.scores;
  s["S1"] = existence[0];
  s["S2"] = existence[1];
  s["S3"] = existence[2];
  s["S4"] = existence[3];
  s["S5"] = flow_rules[0];
  s["S6"] = flow_rules[1];
  s["S7"] = degree[0];
  s["S8"] = degree[1];
  s["S9"] = gateway_matching_metric(model);
  s["S10"] = pool_label[0];
  s["S11"] = pool_label[1];
  s["S12"] = degree[2];
  s["S13"] = degree[3];
  s["S14"] = degree[4];
  s["S15"] = degree[5];
  s["S16"] = degree[6];

  double sum = 0.0;
  for (const auto& [_, v] : s) sum += v;
  out.q_syn = sum / 16.0;
  return out;
}

}  // namespace bef
