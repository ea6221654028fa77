#pragma once

#include <array>
#include <map>
#include <string>

#include "bef4llm/model.hpp"

namespace bef {

// The 16 rule metrics S1..S16 plus their mean. Fractions of conforming
// elements; metrics with an empty denominator are vacuously 1.0.
struct SyntacticScores {
  std::map<std::string, double> scores;  // keys S1..S16
  double q_syn = 0.0;
};

// S1/S2 existence of start/end events, S3/S4 per-process existence.
std::array<double, 4> event_existence_metrics(const ProcessModel& model);

// S5 sequence-flow and S6 message-flow connection rules.
std::array<double, 2> flow_rule_metrics(const ProcessModel& model);

// Degree rules: S7 start (0,1), S8 end (1,0), S12 task (1,1), S13
// non-exception intermediate (1,1), S14 exception (0,1), S15 split
// (1,>1), S16 join (>1,1).
std::array<double, 7> degree_metrics(const ProcessModel& model);

// S9: fraction of split gateways with a matching join.
double gateway_matching_metric(const ProcessModel& model);

// S10 one process per pool, S11 labeled tasks.
std::array<double, 2> pool_and_label_metrics(const ProcessModel& model);

SyntacticScores syntactic_dimension(const ProcessModel& model);

}  // namespace bef
