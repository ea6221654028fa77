#pragma once

#include <array>
#include <map>
#include <string>

#include "bef4llm/model.hpp"

namespace bef {

enum class Direction { LowerIsBetter, HigherIsBetter };

struct UnknownMetric : std::runtime_error {
  explicit UnknownMetric(const std::string& id)
      : std::runtime_error("no thresholds for metric \"" + id + "\"") {}
};

// Per-metric thresholds t1..t4 and direction. Ascending thresholds pair
// with LowerIsBetter, descending with HigherIsBetter; loading enforces
// strict monotonicity.
class ThresholdTable {
 public:
  struct Entry {
    std::array<double, 4> t;
    Direction direction;
  };

  static ThresholdTable bundled();
  static ThresholdTable load(const std::string& path);
  static ThresholdTable parse(const std::string& tsv);

  // Five-group normalization (1.0 best .. 0.0 worst). Throws UnknownMetric.
  double normalize(double x, const std::string& metric_id) const;

  bool has(const std::string& metric_id) const {
    return entries_.count(metric_id) > 0;
  }
  const Entry& entry(const std::string& metric_id) const;

 private:
  std::map<std::string, Entry> entries_;
};

// Raw metric values P1..P15 keyed by id, plus the thresholded scores and
// their mean. P12 (sequentiality) passes through raw.
struct PragmaticScores {
  std::map<std::string, double> raw;
  std::map<std::string, double> normalized;
  double q_prag = 0.0;
};

// P1 TNN, P2 TNG, P3 TNSF, P4 TNMF, P5 diameter.
std::array<double, 5> size_metrics(const ProcessModel& model);

// P6 density, P7 average gateway degree, P8 connectivity coefficient.
std::array<double, 3> density_metrics(const ProcessModel& model);

// P9 gateway heterogeneity, P10 control-flow complexity, P11
// cross-connectivity (max-product path strength over weighted nodes).
std::array<double, 3> connector_metrics(const ProcessModel& model);

// P12 sequentiality, P13 separability, P14 depth.
std::array<double, 3> partitionability_metrics(const ProcessModel& model);

// P15 token split.
double concurrency_metric(const ProcessModel& model);

PragmaticScores pragmatic_dimension(const ProcessModel& model,
                                    const ThresholdTable& thresholds);

}  // namespace bef
