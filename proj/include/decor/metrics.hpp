#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "decor/lock.hpp"
#include "decor/models.hpp"

namespace decor {

struct OverheadRecord {
  std::string circuit;
  Scheme scheme = Scheme::Xbi;
  std::size_t gates_original = 0;
  std::size_t gates_locked = 0;
  double overhead_percent = 0.0;
};

/// Two-input-equivalent gate counts; ports are not counted.
OverheadRecord gate_overhead(const Circuit& original, const LockedCircuit& locked);
OverheadRecord gate_overhead(const Circuit& original, const Circuit& locked, Scheme scheme);

struct PcaPoint {
  double pc1 = 0.0;
  double pc2 = 0.0;
  std::uint8_t label = 0;
};

struct PcaProjection {
  std::vector<PcaPoint> points;
  /// Share of total variance carried by each component.
  double explained[2] = {0.0, 0.0};
  /// Unit-length components in one-hot feature space.
  std::vector<double> components[2];
  /// Covariance rank below 2: the second component is zeroed.
  bool degenerate = false;
};

/// Top two principal components of one-hot expanded features, by power
/// iteration with deflation. Each component is oriented so its largest
/// coordinate is positive.
PcaProjection pca_top2(const TrainingSet& ts);

/// One-hot expansion used by pca_top2.
std::vector<double> one_hot(const std::vector<std::uint8_t>& feature);

/// Best accuracy of a rule `value > threshold => label` (either polarity).
double best_threshold_accuracy(const std::vector<double>& values, const std::vector<std::uint8_t>& labels);

}  // namespace decor
