#pragma once

#include <cstdint>
#include <span>

namespace glcmsample {

/// Binary confusion counts; positive = COVID.
struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  /// The same counts with the positive class relabelled as negative.
  ConfusionCounts swapped() const { return {tn, fn, tp, fp}; }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels);

// Each throws Error("<metric> is undefined: ...") on a zero denominator.
double sensitivity(const ConfusionCounts& c);
double specificity(const ConfusionCounts& c);
double macro_f1(const ConfusionCounts& c);

}  // namespace glcmsample
