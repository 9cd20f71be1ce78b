#include "glcmsample/metrics.hpp"

#include <string>

#include "glcmsample/error.hpp"

namespace glcmsample {

namespace {

double ratio(std::int64_t num, std::int64_t den, const char* metric, const char* why) {
  if (den <= 0) throw Error(std::string(metric) + " is undefined: " + why);
  return static_cast<double>(num) / static_cast<double>(den);
}

double f1(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  const std::int64_t den = 2 * tp + fp + fn;
  return den == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(den);
}

}  // namespace

ConfusionCounts confusion(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw Error("length mismatch: " + std::to_string(predictions.size()) + " predictions, " +
                std::to_string(labels.size()) + " labels");
  if (predictions.empty()) throw Error("confusion: no samples");
  ConfusionCounts c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i];
    const int l = labels[i];
    if ((p != 0 && p != 1) || (l != 0 && l != 1)) throw Error("confusion: values must be 0 or 1");
    if (p == 1 && l == 1) ++c.tp;
    else if (p == 1) ++c.fp;
    else if (l == 1) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double sensitivity(const ConfusionCounts& c) {
  return ratio(c.tp, c.tp + c.fn, "sensitivity", "no positive labels (tp + fn = 0)");
}

double specificity(const ConfusionCounts& c) {
  return ratio(c.tn, c.tn + c.fp, "specificity", "no negative labels (tn + fp = 0)");
}

double macro_f1(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0 || c.tn + c.fp == 0) throw Error("macro F1 is undefined: both classes must be present");
  return 0.5 * (f1(c.tp, c.fp, c.fn) + f1(c.tn, c.fn, c.fp));
}

}  // namespace glcmsample
