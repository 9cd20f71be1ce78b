#include "glcmsample/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "glcmsample/error.hpp"

namespace glcmsample {

void validate(const SamplingConfig& config) {
  if (config.n_samples < 1) throw Error("n must be >= 1");
  if (config.strategy == Strategy::glcm) validate(config.sg);
}

DiffWeights diff_abs_normalize(const Eigen::Ref<const Eigen::VectorXd>& smoothed) {
  const Eigen::Index n = smoothed.size();
  if (n < 2) throw Error("diff_abs_normalize needs at least 2 values");
  DiffWeights out;
  const Eigen::VectorXd d = (smoothed.tail(n - 1) - smoothed.head(n - 1)).cwiseAbs();
  const double total = d.sum();
  if (total > 0.0 && std::isfinite(total)) {
    out.weights = d / total;
  } else {
    out.weights = Eigen::VectorXd::Constant(n - 1, 1.0 / static_cast<double>(n - 1));
    out.degenerate = true;
  }
  return out;
}

Eigen::VectorXd build_cdf(const Eigen::Ref<const Eigen::VectorXd>& weights) {
  if (weights.size() == 0) throw Error("build_cdf: empty weight vector");
  if ((weights.array() < 0.0).any()) throw Error("build_cdf: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-9) throw Error("build_cdf: weights do not sum to 1");
  Eigen::VectorXd cdf(weights.size());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < weights.size(); ++k) {
    acc += weights(k);
    cdf(k) = std::min(acc, 1.0);
  }
  cdf(cdf.size() - 1) = 1.0;
  return cdf;
}

int inverse_cdf_index(std::span<const double> cdf, double u) {
  if (cdf.empty()) throw Error("inverse_cdf_sample: empty cdf");
  if (!(u > 0.0 && u < 1.0)) throw Error("quantile must lie in (0,1)");
  const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) return static_cast<int>(cdf.size()) - 1;
  return static_cast<int>(it - cdf.begin());
}

std::vector<int> inverse_cdf_sample(std::span<const double> cdf, std::span<const double> quantiles) {
  std::vector<int> out;
  out.reserve(quantiles.size());
  for (double u : quantiles) out.push_back(inverse_cdf_index(cdf, u));
  return out;
}

std::vector<double> midpoint_quantiles(int n) {
  std::vector<double> u(static_cast<std::size_t>(std::max(n, 0)));
  for (int m = 0; m < n; ++m) u[static_cast<std::size_t>(m)] = (m + 0.5) / n;
  return u;
}

std::vector<double> seeded_quantiles(int n, std::uint64_t seed) {
  // Built from raw 53-bit draws rather than std::uniform_real_distribution,
  // whose output is implementation defined.
  std::mt19937_64 rng(seed);
  std::vector<double> u(static_cast<std::size_t>(std::max(n, 0)));
  for (auto& v : u) v = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
  return u;
}

SamplingPlan sample_glcm(const EntropyProfile& profile, const SamplingConfig& config) {
  validate(config);
  const auto n = static_cast<Eigen::Index>(profile.values.size());
  if (n == 0 || profile.slice_indices.size() != profile.values.size())
    throw Error("sample_glcm: profile is empty or inconsistent");

  SamplingPlan plan;
  plan.volume_id = profile.volume_id;
  plan.config = config;
  plan.config.strategy = Strategy::glcm;

  Eigen::VectorXd weights;
  if (n == 1) {
    weights = Eigen::VectorXd::Ones(1);
    plan.degenerate = true;
  } else {
    const Eigen::Map<const Eigen::VectorXd> values(profile.values.data(), n);
    const DiffWeights dw = diff_abs_normalize(sg_smooth(values, config.sg));
    weights = dw.weights;
    plan.degenerate = dw.degenerate;
  }
  const Eigen::VectorXd cdf = build_cdf(weights);
  plan.weights.assign(weights.data(), weights.data() + weights.size());
  plan.cdf.assign(cdf.data(), cdf.data() + cdf.size());
  // Entry k of the weight/CDF vectors addresses profile slot k.
  plan.weight_slices.assign(profile.slice_indices.begin(), profile.slice_indices.begin() + weights.size());

  const std::vector<double> quantiles = config.quantile_mode == QuantileMode::midpoint
                                            ? midpoint_quantiles(config.n_samples)
                                            : seeded_quantiles(config.n_samples, config.seed);
  std::vector<int> slots = inverse_cdf_sample(plan.cdf, quantiles);

  if (!config.allow_duplicates) {
    std::sort(slots.begin(), slots.end());
    slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
    const auto target = static_cast<std::size_t>(std::min<Eigen::Index>(config.n_samples, n));
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    for (int s : slots) taken[static_cast<std::size_t>(s)] = true;
    // Backfill candidates cover every profile slot; slots past the weight
    // vector carry zero weight. Ties go to the lower slot.
    std::vector<int> order(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = static_cast<int>(k);
    auto slot_weight = [&](int k) { return k < weights.size() ? weights(k) : 0.0; };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return slot_weight(a) > slot_weight(b); });
    for (int k : order) {
      if (slots.size() >= target) break;
      if (!taken[static_cast<std::size_t>(k)]) {
        taken[static_cast<std::size_t>(k)] = true;
        slots.push_back(k);
      }
    }
  }
  std::sort(slots.begin(), slots.end());
  plan.selected.reserve(slots.size());
  for (int s : slots) plan.selected.push_back(profile.slice_indices[static_cast<std::size_t>(s)]);
  return plan;
}

std::vector<int> sample_center(int n_curated, int n) {
  if (n_curated < 1) throw Error("sample_center: no curated slices");
  if (n < 1) throw Error("n must be >= 1");
  const int count = std::min(n, n_curated);
  const int start = std::clamp(n_curated / 2 - n / 2, 0, n_curated - count);
  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = start + i;
  return out;
}

std::vector<int> sample_uniform(int n_curated, int n) {
  if (n_curated < 1) throw Error("sample_uniform: no curated slices");
  if (n < 1) throw Error("n must be >= 1");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t m = 0; m < n; ++m)
    out.push_back(static_cast<int>(((2 * m + 1) * n_curated) / (2 * std::int64_t{n})));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SamplingPlan make_plan(const EntropyProfile& profile, const SamplingConfig& config) {
  validate(config);
  if (config.strategy == Strategy::glcm) return sample_glcm(profile, config);
  if (profile.slice_indices.empty()) throw Error("profile is empty");
  const int n = static_cast<int>(profile.slice_indices.size());
  SamplingPlan plan;
  plan.volume_id = profile.volume_id;
  plan.config = config;
  const std::vector<int> positions =
      config.strategy == Strategy::center ? sample_center(n, config.n_samples) : sample_uniform(n, config.n_samples);
  for (int p : positions) plan.selected.push_back(profile.slice_indices[static_cast<std::size_t>(p)]);
  return plan;
}

}  // namespace glcmsample
