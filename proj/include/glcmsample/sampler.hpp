#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "glcmsample/glcm.hpp"
#include "glcmsample/smoothing.hpp"

namespace glcmsample {

enum class Strategy { glcm, center, uniform };
enum class QuantileMode { midpoint, seeded };

struct SamplingConfig {
  int n_samples = 16;
  Strategy strategy = Strategy::glcm;
  SgConfig sg{3, 2};
  QuantileMode quantile_mode = QuantileMode::midpoint;
  std::uint64_t seed = 0;
  bool allow_duplicates = false;
};

void validate(const SamplingConfig& config);

struct SamplingPlan {
  std::string volume_id;
  SamplingConfig config;
  /// Original volume slice indices, ascending (unless duplicates are allowed,
  /// in which case they are still sorted but may repeat).
  std::vector<int> selected;
  /// glcm strategy only: weights[k] belongs to slice weight_slices[k].
  std::vector<double> weights;
  std::vector<int> weight_slices;
  std::vector<double> cdf;
  bool degenerate = false;
};

struct DiffWeights {
  Eigen::VectorXd weights;
  bool degenerate = false;
};

/// |e_k - e_{k-1}| for k = 1..n-1, normalized to sum 1. An all-zero
/// derivative yields uniform weights and the degenerate flag.
DiffWeights diff_abs_normalize(const Eigen::Ref<const Eigen::VectorXd>& smoothed);

/// Running sum of `weights` with the final entry pinned to 1.
Eigen::VectorXd build_cdf(const Eigen::Ref<const Eigen::VectorXd>& weights);

/// Smallest k with cdf[k] >= u, for every u.
std::vector<int> inverse_cdf_sample(std::span<const double> cdf, std::span<const double> quantiles);
int inverse_cdf_index(std::span<const double> cdf, double u);

/// u_m = (m + 0.5) / n.
std::vector<double> midpoint_quantiles(int n);

/// n reproducible draws in (0, 1) from a 64-bit Mersenne Twister.
std::vector<double> seeded_quantiles(int n, std::uint64_t seed);

/// Full adaptive chain: smooth, differentiate, normalize, CDF, inverse-CDF.
SamplingPlan sample_glcm(const EntropyProfile& profile, const SamplingConfig& config);

/// Contiguous block of min(n, n_curated) positions around n_curated / 2.
std::vector<int> sample_center(int n_curated, int n);

/// floor((m + 0.5) * n_curated / n) for m < n, deduplicated ascending.
std::vector<int> sample_uniform(int n_curated, int n);

/// Dispatches on config.strategy; baseline strategies index profile positions.
SamplingPlan make_plan(const EntropyProfile& profile, const SamplingConfig& config);

}  // namespace glcmsample
