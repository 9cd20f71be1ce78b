#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "glcmsample/curation.hpp"
#include "glcmsample/volume.hpp"

namespace glcmsample {

struct Offset {
  int dx = 1;
  int dy = 0;

  bool operator==(const Offset&) const = default;
};

enum class RangeMode { global, per_slice };

struct GlcmConfig {
  int levels = 32;
  Offset offset{1, 0};
  bool symmetric = true;
  RangeMode range_mode = RangeMode::global;
};

/// Throws unless levels >= 2, offset != (0,0) and the offset fits a
/// width x height grid (pass 0 to skip the extent check).
void validate(const GlcmConfig& config, int width = 0, int height = 0);

/// Normalized co-occurrence matrix, p(a, b) for reference level a and
/// neighbour level b.
struct Glcm {
  Eigen::MatrixXd p;

  int levels() const { return static_cast<int>(p.rows()); }
};

/// level(v) = min(L-1, floor((v - lo) * L / (hi - lo + 1))); values outside
/// [lo, hi] clamp, lo == hi maps to 0.
std::int32_t quantize_value(std::uint16_t value, IntensityRange range, int levels);
LevelGrid quantize(const Slice& slice, IntensityRange range, int levels);

/// Raw pair counts; every pixel q with q + offset inside the grid adds one
/// at (level(q), level(q + offset)). Symmetric mode adds the transpose.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> cooccurrence_counts(
    const LevelGrid& levels, int n_levels, Offset offset, bool symmetric);

/// Throws if no pixel pair fits the grid.
Glcm cooccurrence(const LevelGrid& levels, int n_levels, Offset offset, bool symmetric);

/// Shannon entropy in nats of a normalized matrix; zero cells contribute 0.
template <typename Derived>
typename Derived::Scalar glcm_entropy(const Eigen::DenseBase<Derived>& p) {
  using Scalar = typename Derived::Scalar;
  Scalar h(0);
  for (Eigen::Index j = 0; j < p.cols(); ++j)
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      const Scalar v = p(i, j);
      if (v > Scalar(0)) h -= v * std::log(v);
    }
  return h;
}

inline double glcm_entropy(const Glcm& glcm) { return glcm_entropy(glcm.p); }

/// GLCM entropy of a single slice under `config` and quantization `range`.
double slice_entropy(const Slice& slice, IntensityRange range, const GlcmConfig& config);

struct EntropyProfile {
  std::string volume_id;
  std::vector<double> values;
  std::vector<int> slice_indices;
  GlcmConfig config;

  std::size_t size() const { return values.size(); }
};

/// Entropy of each kept slice in ascending slice order. `threads` = 0 uses the
/// hardware concurrency; the result does not depend on it.
EntropyProfile entropy_profile(const Volume& volume, const CurationManifest& manifest,
                               const GlcmConfig& config = {}, unsigned threads = 1);

}  // namespace glcmsample
