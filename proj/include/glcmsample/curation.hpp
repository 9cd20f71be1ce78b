#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glcmsample/volume.hpp"

namespace glcmsample {

/// Lung mask for one slice, true = lung.
using Mask = BinaryGrid;

enum class MaskSource { external, fallback };

struct CurationEntry {
  int slice_index = 0;
  double lung_fraction = 0.0;
  bool kept = false;
  MaskSource mask_source = MaskSource::fallback;
};

struct CurationManifest {
  std::string volume_id;
  double threshold_fraction = 0.05;
  std::vector<CurationEntry> entries;

  std::vector<int> kept_indices() const;
  int kept_count() const;
};

inline constexpr double kDefaultLungThreshold = 0.05;

/// Lung-fraction thresholds swept when tuning curation, as fractions.
inline constexpr std::array<double, 6> kThresholdPresets = {0.005, 0.01, 0.02, 0.03, 0.04, 0.05};

/// Fraction of set pixels over the whole frame.
double lung_fraction(const Mask& mask);

/// Keeps slice i iff lung_fraction(mask_i) >= threshold. Without masks the
/// fallback segmenter supplies them.
CurationManifest curate_volume(const Volume& volume, const std::optional<std::vector<Mask>>& masks,
                               double threshold_fraction = kDefaultLungThreshold);

/// Manifest that keeps every slice of `volume` (threshold 0, no masks computed).
CurationManifest keep_all_manifest(const Volume& volume);

using Histogram256 = std::array<std::uint64_t, 256>;

struct OtsuResult {
  int threshold = 0;
  /// No threshold separates the histogram (between-class variance is 0 everywhere).
  bool degenerate = false;
};

/// Exhaustive Otsu scan; class 0 is [0, t], class 1 is (t, 255]. Ties go to
/// the smallest t.
OtsuResult otsu(const Histogram256& histogram);
inline int otsu_threshold(const Histogram256& histogram) { return otsu(histogram).threshold; }

struct Components {
  /// 0 = background, components labelled 1..n in raster order of first pixel.
  Eigen::Array<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> labels;
  /// areas[k] is the pixel count of label k + 1.
  std::vector<std::int64_t> areas;
  /// touches_border[k] for label k + 1.
  std::vector<bool> touches_border;
};

/// 4-connected labelling.
Components connected_components(const BinaryGrid& binary);

/// Classical stand-in for a learned lung segmenter: rescale to 8 bits with
/// `global_range`, Otsu, keep the dark class, drop border-touching
/// components and components under 0.5% of the frame.
Mask fallback_lung_mask(const Slice& slice, IntensityRange global_range);

}  // namespace glcmsample
