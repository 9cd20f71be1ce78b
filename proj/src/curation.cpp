#include "glcmsample/curation.hpp"

#include <algorithm>
#include <cmath>

#include "glcmsample/error.hpp"

namespace glcmsample {

std::vector<int> CurationManifest::kept_indices() const {
  std::vector<int> out;
  for (const CurationEntry& e : entries)
    if (e.kept) out.push_back(e.slice_index);
  return out;
}

int CurationManifest::kept_count() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const CurationEntry& e) { return e.kept; }));
}

double lung_fraction(const Mask& mask) {
  if (mask.size() == 0) throw Error("lung_fraction: empty mask");
  return static_cast<double>(mask.count()) / static_cast<double>(mask.size());
}

CurationManifest curate_volume(const Volume& volume, const std::optional<std::vector<Mask>>& masks,
                               double threshold_fraction) {
  if (!(threshold_fraction >= 0.0 && threshold_fraction <= 1.0))
    throw Error("threshold must be in [0,1]");
  if (masks) {
    if (static_cast<int>(masks->size()) != volume.n_slices())
      throw Error("mask count mismatch: " + std::to_string(masks->size()) + " masks for " +
                  std::to_string(volume.n_slices()) + " slices");
    for (std::size_t i = 0; i < masks->size(); ++i)
      if ((*masks)[i].rows() != volume.height() || (*masks)[i].cols() != volume.width())
        throw Error("mask dimension mismatch at slice " + std::to_string(i));
  }
  CurationManifest manifest;
  manifest.volume_id = volume.id();
  manifest.threshold_fraction = threshold_fraction;
  manifest.entries.resize(static_cast<std::size_t>(volume.n_slices()));
  for (int i = 0; i < volume.n_slices(); ++i) {
    CurationEntry& e = manifest.entries[static_cast<std::size_t>(i)];
    e.slice_index = i;
    if (masks) {
      e.lung_fraction = lung_fraction((*masks)[static_cast<std::size_t>(i)]);
      e.mask_source = MaskSource::external;
    } else {
      e.lung_fraction = lung_fraction(fallback_lung_mask(volume.slice(i), volume.global_range()));
      e.mask_source = MaskSource::fallback;
    }
    e.kept = e.lung_fraction >= threshold_fraction;
  }
  return manifest;
}

CurationManifest keep_all_manifest(const Volume& volume) {
  CurationManifest manifest;
  manifest.volume_id = volume.id();
  manifest.threshold_fraction = 0.0;
  for (int i = 0; i < volume.n_slices(); ++i)
    manifest.entries.push_back({i, 1.0, true, MaskSource::external});
  return manifest;
}

OtsuResult otsu(const Histogram256& histogram) {
  double total = 0.0;
  double weighted = 0.0;
  for (int i = 0; i < 256; ++i) {
    total += static_cast<double>(histogram[i]);
    weighted += i * static_cast<double>(histogram[i]);
  }
  if (total <= 0.0) throw Error("otsu: empty histogram");

  // Empty bins leave the class sums untouched, so equal partitions produce
  // bit-identical variances and the strict comparison keeps the smallest t.
  OtsuResult best{0, true};
  double best_var = 0.0;
  double w0 = 0.0;
  double sum0 = 0.0;
  for (int t = 0; t < 256; ++t) {
    w0 += static_cast<double>(histogram[t]);
    sum0 += t * static_cast<double>(histogram[t]);
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (weighted - sum0) / w1;
    const double var = (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best = {t, false};
    }
  }
  return best;
}

Components connected_components(const BinaryGrid& binary) {
  Components out;
  const Eigen::Index rows = binary.rows();
  const Eigen::Index cols = binary.cols();
  out.labels = decltype(out.labels)::Zero(rows, cols);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> stack;
  std::int32_t next = 0;
  for (Eigen::Index y = 0; y < rows; ++y)
    for (Eigen::Index x = 0; x < cols; ++x) {
      if (!binary(y, x) || out.labels(y, x) != 0) continue;
      const std::int32_t label = ++next;
      std::int64_t area = 0;
      bool border = false;
      out.labels(y, x) = label;
      stack.emplace_back(y, x);
      while (!stack.empty()) {
        const auto [cy, cx] = stack.back();
        stack.pop_back();
        ++area;
        border = border || cy == 0 || cx == 0 || cy == rows - 1 || cx == cols - 1;
        const std::pair<Eigen::Index, Eigen::Index> nbrs[4] = {{cy - 1, cx}, {cy + 1, cx}, {cy, cx - 1}, {cy, cx + 1}};
        for (const auto& [ny, nx] : nbrs) {
          if (ny < 0 || nx < 0 || ny >= rows || nx >= cols) continue;
          if (!binary(ny, nx) || out.labels(ny, nx) != 0) continue;
          out.labels(ny, nx) = label;
          stack.emplace_back(ny, nx);
        }
      }
      out.areas.push_back(area);
      out.touches_border.push_back(border);
    }
  return out;
}

Mask fallback_lung_mask(const Slice& slice, IntensityRange global_range) {
  if (slice.rows() < 2 || slice.cols() < 2) throw Error("fallback_lung_mask: slice must be at least 2x2");
  const std::int64_t lo = global_range.min;
  const std::int64_t span = std::int64_t{global_range.max} - lo;

  Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> scaled(slice.rows(), slice.cols());
  Histogram256 hist{};
  for (Eigen::Index y = 0; y < slice.rows(); ++y)
    for (Eigen::Index x = 0; x < slice.cols(); ++x) {
      std::int64_t v = 0;
      if (span > 0) {
        const std::int64_t d = std::clamp<std::int64_t>(std::int64_t{slice(y, x)} - lo, 0, span);
        v = (d * 255 + span / 2) / span;
      }
      scaled(y, x) = static_cast<std::uint8_t>(v);
      ++hist[static_cast<std::size_t>(v)];
    }

  const OtsuResult threshold = otsu(hist);
  Mask mask = Mask::Zero(slice.rows(), slice.cols());
  if (threshold.degenerate) return mask;

  // Lower Otsu class = dark = air/lung.
  const BinaryGrid foreground = scaled <= static_cast<std::uint8_t>(threshold.threshold);
  const Components cc = connected_components(foreground);
  const double min_area = 0.005 * static_cast<double>(slice.size());
  std::vector<bool> keep(cc.areas.size());
  for (std::size_t k = 0; k < cc.areas.size(); ++k)
    keep[k] = !cc.touches_border[k] && static_cast<double>(cc.areas[k]) >= min_area;
  for (Eigen::Index y = 0; y < mask.rows(); ++y)
    for (Eigen::Index x = 0; x < mask.cols(); ++x) {
      const std::int32_t l = cc.labels(y, x);
      mask(y, x) = l > 0 && keep[static_cast<std::size_t>(l - 1)];
    }
  return mask;
}

}  // namespace glcmsample
