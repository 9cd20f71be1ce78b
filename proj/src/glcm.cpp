#include "glcmsample/glcm.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "glcmsample/error.hpp"

namespace glcmsample {

void validate(const GlcmConfig& config, int width, int height) {
  if (config.levels < 2) throw Error("levels must be >= 2");
  if (config.offset.dx == 0 && config.offset.dy == 0) throw Error("offset must not be (0,0)");
  if (width > 0 && std::abs(config.offset.dx) >= width)
    throw Error("offset dx=" + std::to_string(config.offset.dx) + " does not fit width " + std::to_string(width));
  if (height > 0 && std::abs(config.offset.dy) >= height)
    throw Error("offset dy=" + std::to_string(config.offset.dy) + " does not fit height " + std::to_string(height));
}

std::int32_t quantize_value(std::uint16_t value, IntensityRange range, int levels) {
  if (range.min >= range.max) return 0;
  if (value <= range.min) return 0;
  if (value > range.max) return levels - 1;
  const std::int64_t width = std::int64_t{range.max} - range.min + 1;
  const std::int64_t level = (std::int64_t{value} - range.min) * levels / width;
  return static_cast<std::int32_t>(std::min<std::int64_t>(levels - 1, level));
}

LevelGrid quantize(const Slice& slice, IntensityRange range, int levels) {
  if (levels < 2) throw Error("levels must be >= 2");
  if (range.min > range.max) throw Error("quantize: range min exceeds max");
  LevelGrid out(slice.rows(), slice.cols());
  for (Eigen::Index i = 0; i < slice.size(); ++i) out.data()[i] = quantize_value(slice.data()[i], range, levels);
  return out;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> cooccurrence_counts(const LevelGrid& levels,
                                                                                int n_levels, Offset offset,
                                                                                bool symmetric) {
  if (n_levels < 2) throw Error("levels must be >= 2");
  const Eigen::Index rows = levels.rows();
  const Eigen::Index cols = levels.cols();
  // Reference pixels q = (x, y) whose neighbour (x + dx, y + dy) is inside.
  const Eigen::Index x0 = std::max<Eigen::Index>(0, -offset.dx);
  const Eigen::Index x1 = std::min<Eigen::Index>(cols, cols - offset.dx);
  const Eigen::Index y0 = std::max<Eigen::Index>(0, -offset.dy);
  const Eigen::Index y1 = std::min<Eigen::Index>(rows, rows - offset.dy);

  std::vector<std::int64_t> flat(static_cast<std::size_t>(n_levels) * n_levels, 0);
  for (Eigen::Index y = y0; y < y1; ++y) {
    const std::int32_t* ref = levels.data() + y * cols;
    const std::int32_t* nbr = levels.data() + (y + offset.dy) * cols + offset.dx;
    for (Eigen::Index x = x0; x < x1; ++x) {
      const std::int32_t a = ref[x];
      const std::int32_t b = nbr[x];
      if (a < 0 || b < 0 || a >= n_levels || b >= n_levels) throw Error("cooccurrence: level out of range");
      ++flat[static_cast<std::size_t>(a) * n_levels + b];
    }
  }
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts(n_levels, n_levels);
  for (int a = 0; a < n_levels; ++a)
    for (int b = 0; b < n_levels; ++b) counts(a, b) = flat[static_cast<std::size_t>(a) * n_levels + b];
  if (symmetric) counts += counts.transpose().eval();
  return counts;
}

Glcm cooccurrence(const LevelGrid& levels, int n_levels, Offset offset, bool symmetric) {
  if (offset.dx == 0 && offset.dy == 0) throw Error("offset must not be (0,0)");
  const auto counts = cooccurrence_counts(levels, n_levels, offset, symmetric);
  const std::int64_t total = counts.sum();
  if (total == 0)
    throw Error("offset (" + std::to_string(offset.dx) + "," + std::to_string(offset.dy) +
                ") exceeds the grid extent: no pixel pairs");
  Glcm g;
  g.p = counts.cast<double>() / static_cast<double>(total);
  return g;
}

double slice_entropy(const Slice& slice, IntensityRange range, const GlcmConfig& config) {
  const LevelGrid levels = quantize(slice, range, config.levels);
  return glcm_entropy(cooccurrence(levels, config.levels, config.offset, config.symmetric));
}

EntropyProfile entropy_profile(const Volume& volume, const CurationManifest& manifest, const GlcmConfig& config,
                               unsigned threads) {
  validate(config, volume.width(), volume.height());
  if (static_cast<int>(manifest.entries.size()) != volume.n_slices())
    throw Error("manifest covers " + std::to_string(manifest.entries.size()) + " slices, volume has " +
                std::to_string(volume.n_slices()));
  EntropyProfile profile;
  profile.volume_id = volume.id();
  profile.config = config;
  profile.slice_indices = manifest.kept_indices();
  if (profile.slice_indices.empty()) throw Error("no kept slices: nothing to profile");
  for (std::size_t k = 1; k < profile.slice_indices.size(); ++k)
    if (profile.slice_indices[k] <= profile.slice_indices[k - 1]) throw Error("manifest entries are not ascending");
  if (profile.slice_indices.back() >= volume.n_slices()) throw Error("manifest index out of range");

  const std::size_t n = profile.slice_indices.size();
  profile.values.assign(n, 0.0);
  auto compute = [&](std::size_t k) {
    const Slice& s = volume.slice(profile.slice_indices[k]);
    const IntensityRange range = config.range_mode == RangeMode::global ? volume.global_range() : intensity_range(s);
    profile.values[k] = slice_entropy(s, range, config);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) compute(k);
    return profile;
  }
  // Each slot is written by exactly one worker, so the result is independent
  // of scheduling.
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < n && !failed; k = next++) {
          try {
            compute(k);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
  }
  if (failure) std::rethrow_exception(failure);
  return profile;
}

}  // namespace glcmsample
