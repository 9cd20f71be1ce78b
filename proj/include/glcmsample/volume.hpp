#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace glcmsample {

/// One 2D slice. Rows index y (height), columns index x (width).
/// Sources of any bit depth are widened to 16 bits.
using Slice = Eigen::Matrix<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Binary grid, true = foreground. Same row/column convention as Slice.
using BinaryGrid = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Quantized gray levels of a slice.
using LevelGrid = Eigen::Array<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct IntensityRange {
  std::uint16_t min = 0;
  std::uint16_t max = 0;

  bool operator==(const IntensityRange&) const = default;
};

/// On-disk sample type a volume came from (and is written back as).
enum class SampleType { u8, u16 };

IntensityRange intensity_range(const Slice& slice);

/// Immutable ordered stack of equally sized slices.
class Volume {
public:
  /// Throws Error if the slices are empty, smaller than 2x2 or of mixed size.
  Volume(std::string id, std::vector<Slice> slices, SampleType sample_type = SampleType::u16);

  const std::string& id() const { return id_; }
  int width() const { return static_cast<int>(slices_.front().cols()); }
  int height() const { return static_cast<int>(slices_.front().rows()); }
  int n_slices() const { return static_cast<int>(slices_.size()); }
  const Slice& slice(int index) const { return slices_.at(static_cast<std::size_t>(index)); }
  const std::vector<Slice>& slices() const { return slices_; }
  IntensityRange global_range() const { return range_; }
  SampleType sample_type() const { return sample_type_; }

  bool operator==(const Volume& other) const;

private:
  std::string id_;
  std::vector<Slice> slices_;
  IntensityRange range_;
  SampleType sample_type_;
};

}  // namespace glcmsample
