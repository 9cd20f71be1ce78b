#include "glcmsample/volume.hpp"

#include <algorithm>

#include "glcmsample/error.hpp"

namespace glcmsample {

IntensityRange intensity_range(const Slice& slice) {
  return {slice.minCoeff(), slice.maxCoeff()};
}

Volume::Volume(std::string id, std::vector<Slice> slices, SampleType sample_type)
    : id_(std::move(id)), slices_(std::move(slices)), sample_type_(sample_type) {
  if (slices_.empty()) throw Error("volume '" + id_ + "' has no slices");
  const auto rows = slices_.front().rows();
  const auto cols = slices_.front().cols();
  if (rows < 2 || cols < 2)
    throw Error("volume '" + id_ + "': slices must be at least 2x2");
  range_ = intensity_range(slices_.front());
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    const Slice& s = slices_[i];
    if (s.rows() != rows || s.cols() != cols)
      throw Error("volume '" + id_ + "': mixed dimensions at slice " + std::to_string(i));
    const IntensityRange r = intensity_range(s);
    range_.min = std::min(range_.min, r.min);
    range_.max = std::max(range_.max, r.max);
  }
}

bool Volume::operator==(const Volume& other) const {
  if (id_ != other.id_ || slices_.size() != other.slices_.size() || range_ != other.range_)
    return false;
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    if (slices_[i].rows() != other.slices_[i].rows() ||
        slices_[i].cols() != other.slices_[i].cols() || slices_[i] != other.slices_[i])
      return false;
  }
  return true;
}

}  // namespace glcmsample
