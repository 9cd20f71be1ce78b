#include "glcmsample/smoothing.hpp"

namespace glcmsample {

void validate(const SgConfig& config) {
  if (config.window < 3 || config.window % 2 == 0)
    throw Error("sg window must be odd and >= 3 (got " + std::to_string(config.window) + ")");
  if (config.order < 0 || config.order >= config.window)
    throw Error("sg order must be in [0, window) (got " + std::to_string(config.order) + ")");
}

Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n) {
  if (n <= 1) return 0;
  const Eigen::Index period = 2 * (n - 1);
  Eigen::Index r = i % period;
  if (r < 0) r += period;
  return r < n ? r : period - r;
}

std::vector<double> sg_smooth(const std::vector<double>& values, const SgConfig& config) {
  const Eigen::Map<const Eigen::VectorXd> in(values.data(), static_cast<Eigen::Index>(values.size()));
  const Eigen::VectorXd out = sg_smooth(in, config);
  return {out.data(), out.data() + out.size()};
}

}  // namespace glcmsample
