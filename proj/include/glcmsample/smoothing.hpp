#pragma once

#include <vector>

#include <Eigen/Core>

#include "glcmsample/error.hpp"

namespace glcmsample {

/// Savitzky-Golay window (odd, >= 3) and polynomial order (< window).
struct SgConfig {
  int window = 3;
  int order = 2;
};

void validate(const SgConfig& config);

/// Convolution weights that evaluate, at the window centre, the degree-`order`
/// least-squares polynomial through `window` equally spaced samples.
///
/// The fit is solved in a basis of polynomials orthonormal over the window
/// positions -h..h, where the normal equations are the identity. Positions are
/// scaled to [-1, 1]; the centre value does not depend on the scale. Weight j
/// is sum_k q_k(0) q_k(x_j).
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sg_coefficients(const SgConfig& config) {
  validate(config);
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const int h = (config.window - 1) / 2;
  if (config.order == config.window - 1) {
    // The fit interpolates every sample, so the filter is exactly the identity.
    Vector identity = Vector::Zero(config.window);
    identity(h) = Scalar(1);
    return identity;
  }
  Vector x(config.window);
  for (int r = 0; r < config.window; ++r) x(r) = Scalar(r - h) / Scalar(h);

  // Orthonormal basis of the polynomial space, grown one degree at a time
  // from x * q_k and reorthogonalized against every earlier basis vector.
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> basis(config.window, config.order + 1);
  Vector q = Vector::Ones(config.window).normalized();
  Vector weights = Vector::Zero(config.window);
  for (int k = 0; k <= config.order; ++k) {
    basis.col(k) = q;
    weights += q(h) * q;
    if (k == config.order) break;
    Vector next = x.cwiseProduct(q);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j <= k; ++j) next -= basis.col(j).dot(next) * basis.col(j);
    q = next.normalized();
  }
  // The exact weights are symmetric about the centre.
  return (weights + weights.reverse()) / Scalar(2);
}

inline Eigen::VectorXd sg_coefficients(int window, int order) {
  return sg_coefficients<double>(SgConfig{window, order});
}

/// Source index for position `i` (possibly outside [0, n)) under reflection
/// about the end samples without repeating them. n == 1 maps everything to 0.
Eigen::Index reflect_index(Eigen::Index i, Eigen::Index n);

/// Savitzky-Golay smoothing with reflect-without-edge-repeat padding; output
/// has the input's length.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> sg_smooth(
    const Eigen::MatrixBase<Derived>& values, const SgConfig& config) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c = sg_coefficients<Scalar>(config);
  const Eigen::Index n = values.size();
  const Eigen::Index h = (config.window - 1) / 2;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar acc(0);
    for (Eigen::Index j = 0; j < c.size(); ++j) acc += c(j) * values(reflect_index(i + j - h, n));
    out(i) = acc;
  }
  return out;
}

std::vector<double> sg_smooth(const std::vector<double>& values, const SgConfig& config);

}  // namespace glcmsample
