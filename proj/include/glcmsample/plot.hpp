#pragma once

#include <optional>
#include <string>

#include "glcmsample/sampler.hpp"
#include "glcmsample/serialize.hpp"

namespace glcmsample {

inline constexpr int kPlotWidth = 960;
inline constexpr int kPlotHeight = 480;

/// Standalone SVG of an entropy profile: raw polyline, smoothed polyline when
/// present, one vertical marker per distinct selected slice and the plan's CDF
/// scaled to the plot height.
std::string render_profile_svg(const ProfileTable& table, const std::optional<SamplingPlan>& plan);

}  // namespace glcmsample
