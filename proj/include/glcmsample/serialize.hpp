#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "glcmsample/curation.hpp"
#include "glcmsample/glcm.hpp"
#include "glcmsample/sampler.hpp"

namespace glcmsample {

// Manifests and plans are JSON objects with a fixed key order.

std::string to_json(const CurationManifest& manifest);
CurationManifest manifest_from_json(const std::string& text);

std::string to_json(const SamplingPlan& plan);
SamplingPlan plan_from_json(const std::string& text);

/// Profile table: `slice_index,entropy_nats[,smoothed_nats]`, %.17g values.
struct ProfileTable {
  std::vector<int> slice_indices;
  std::vector<double> entropy;
  std::optional<std::vector<double>> smoothed;
};

std::string to_csv(const ProfileTable& table);
ProfileTable profile_from_csv(const std::string& text);

ProfileTable to_table(const EntropyProfile& profile);
/// Profile carrying only values and indices; the GLCM config is not stored in CSV.
EntropyProfile to_profile(const ProfileTable& table, const std::string& volume_id);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string to_string(Strategy strategy);
std::string to_string(QuantileMode mode);
std::string to_string(MaskSource source);
std::string to_string(RangeMode mode);
Strategy parse_strategy(const std::string& text);
QuantileMode parse_quantile_mode(const std::string& text);
RangeMode parse_range_mode(const std::string& text);

/// "%.17g".
std::string format_real(double value);

}  // namespace glcmsample
