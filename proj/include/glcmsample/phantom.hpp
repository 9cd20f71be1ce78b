#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "glcmsample/volume.hpp"

namespace glcmsample {

struct ConstantTexture {};

/// Two-level checkerboard with square cells of `period` pixels; the bright
/// cells sit `contrast` above the base intensity.
struct CheckerTexture {
  int period = 1;
  int contrast = 1000;
};

/// base + uniform integer noise in [0, amplitude]; every band restarts its
/// generator from `seed`.
struct NoiseTexture {
  std::uint64_t seed = 0;
  int amplitude = 100;
};

using Texture = std::variant<ConstantTexture, CheckerTexture, NoiseTexture>;

struct PhantomBand {
  int length = 1;
  Texture texture;
};

struct PhantomSpec {
  int width = 64;
  int height = 64;
  std::vector<PhantomBand> bands;
  std::uint16_t base_intensity = 1000;
};

void validate(const PhantomSpec& spec);

Volume generate_phantom(const PhantomSpec& spec, const std::string& id = "phantom");

/// Parses "3:constant,4:checker:2,5:noise:7:100" into bands.
/// Forms: N:constant | N:checker[:period[:contrast]] | N:noise[:seed[:amplitude]].
std::vector<PhantomBand> parse_bands(const std::string& text);

}  // namespace glcmsample
