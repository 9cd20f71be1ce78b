#include "glcmsample/phantom.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "glcmsample/error.hpp"

namespace glcmsample {

namespace {

std::uint16_t clamp_u16(std::int64_t v) {
  return static_cast<std::uint16_t>(std::clamp<std::int64_t>(v, 0, 65535));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

template <typename T>
T parse_number(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return static_cast<T>(v);
  } catch (const std::exception&) {
    throw Error("invalid " + what + " '" + s + "'");
  }
}

}  // namespace

void validate(const PhantomSpec& spec) {
  if (spec.width < 2 || spec.height < 2) throw Error("phantom slices must be at least 2x2");
  if (spec.bands.empty()) throw Error("phantom needs at least one band");
  for (const PhantomBand& band : spec.bands) {
    if (band.length < 1) throw Error("phantom band length must be >= 1");
    if (const auto* c = std::get_if<CheckerTexture>(&band.texture)) {
      if (c->period < 1) throw Error("checker period must be >= 1");
      if (c->contrast < 0) throw Error("checker contrast must be >= 0");
    }
    if (const auto* n = std::get_if<NoiseTexture>(&band.texture); n && n->amplitude < 0)
      throw Error("noise amplitude must be >= 0");
  }
}

Volume generate_phantom(const PhantomSpec& spec, const std::string& id) {
  validate(spec);
  std::vector<Slice> slices;
  const std::uint16_t base = spec.base_intensity;
  for (const PhantomBand& band : spec.bands) {
    std::visit(
        [&](const auto& texture) {
          using T = std::decay_t<decltype(texture)>;
          if constexpr (std::is_same_v<T, ConstantTexture>) {
            for (int i = 0; i < band.length; ++i) slices.push_back(Slice::Constant(spec.height, spec.width, base));
          } else if constexpr (std::is_same_v<T, CheckerTexture>) {
            Slice s(spec.height, spec.width);
            const std::uint16_t bright = clamp_u16(std::int64_t{base} + texture.contrast);
            for (int y = 0; y < spec.height; ++y)
              for (int x = 0; x < spec.width; ++x)
                s(y, x) = ((x / texture.period + y / texture.period) % 2 == 0) ? base : bright;
            for (int i = 0; i < band.length; ++i) slices.push_back(s);
          } else {
            std::mt19937_64 rng(texture.seed);
            // Modulo keeps the stream identical across standard libraries.
            const std::uint64_t span = static_cast<std::uint64_t>(texture.amplitude) + 1;
            for (int i = 0; i < band.length; ++i) {
              Slice s(spec.height, spec.width);
              for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x)
                  s(y, x) = clamp_u16(std::int64_t{base} + static_cast<std::int64_t>(rng() % span));
              slices.push_back(std::move(s));
            }
          }
        },
        band.texture);
  }
  return Volume(id, std::move(slices), SampleType::u16);
}

std::vector<PhantomBand> parse_bands(const std::string& text) {
  if (text.empty()) throw Error("--bands must list at least one band");
  std::vector<PhantomBand> bands;
  for (const std::string& item : split(text, ',')) {
    const std::vector<std::string> f = split(item, ':');
    if (f.size() < 2) throw Error("invalid band '" + item + "' (expected LENGTH:TEXTURE)");
    PhantomBand band;
    band.length = parse_number<int>(f[0], "band length");
    const std::string& kind = f[1];
    if (kind == "constant") {
      if (f.size() != 2) throw Error("invalid band '" + item + "'");
      band.texture = ConstantTexture{};
    } else if (kind == "checker") {
      if (f.size() > 4) throw Error("invalid band '" + item + "'");
      CheckerTexture c;
      if (f.size() > 2) c.period = parse_number<int>(f[2], "checker period");
      if (f.size() > 3) c.contrast = parse_number<int>(f[3], "checker contrast");
      band.texture = c;
    } else if (kind == "noise") {
      if (f.size() > 4) throw Error("invalid band '" + item + "'");
      NoiseTexture n;
      if (f.size() > 2) n.seed = parse_number<std::uint64_t>(f[2], "noise seed");
      if (f.size() > 3) n.amplitude = parse_number<int>(f[3], "noise amplitude");
      band.texture = n;
    } else {
      throw Error("unknown texture '" + kind + "'");
    }
    bands.push_back(band);
  }
  return bands;
}

}  // namespace glcmsample
