#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "glcmsample/curation.hpp"
#include "glcmsample/error.hpp"
#include "oracles.hpp"

using namespace glcmsample;

namespace {

Mask mask_with_bits(int w, int h, int bits) {
  Mask m = Mask::Zero(h, w);
  for (int i = 0; i < bits; ++i) m.data()[i] = true;
  return m;
}

}  // namespace

TEST_CASE("lung_fraction") {
  CHECK(lung_fraction(Mask::Zero(10, 10)) == 0.0);
  CHECK(lung_fraction(Mask::Ones(10, 10)) == 1.0);
  CHECK(lung_fraction(mask_with_bits(10, 10, 5)) == doctest::Approx(0.05).epsilon(1e-15));
  CHECK_THROWS_AS(lung_fraction(Mask()), Error);

  std::mt19937 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int w = 2 + static_cast<int>(rng() % 30), h = 2 + static_cast<int>(rng() % 30);
    Mask m(h, w);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng() % 3 == 0;
    const double scaled = lung_fraction(m) * w * h;
    CHECK(scaled == doctest::Approx(static_cast<double>(m.count())).epsilon(1e-12));
    CHECK(std::round(scaled) == static_cast<double>(m.count()));
  }
}

TEST_CASE("curate_volume applies the >= rule") {
  const Volume v("v", std::vector<Slice>(4, Slice::Zero(10, 10)));
  const std::vector<Mask> masks = {mask_with_bits(10, 10, 0), mask_with_bits(10, 10, 4), mask_with_bits(10, 10, 5),
                                   mask_with_bits(10, 10, 20)};
  const CurationManifest m = curate_volume(v, masks, 0.05);
  REQUIRE(m.entries.size() == 4);
  CHECK(m.kept_indices() == std::vector<int>{2, 3});
  for (int i = 0; i < 4; ++i) {
    CHECK(m.entries[i].slice_index == i);
    CHECK(m.entries[i].mask_source == MaskSource::external);
  }
  CHECK(curate_volume(v, masks, 0.0).kept_count() == 4);
  CHECK(curate_volume(v, masks, 1.0).kept_count() == 0);

  std::vector<Mask> with_full = masks;
  with_full[1] = Mask::Ones(10, 10);
  CHECK(curate_volume(v, with_full, 1.0).kept_indices() == std::vector<int>{1});

  CHECK_THROWS_WITH_AS(curate_volume(v, std::vector<Mask>(3, Mask::Zero(10, 10)), 0.05),
                       doctest::Contains("mask count mismatch"), Error);
  CHECK_THROWS_WITH_AS(curate_volume(v, std::vector<Mask>(4, Mask::Zero(9, 10)), 0.05),
                       doctest::Contains("mask dimension mismatch"), Error);
  CHECK_THROWS_AS(curate_volume(v, masks, 1.5), Error);
  CHECK_THROWS_AS(curate_volume(v, masks, -0.1), Error);
}

TEST_CASE("curation is monotone in the threshold") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const Volume v("v", std::vector<Slice>(static_cast<std::size_t>(n), Slice::Zero(8, 8)));
    std::vector<Mask> masks;
    for (int i = 0; i < n; ++i) masks.push_back(mask_with_bits(8, 8, static_cast<int>(rng() % 65)));
    std::vector<bool> prev(static_cast<std::size_t>(n), true);
    for (double t = 0.0; t <= 1.0; t += 1.0 / 64) {
      const CurationManifest m = curate_volume(v, masks, t);
      for (int i = 0; i < n; ++i) {
        if (!prev[i]) CHECK_FALSE(m.entries[i].kept);
        prev[i] = m.entries[i].kept;
      }
    }
  }
}

TEST_CASE("otsu: exhaustive scan with smallest-t ties") {
  Histogram256 h{};
  h[10] = 50;
  h[200] = 50;
  CHECK(otsu_threshold(h) == 10);
  CHECK_FALSE(otsu(h).degenerate);

  Histogram256 single{};
  single[77] = 400;
  CHECK(otsu_threshold(single) == 0);
  CHECK(otsu(single).degenerate);

  Histogram256 close{};
  close[50] = 100;
  close[51] = 100;
  CHECK(otsu_threshold(close) == 50);

  CHECK_THROWS_AS(otsu(Histogram256{}), Error);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    Histogram256 r{};
    const int spikes = 2 + static_cast<int>(rng() % 5);
    for (int s = 0; s < spikes; ++s) r[rng() % 256] += 1 + rng() % 40;
    const int expected = oracle::otsu_by_within_class_variance(r);
    if (expected >= 0) CHECK(otsu_threshold(r) == expected);
  }
}

TEST_CASE("connected_components uses 4-connectivity") {
  BinaryGrid diag(2, 2);
  diag << true, false, false, true;
  Components c = connected_components(diag);
  CHECK(c.areas == std::vector<std::int64_t>{1, 1});

  c = connected_components(BinaryGrid::Constant(2, 2, true));
  CHECK(c.areas == std::vector<std::int64_t>{4});

  BinaryGrid ring = BinaryGrid::Constant(5, 5, true);
  ring.block(1, 1, 3, 3) = false;
  c = connected_components(ring);
  CHECK(c.areas == std::vector<std::int64_t>{16});
  CHECK(c.touches_border[0]);

  std::mt19937 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    BinaryGrid g(1 + rng() % 20, 1 + rng() % 20);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng() % 2 == 0;
    c = connected_components(g);
    std::int64_t sum = 0;
    for (auto a : c.areas) sum += a;
    CHECK(sum == g.count());
    CHECK(c.labels.maxCoeff() == static_cast<int>(c.areas.size()));
    for (std::size_t k = 0; k < c.areas.size(); ++k)
      CHECK((c.labels == static_cast<int>(k + 1)).count() == c.areas[k]);
  }
}

TEST_CASE("fallback_lung_mask") {
  SUBCASE("dark interior block") {
    Slice s = Slice::Constant(32, 32, 200);
    s.block(10, 12, 6, 6).setConstant(10);
    const Mask m = fallback_lung_mask(s, {10, 200});
    CHECK(m.count() == 36);
    CHECK(m.block(10, 12, 6, 6).all());
  }
  SUBCASE("uniformly bright") {
    CHECK(fallback_lung_mask(Slice::Constant(32, 32, 200), {10, 200}).count() == 0);
  }
  SUBCASE("dark border only") {
    Slice s = Slice::Constant(32, 32, 200);
    s.row(0).setConstant(10);
    s.col(31).setConstant(10);
    CHECK(fallback_lung_mask(s, {10, 200}).count() == 0);
  }
  SUBCASE("tiny components are dropped") {
    Slice s = Slice::Constant(32, 32, 200);
    s.block(5, 5, 2, 2).setConstant(10);     // 4 px < 5.12
    s.block(20, 20, 3, 3).setConstant(10);   // 9 px kept
    const Mask m = fallback_lung_mask(s, {10, 200});
    CHECK(m.count() == 9);
  }
  SUBCASE("never keeps border-touching components") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 30; ++trial) {
      Slice s(24, 24);
      for (Eigen::Index i = 0; i < s.size(); ++i) s.data()[i] = static_cast<std::uint16_t>(rng() % 2 ? 900 : 100 + rng() % 50);
      const Mask m = fallback_lung_mask(s, intensity_range(s));
      const Components c = connected_components(m);
      for (bool b : c.touches_border) CHECK_FALSE(b);
    }
  }
  SUBCASE("curate without masks uses the fallback") {
    Slice lung = Slice::Constant(32, 32, 200);
    lung.block(8, 8, 12, 12).setConstant(10);
    const Volume v("v", {lung, Slice::Constant(32, 32, 200)});
    const CurationManifest m = curate_volume(v, std::nullopt, 0.05);
    CHECK(m.entries[0].mask_source == MaskSource::fallback);
    CHECK(m.entries[0].lung_fraction == doctest::Approx(144.0 / 1024));
    CHECK(m.kept_indices() == std::vector<int>{0});
  }
}
