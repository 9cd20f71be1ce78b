#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "glcmsample/error.hpp"
#include "glcmsample/sampler.hpp"
#include "oracles.hpp"

using namespace glcmsample;

namespace {

EntropyProfile profile_of(std::vector<double> values, std::vector<int> indices = {}) {
  EntropyProfile p;
  p.volume_id = "t";
  if (indices.empty())
    for (std::size_t i = 0; i < values.size(); ++i) indices.push_back(static_cast<int>(i));
  p.values = std::move(values);
  p.slice_indices = std::move(indices);
  return p;
}

SamplingConfig glcm_config(int n, int window = 3, int order = 2) {
  SamplingConfig c;
  c.n_samples = n;
  c.sg = {window, order};
  return c;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("diff_abs_normalize") {
  const DiffWeights w = diff_abs_normalize(Eigen::VectorXd((Eigen::VectorXd(5) << 1, 1, 2, 4, 4).finished()));
  CHECK_FALSE(w.degenerate);
  CHECK(w.weights(0) == 0.0);
  CHECK(w.weights(1) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(w.weights(2) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(w.weights(3) == 0.0);

  const DiffWeights flat = diff_abs_normalize(Eigen::VectorXd::Constant(6, 0.3));
  CHECK(flat.degenerate);
  CHECK((flat.weights.array() == 0.2).all());

  const Eigen::VectorXd e = (Eigen::VectorXd(6) << 0.5, 2.0, -1.0, 3.0, 3.0, 0.25).finished();
  const DiffWeights base = diff_abs_normalize(e);
  const DiffWeights affine = diff_abs_normalize((2.5 * e.array() + 7.0).matrix());
  CHECK((base.weights - affine.weights).cwiseAbs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(diff_abs_normalize(Eigen::VectorXd::Ones(1)), Error);
}

TEST_CASE("build_cdf") {
  CHECK(to_vec(build_cdf(Eigen::Vector4d(0, 1.0 / 3, 2.0 / 3, 0))) == std::vector<double>{0, 1.0 / 3, 1, 1});
  CHECK(to_vec(build_cdf(Eigen::VectorXd::Ones(1))) == std::vector<double>{1});
  CHECK(to_vec(build_cdf(Eigen::Vector4d::Constant(0.25))) == std::vector<double>{0.25, 0.5, 0.75, 1});
  CHECK_THROWS_AS(build_cdf(Eigen::Vector3d(0.5, -0.1, 0.6)), Error);

  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd w(1 + rng() % 100);
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng() % 4 == 0 ? 0.0 : u(rng);
    if (w.sum() == 0) w(0) = 1;
    w /= w.sum();
    const Eigen::VectorXd f = build_cdf(w);
    CHECK(f(f.size() - 1) == 1.0);
    for (Eigen::Index i = 1; i < f.size(); ++i) CHECK(f(i) >= f(i - 1));
  }
}

TEST_CASE("inverse_cdf_sample") {
  const std::vector<double> f = {0, 1.0 / 3, 1, 1};
  CHECK(inverse_cdf_sample(f, std::vector<double>{0.25, 0.75}) == std::vector<int>{1, 2});
  CHECK(inverse_cdf_index(f, 1e-300) == 1);
  CHECK_THROWS_AS(inverse_cdf_index(f, 0.0), Error);
  CHECK_THROWS_AS(inverse_cdf_index(f, 1.0), Error);

  for (int n : {1, 2, 5, 16, 33}) {
    std::vector<double> uniform(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) uniform[k] = (k + 1.0) / n;
    uniform.back() = 1.0;
    CHECK(inverse_cdf_sample(uniform, midpoint_quantiles(n)) == [&] {
      std::vector<int> all(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) all[k] = k;
      return all;
    }());
  }

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    Eigen::VectorXd w(1 + rng() % 64);
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng() % 3 == 0 ? 0.0 : u(rng);
    if (w.sum() == 0) w(0) = 1;
    const Eigen::VectorXd cdf = build_cdf(w / w.sum());
    const std::vector<double> c = to_vec(cdf);
    for (int q = 0; q < 10; ++q) {
      const double x = seeded_quantiles(1, rng())[0];
      CHECK(inverse_cdf_index(c, x) == oracle::inverse_cdf_linear(c, x));
    }
  }
}

TEST_CASE("quantiles") {
  CHECK(midpoint_quantiles(4) == std::vector<double>{0.125, 0.375, 0.625, 0.875});
  const auto a = seeded_quantiles(100, 99);
  CHECK(a == seeded_quantiles(100, 99));
  CHECK(a != seeded_quantiles(100, 100));
  for (double x : a) CHECK((x > 0.0 && x < 1.0));
}

TEST_CASE("sample_glcm") {
  SUBCASE("hand-traced chain") {
    const SamplingPlan plan = sample_glcm(profile_of({1, 1, 2, 4, 4}), glcm_config(2));
    CHECK(plan.selected == std::vector<int>{1, 2});
    CHECK(plan.cdf == std::vector<double>{0, 1.0 / 3, 1, 1});
    CHECK(plan.weight_slices == std::vector<int>{0, 1, 2, 3});
    CHECK_FALSE(plan.degenerate);
  }
  SUBCASE("indices map back to original slices") {
    const SamplingPlan plan = sample_glcm(profile_of({1, 1, 2, 4, 4}, {3, 8, 9, 20, 21}), glcm_config(2));
    CHECK(plan.selected == std::vector<int>{8, 9});
  }
  SUBCASE("single slice") {
    const SamplingPlan plan = sample_glcm(profile_of({0.7}, {12}), glcm_config(5));
    CHECK(plan.selected == std::vector<int>{12});
    CHECK(plan.degenerate);
  }
  SUBCASE("constant profile spreads evenly") {
    const SamplingPlan plan = sample_glcm(profile_of(std::vector<double>(9, 1.25)), glcm_config(8));
    CHECK(plan.degenerate);
    CHECK(plan.selected == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  }
  SUBCASE("dedupe and backfill") {
    // All mass on the pair (4, 5) -> CDF index 4; backfill by weight then index.
    std::vector<double> step(10, 0.0);
    for (int i = 5; i < 10; ++i) step[i] = 1.0;
    SamplingPlan plan = sample_glcm(profile_of(step), glcm_config(3));
    CHECK(plan.selected == std::vector<int>{0, 1, 4});

    SamplingConfig dup = glcm_config(3);
    dup.allow_duplicates = true;
    plan = sample_glcm(profile_of(step), dup);
    CHECK(plan.selected == std::vector<int>{4, 4, 4});

    plan = sample_glcm(profile_of({0, 1, 3, 3}), glcm_config(10));
    CHECK(plan.selected == std::vector<int>{0, 1, 2, 3});
  }
  SUBCASE("concentration on a single jump") {
    for (int j = 1; j < 12; ++j) {
      std::vector<double> e(12, 2.0);
      for (int i = j; i < 12; ++i) e[i] = 5.0;
      SamplingConfig c = glcm_config(1);
      CHECK(sample_glcm(profile_of(e), c).selected == std::vector<int>{j - 1});
      c.n_samples = 4;
      c.allow_duplicates = true;
      CHECK(sample_glcm(profile_of(e), c).selected == std::vector<int>(4, j - 1));
    }
  }
  SUBCASE("affine invariance") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<double> e(16 + rng() % 100);
      for (double& v : e) v = u(rng);
      std::vector<double> t(e.size());
      const double a = 0.1 + 9.9 * u(rng), b = -5 + 10 * u(rng);
      for (std::size_t i = 0; i < e.size(); ++i) t[i] = a * e[i] + b;
      const SamplingConfig c = glcm_config(12, 9, 2);
      const SamplingPlan p1 = sample_glcm(profile_of(e), c);
      const SamplingPlan p2 = sample_glcm(profile_of(t), c);
      CHECK(p1.selected == p2.selected);
      for (std::size_t i = 0; i < p1.weights.size(); ++i) CHECK(std::abs(p1.weights[i] - p2.weights[i]) <= 1e-9);
    }
  }
  SUBCASE("seeded mode is reproducible") {
    std::vector<double> e(40);
    for (int i = 0; i < 40; ++i) e[i] = std::sin(i * 0.7);
    SamplingConfig c = glcm_config(10, 5, 2);
    c.quantile_mode = QuantileMode::seeded;
    c.seed = 1234;
    const SamplingPlan a = sample_glcm(profile_of(e), c);
    CHECK(a.selected == sample_glcm(profile_of(e), c).selected);
    CHECK(a.selected.size() == 10);
    CHECK(std::set<int>(a.selected.begin(), a.selected.end()).size() == 10);
  }
  SUBCASE("plan invariants") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 1 + static_cast<int>(rng() % 60);
      std::vector<double> e(static_cast<std::size_t>(n));
      std::vector<int> idx(static_cast<std::size_t>(n));
      int next = 0;
      for (int i = 0; i < n; ++i) {
        e[i] = u(rng);
        next += 1 + static_cast<int>(rng() % 3);
        idx[i] = next;
      }
      const int want = 1 + static_cast<int>(rng() % 70);
      const SamplingPlan p = sample_glcm(profile_of(e, idx), glcm_config(want, 5, 2));
      CHECK(p.selected.size() == static_cast<std::size_t>(std::min(want, n)));
      CHECK(std::is_sorted(p.selected.begin(), p.selected.end()));
      CHECK(std::set<int>(p.selected.begin(), p.selected.end()).size() == p.selected.size());
      for (int s : p.selected) CHECK(std::find(idx.begin(), idx.end(), s) != idx.end());
      double sum = 0;
      for (double w : p.weights) {
        CHECK(w >= 0.0);
        sum += w;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      CHECK(p.cdf.back() == 1.0);
      CHECK(std::is_sorted(p.cdf.begin(), p.cdf.end()));
    }
  }
}

TEST_CASE("baselines") {
  std::vector<int> block(16);
  for (int i = 0; i < 16; ++i) block[i] = 17 + i;
  CHECK(sample_center(50, 16) == block);
  CHECK(sample_center(5, 5) == std::vector<int>{0, 1, 2, 3, 4});
  CHECK(sample_center(3, 16) == std::vector<int>{0, 1, 2});
  CHECK(sample_center(10, 1) == std::vector<int>{5});
  for (int n = 1; n < 40; ++n)
    for (int k = 1; k < 45; ++k) {
      const auto c = sample_center(n, k);
      CHECK(c.size() == static_cast<std::size_t>(std::min(n, k)));
      CHECK(c.front() >= 0);
      CHECK(c.back() < n);
      for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i] == c[i - 1] + 1);
    }

  CHECK(sample_uniform(10, 2) == std::vector<int>{2, 7});
  CHECK(sample_uniform(6, 6) == std::vector<int>{0, 1, 2, 3, 4, 5});
  CHECK(sample_uniform(8, 1) == std::vector<int>{4});
  CHECK(sample_uniform(3, 7) == std::vector<int>{0, 1, 2});

  SamplingConfig c;
  c.strategy = Strategy::center;
  c.n_samples = 2;
  const SamplingPlan plan = make_plan(profile_of({0, 0, 0, 0, 0}, {10, 11, 12, 13, 14}), c);
  CHECK(plan.selected == std::vector<int>{11, 12});
  CHECK(plan.weights.empty());
  c.n_samples = 0;
  CHECK_THROWS_WITH_AS(make_plan(profile_of({0}), c), doctest::Contains("n must be"), Error);
}
