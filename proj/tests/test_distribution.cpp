#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "entstab/distribution.hpp"
#include "entstab/errors.hpp"

using namespace entstab;

namespace {

const Distribution kStd = Distribution::normal(0, 1);
const Distribution kTwoPoint = Distribution::discrete({{-1, 0.5}, {1, 0.5}});

Distribution random_mixture(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mean(-2, 2), sd(0.3, 1.5), w(0.1, 1.0);
  std::uniform_int_distribution<int> count(1, 4);
  std::vector<GaussianComponent> comps(static_cast<std::size_t>(count(rng)));
  double total = 0;
  for (auto& c : comps) {
    c = {mean(rng), sd(rng), w(rng)};
    total += c.weight;
  }
  for (auto& c : comps) c.weight /= total;
  double fix = 1.0;
  for (std::size_t i = 1; i < comps.size(); ++i) fix -= comps[i].weight;
  comps[0].weight = fix;
  return Distribution::mixture(comps);
}

}  // namespace

TEST(Validation, RejectsBadLaws) {
  EXPECT_THROW(Distribution({{0, 0.5}}, std::monostate{}, 0.0), InvalidDistribution);
  EXPECT_THROW(Distribution({{1, 0.5}, {0, 0.5}}, std::monostate{}, 0.0), InvalidDistribution);
  EXPECT_THROW(Distribution({{0, 1.0}}, std::monostate{}, 0.5), InvalidDistribution);
  EXPECT_THROW(Distribution({{0, -0.1}, {1, 1.1}}, std::monostate{}, 0.0), InvalidDistribution);
  EXPECT_THROW(GridDensity(0, 1, {0.5, 0.5}), InvalidDistribution);
  EXPECT_THROW(GridDensity(0, 1, {0.5, 0.5, 0.7}), InvalidDistribution);
  EXPECT_THROW(GridDensity(0, -1, {0.5, 0.5, 0.5}), InvalidDistribution);
  EXPECT_THROW(GaussianMixtureDensity({{0, 0, 1}}), InvalidDistribution);
  EXPECT_THROW(GaussianMixtureDensity({{0, 1, 0.5}}), InvalidDistribution);
  EXPECT_NO_THROW(GridDensity(0, 1, {0, 1, 0}));
}

TEST(Moments, Examples) {
  auto m = moments(Distribution::point_mass(0));
  EXPECT_EQ(m.mean, 0);
  EXPECT_EQ(m.variance, 0);
  m = moments(kStd);
  EXPECT_NEAR(m.mean, 0, 1e-12);
  EXPECT_NEAR(m.variance, 1, 1e-9);
  m = moments(kTwoPoint);
  EXPECT_NEAR(m.mean, 0, 1e-15);
  EXPECT_NEAR(m.variance, 1, 1e-15);
  m = moments(Distribution::uniform(-std::sqrt(3.0), std::sqrt(3.0)));
  EXPECT_NEAR(m.variance, 1, 1e-12);
  EXPECT_NEAR(m.second_moment, m.variance + m.mean * m.mean, 1e-12);
}

TEST(Cdf, JumpsAndLimits) {
  const auto atom = Distribution::point_mass(0);
  EXPECT_EQ(cdf(atom, 0), 1);
  EXPECT_EQ(cdf_left(atom, 0), 0);
  EXPECT_DOUBLE_EQ(cdf(kStd, 0), 0.5);
  EXPECT_DOUBLE_EQ(cdf(kTwoPoint, 0), 0.5);
  EXPECT_DOUBLE_EQ(cdf(kTwoPoint, 1) - cdf_left(kTwoPoint, 1), kTwoPoint.atom_weight_at(1));
  const Distribution mixed({{0.5, 0.3}}, GaussianMixtureDensity({{0, 1, 1}}), 0.7);
  EXPECT_NEAR(cdf(mixed, 0.5) - cdf_left(mixed, 0.5), 0.3, 1e-15);
  EXPECT_EQ(cdf(mixed, 1e300), 1.0);
  EXPECT_EQ(cdf(mixed, -1e300), 0.0);
  double prev = 0;
  for (double x = -10; x <= 10; x += 0.01) {
    EXPECT_GE(cdf(mixed, x), prev);
    prev = cdf(mixed, x);
  }
}

TEST(QuadraticTail, Examples) {
  EXPECT_NEAR(quadratic_tail(kStd, 0), 1.0, 1e-12);
  EXPECT_NEAR(quadratic_tail(kStd, 2), 0.2614641299491105, 1e-12);
  EXPECT_NEAR(quadratic_tail(kStd, 3), 0.029290886534888427, 1e-12);
  EXPECT_EQ(quadratic_tail(kTwoPoint, 2), 0);
  EXPECT_EQ(quadratic_tail(kTwoPoint, 1), 1);
  EXPECT_THROW(quadratic_tail(kStd, -1), DomainError);
}

TEST(QuadraticTail, ComplementsInnerSecondMoment) {
  std::mt19937_64 rng(3);
  const Distribution u = Distribution::uniform(-2, 1.5, 701);
  for (int i = 0; i < 10; ++i) {
    const Distribution m = random_mixture(rng);
    for (const Distribution* d : {&m, &u}) {
      for (double t : {0.0, 0.3, 1.0, 1.7, 4.0}) {
        const Integral inner =
            expectation(*d, [t](double x) { return std::abs(x) < t ? x * x : 0.0; }, 1e-13,
                        std::vector<double>{-t, t});
        EXPECT_NEAR(quadratic_tail(*d, t) + inner.value, moments(*d).second_moment, 1e-8);
      }
    }
  }
}

TEST(QuadraticTail, NonIncreasing) {
  const Distribution d = Distribution::mixture({{-1, 0.5, 0.3}, {2, 1, 0.7}});
  double prev = INFINITY;
  for (double t = 0; t < 8; t += 0.05) {
    EXPECT_LE(quadratic_tail(d, t), prev);
    prev = quadratic_tail(d, t);
  }
}

TEST(Truncate, Examples) {
  const auto z = truncate(kStd, std::exp(-2.0));
  EXPECT_NEAR(z.big_n, 3.0, 1e-15);
  EXPECT_NEAR(z.a1, 0.0, 1e-15);
  EXPECT_NEAR(z.sigma1_sq, 0.9707091134651116, 1e-12);
  EXPECT_NEAR(z.truncated.atom_weight_at(0), 2 * std_normal_sf(3.0), 1e-12);

  const auto t = truncate(kTwoPoint, 0.01);
  EXPECT_EQ(t.truncated, kTwoPoint);
  EXPECT_EQ(t.a1, 0);
  EXPECT_EQ(t.sigma1_sq, 1);

  const auto far = truncate(Distribution::point_mass(5), std::exp(-2.0));
  EXPECT_EQ(far.truncated, Distribution::point_mass(0));
  EXPECT_EQ(far.a1, 0);
  EXPECT_EQ(far.sigma1_sq, 0);

  EXPECT_THROW(truncate(kStd, 0.0), DomainError);
  EXPECT_THROW(truncate(kStd, 1.0), DomainError);
  EXPECT_NEAR(truncation_level(0.01), 4.034854258770293, 1e-14);
}

TEST(Truncate, VarianceIdentity) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 10; ++i) {
    const Distribution d = random_mixture(rng);
    const auto m = moments(d);
    for (double eps : {std::exp(-2.0), 1e-3, 0.3}) {
      const auto t = truncate(d, eps);
      const double lhs = m.second_moment - t.sigma1_sq;
      EXPECT_NEAR(lhs, quadratic_tail(d, t.big_n) + t.a1 * t.a1, 1e-8);
      EXPECT_NEAR(moments(t.truncated).mean, t.a1, 1e-6);
    }
  }
}

TEST(Convolve, ExactCases) {
  const auto n2 = convolve(kStd, kStd);
  ASSERT_NE(n2.gaussian_mixture(), nullptr);
  ASSERT_EQ(n2.gaussian_mixture()->components().size(), 1u);
  EXPECT_NEAR(n2.gaussian_mixture()->components()[0].sd, std::sqrt(2.0), 1e-15);

  const auto ab = convolve(Distribution::point_mass(1.5), Distribution::point_mass(-0.25));
  EXPECT_EQ(ab, Distribution::point_mass(1.25));

  const auto mix = convolve(kTwoPoint, Distribution::normal(0, 0.5));
  ASSERT_NE(mix.gaussian_mixture(), nullptr);
  const auto& c = mix.gaussian_mixture()->components();
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].mean, -1);
  EXPECT_EQ(c[1].mean, 1);
  EXPECT_EQ(c[0].sd, 0.5);
}

TEST(Convolve, GridWithGaussianMatchesClosedForm) {
  const auto u = Distribution::uniform(-1, 1, 201);
  const double s = 0.3;
  const auto d = convolve(u, Distribution::normal(0, s));
  ASSERT_NE(d.grid(), nullptr);
  for (double x = -2.5; x <= 2.5; x += 0.037) {
    const double exact = 0.5 * std_normal_mass((x - 1) / s, (x + 1) / s);
    EXPECT_NEAR(d.density(x), exact, 2e-6) << x;
  }
  EXPECT_NEAR(moments(d).variance, 1.0 / 3.0 + s * s, 1e-8);
}

TEST(Convolve, GridWithGridIsTriangle) {
  const auto u = Distribution::uniform(-1, 1, 201);
  const auto d = convolve(u, u);
  ASSERT_NE(d.grid(), nullptr);
  for (double x = -2; x <= 2; x += 0.05) {
    EXPECT_NEAR(d.density(x), std::max(0.0, (2 - std::abs(x)) / 4), 1e-9) << x;
  }
  EXPECT_LT(d.renormalization_drift(), 1e-9);
}

TEST(Convolve, MixedAtomsAndGrid) {
  const Distribution x({{0.0, 0.4}}, GridDensity(-1, 1, {0, 1, 0}), 0.6);
  const auto d = convolve(x, kTwoPoint);
  EXPECT_NEAR(d.atom_weight_at(-1), 0.2, 1e-15);
  EXPECT_NEAR(d.atom_weight_at(1), 0.2, 1e-15);
  EXPECT_NEAR(d.continuous_weight(), 0.6, 1e-15);
  EXPECT_NEAR(moments(d).variance, moments(x).variance + 1, 1e-9);
}

TEST(Convolve, MomentsAddOnRandomPairs) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 20; ++i) {
    const auto a = random_mixture(rng);
    const auto b = random_mixture(rng);
    const auto ma = moments(a), mb = moments(b), mc = moments(convolve(a, b));
    EXPECT_NEAR(mc.mean, ma.mean + mb.mean, 1e-6);
    EXPECT_NEAR(mc.variance, ma.variance + mb.variance, 1e-6);
  }
  const auto u = Distribution::uniform(-1, 2, 301);
  const auto g = random_mixture(rng);
  const auto mc = moments(convolve(u, g));
  EXPECT_NEAR(mc.mean, moments(u).mean + moments(g).mean, 1e-6);
  EXPECT_NEAR(mc.variance, moments(u).variance + moments(g).variance, 1e-6);
}

TEST(ScaleShift, Examples) {
  EXPECT_EQ(scale_shift(kTwoPoint, 1, 0), kTwoPoint);
  const auto n4 = scale_shift(kStd, 2, 0);
  EXPECT_NEAR(moments(n4).variance, 4, 1e-9);
  EXPECT_EQ(scale_shift(Distribution::point_mass(1), -1, 1), Distribution::point_mass(0));
  EXPECT_THROW(scale_shift(kStd, 0, 1), DomainError);
}

TEST(ScaleShift, RoundTrip) {
  std::mt19937_64 rng(29);
  const auto u = Distribution::uniform(-1, 2, 301);
  for (double lambda : {-3.0, -0.5, 0.7, 2.5}) {
    const auto m = random_mixture(rng);
    for (const Distribution* d : {&m, &u, &kTwoPoint}) {
      const auto back = scale_shift(scale_shift(*d, lambda, 0.4), 1.0 / lambda, -0.4 / lambda);
      for (double x = -4; x <= 4; x += 0.08) {
        EXPECT_NEAR(cdf(back, x), cdf(*d, x), 1e-9) << lambda << " " << x;
      }
    }
  }
}

TEST(Median, Conventions) {
  EXPECT_NEAR(median(kStd), 0, 1e-12);
  EXPECT_NEAR(median(Distribution::normal(1.5, 2)), 1.5, 1e-12);
  EXPECT_NEAR(median(kTwoPoint), 0, 1e-12);
  EXPECT_NEAR(median(Distribution::discrete({{-1, 0.3}, {2, 0.7}})), 2, 1e-12);
}

TEST(Support, WindowCoversMixture) {
  const auto w = kStd.support(1e-12);
  EXPECT_LE(std_normal_cdf(w.lo), 2e-18);
  EXPECT_GT(w.hi, 8.0);
}
