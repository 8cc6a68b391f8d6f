#include <gtest/gtest.h>

#include <cmath>

#include "entstab/errors.hpp"
#include "entstab/metrics.hpp"
#include "entstab/regularize.hpp"

using namespace entstab;

namespace {

const Distribution kTwoPoint = Distribution::discrete({{-1, 0.5}, {1, 0.5}});

std::vector<Distribution> test_laws() {
  return {kTwoPoint, Distribution::uniform(-std::sqrt(3.0), std::sqrt(3.0), 401),
          Distribution::mixture({{-1, 0.5, 0.4}, {1, 0.8, 0.6}}),
          Distribution::discrete({{-2, 0.2}, {0, 0.5}, {1.5, 0.3}}),
          Distribution({{0.5, 0.3}}, GridDensity(-1, 0.5, {0, 1, 1, 0}), 0.7)};
}

}  // namespace

TEST(Regularize, Examples) {
  const auto z = regularize(Distribution::point_mass(0), {1.0});
  ASSERT_NE(z.gaussian_mixture(), nullptr);
  EXPECT_EQ(z, Distribution::normal(0, 1));
  const auto two = regularize(kTwoPoint, {0.5});
  EXPECT_NEAR(two.density(0), 0.10798193302637613, 1e-15);
  const auto n = regularize(Distribution::normal(0, 2), {0.5});
  EXPECT_NEAR(n.gaussian_mixture()->components()[0].sd, std::sqrt(4.25), 1e-15);
}

TEST(Regularize, SigmaValidation) {
  EXPECT_THROW(regularize(kTwoPoint, {0.0}), DomainError);
  EXPECT_THROW(regularize(kTwoPoint, {1.5}), DomainError);
  EXPECT_NO_THROW(regularize(kTwoPoint, {1.5, true}));
  RegularizationParams p{0.5};
  EXPECT_NEAR(p.reg_sigma1(), std::sqrt(1.25), 1e-15);
  EXPECT_NEAR(p.reg_sigma2(), std::sqrt(1.5), 1e-15);
}

TEST(Regularize, VarianceGrowsBySigmaSquared) {
  for (const auto& d : test_laws()) {
    const auto m = moments(d);
    for (double s : {0.25, 0.5, 1.0}) {
      const auto r = moments(regularize(d, {s}));
      EXPECT_NEAR(r.mean, m.mean, 1e-9);
      EXPECT_NEAR(r.variance, m.variance + s * s, 1e-8) << s;
    }
  }
}

TEST(Regularize, Semigroup) {
  for (const auto& d : test_laws()) {
    const auto twice = regularize(regularize(d, {0.3}), {0.4});
    const auto once = regularize(d, {0.5});
    for (double x : linspace(-4, 4, 200)) {
      EXPECT_NEAR(twice.cdf(x), once.cdf(x), 1e-6) << x;
    }
  }
}

TEST(Regularize, CommutesWithConvolution) {
  const auto laws = test_laws();
  for (std::size_t i = 0; i < laws.size(); ++i) {
    const auto& a = laws[i];
    const auto& b = laws[(i + 1) % laws.size()];
    const double s = 0.5;
    const auto lhs = convolve(regularize(a, {s}), regularize(b, {s}));
    const auto rhs = regularize(convolve(a, b), {s * std::sqrt(2.0)});
    for (double x : linspace(-5, 5, 200)) {
      EXPECT_NEAR(lhs.cdf(x), rhs.cdf(x), 1e-6) << i << " " << x;
    }
  }
}

TEST(DensityGap, Examples) {
  EXPECT_NEAR(regularized_density_gap(kTwoPoint, kTwoPoint, {0.5}), 0, 1e-15);
  EXPECT_NEAR(regularized_density_gap(Distribution::point_mass(0), Distribution::point_mass(1), {1}),
              0.2229431643308582, 1e-9);
}

TEST(DensityGap, BoundedByKolmogorovAndLevy) {
  const auto laws = test_laws();
  for (std::size_t i = 0; i < laws.size(); ++i) {
    for (std::size_t j = i + 1; j < laws.size(); ++j) {
      for (double s : {0.25, 0.5, 1.0}) {
        const double gap = regularized_density_gap(laws[i], laws[j], {s});
        const auto k = kolmogorov(laws[i], laws[j]);
        const auto l = levy(laws[i], laws[j]);
        EXPECT_LE(gap, (k.value + k.err_estimate) / s + 1e-9);
        EXPECT_LE(gap, (l.value + l.err_estimate) / s * (1 + 1 / (2 * s)) + 1e-9);
        const auto t = tv(regularize(laws[i], {s}), regularize(laws[j], {s}));
        const auto w = w1(laws[i], laws[j]);
        EXPECT_LE(t.value, (w.value + w.err_estimate) / s + 1e-9);
      }
    }
  }
}
