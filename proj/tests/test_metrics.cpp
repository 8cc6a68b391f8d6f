#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "entstab/errors.hpp"
#include "entstab/metrics.hpp"

using namespace entstab;

namespace {

const Distribution kStd = Distribution::normal(0, 1);
const Distribution kTwoPoint = Distribution::discrete({{-1, 0.5}, {1, 0.5}});
const double kSqrt3 = std::sqrt(3.0);

Tolerances coarse() {
  Tolerances t;
  t.sup_grid_points = 2001;
  t.quad_abs_tol = 1e-9;
  t.root_tol = 1e-8;
  return t;
}

Distribution random_mixture(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mean(-1.5, 1.5), sd(0.4, 1.5), w(0.1, 1.0);
  std::uniform_int_distribution<int> count(1, 3);
  std::vector<GaussianComponent> comps(static_cast<std::size_t>(count(rng)));
  double total = 0;
  for (auto& c : comps) {
    c = {mean(rng), sd(rng), w(rng)};
    total += c.weight;
  }
  double rest = 1.0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    comps[i].weight /= total;
    rest -= comps[i].weight;
  }
  comps[0].weight = rest;
  return Distribution::mixture(comps);
}

// Variation of F - G over the partition generated by a finite point set:
// the sum of |increments| is the supremum over disjoint intervals with
// endpoints in the set.
double collection_sup(const Distribution& f, const Distribution& g, std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  double s = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = f.cdf(pts[i]) - g.cdf(pts[i]);
    const double b = f.cdf(pts[i + 1]) - g.cdf(pts[i + 1]);
    s += std::abs(b - a);
  }
  return s;
}

double randomized_tv(const Distribution& f, const Distribution& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Window a = f.support(), b = g.support();
  std::uniform_real_distribution<double> u(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
  double best = 0;
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> pts(10000);
    for (double& x : pts) x = u(rng);
    for (const auto* d : {&f, &g}) {
      for (const Atom& at : d->atoms()) {
        pts.push_back(at.location);
        pts.push_back(std::nextafter(at.location, -INFINITY));
      }
    }
    best = std::max(best, collection_sup(f, g, pts));
  }
  return best;
}

}  // namespace

TEST(Kolmogorov, Examples) {
  EXPECT_NEAR(kolmogorov(kStd, kStd).value, 0, 1e-15);
  EXPECT_NEAR(kolmogorov(kStd, Distribution::normal(1, 1)).value, 0.38292492254802624, 1e-9);
  EXPECT_EQ(kolmogorov(Distribution::point_mass(0), Distribution::point_mass(1)).value, 1.0);
  EXPECT_NEAR(kolmogorov(kTwoPoint, Distribution::point_mass(0)).value, 0.5, 1e-15);
}

TEST(Levy, Examples) {
  EXPECT_EQ(levy(kStd, kStd).value, 0);
  EXPECT_EQ(levy(kTwoPoint, kTwoPoint).value, 0);
  const auto l = levy(Distribution::point_mass(0), kStd);
  EXPECT_NEAR(l.value, 0.35958045205206457, 1e-8);
  EXPECT_GT(l.err_estimate, 0);
  EXPECT_NEAR(levy(Distribution::point_mass(0), Distribution::point_mass(1)).value, 1.0, 1e-8);
  EXPECT_NEAR(levy(Distribution::point_mass(0), Distribution::point_mass(0.3)).value, 0.3, 1e-8);
}

TEST(W1, Examples) {
  EXPECT_NEAR(w1(Distribution::point_mass(0), Distribution::point_mass(-2.5)).value, 2.5, 1e-12);
  EXPECT_NEAR(w1(kStd, kStd).value, 0, 1e-15);
  EXPECT_NEAR(w1(kStd, Distribution::normal(1, 1)).value, 1.0, 1e-9);
}

TEST(Tv, Examples) {
  EXPECT_EQ(tv(Distribution::point_mass(0), Distribution::point_mass(1)).value, 2.0);
  EXPECT_NEAR(tv(kStd, kStd).value, 0, 1e-15);
  EXPECT_NEAR(tv(kStd, Distribution::normal(0, 2)).value, 0.645349138055308, 1e-8);
}

TEST(Tv, AgreesWithRandomizedDefinition) {
  const Distribution pairs[][2] = {
      {kStd, Distribution::normal(0, 2)},
      {kStd, Distribution::normal(1, 1)},
      {Distribution::uniform(-kSqrt3, kSqrt3), kStd},
      {Distribution::mixture({{-1, 0.5, 0.5}, {1, 0.5, 0.5}}), kStd},
      {Distribution({{0, 0.3}}, GaussianMixtureDensity({{0, 1, 1}}), 0.7), kTwoPoint},
  };
  std::uint64_t seed = 1;
  for (const auto& p : pairs) {
    EXPECT_NEAR(tv(p[0], p[1]).value, randomized_tv(p[0], p[1], seed++), 1e-3);
  }
}

TEST(Metrics, ChainSymmetryTriangle) {
  std::mt19937_64 rng(41);
  const Tolerances t = coarse();
  for (int i = 0; i < 20; ++i) {
    const Distribution a = random_mixture(rng), b = random_mixture(rng), c = random_mixture(rng);
    const double l = levy(a, b, t).value, k = kolmogorov(a, b, t).value, v = tv(a, b, t).value;
    EXPECT_LE(0, l);
    EXPECT_LE(l, k + 1e-8);
    EXPECT_LE(k, 0.5 * v + 1e-8);
    EXPECT_LE(0.5 * v, 1.0);
    for (const char* name : {"levy", "kolmogorov", "w1", "tv"}) {
      const auto ab = metric_by_name(name, a, b, t);
      const auto ba = metric_by_name(name, b, a, t);
      EXPECT_NEAR(ab.value, ba.value, 1e-7 + ab.err_estimate + ba.err_estimate) << name;
      const auto bc = metric_by_name(name, b, c, t);
      const auto ac = metric_by_name(name, a, c, t);
      EXPECT_LE(ac.value, ab.value + bc.value + 1e-7) << name;
    }
  }
  EXPECT_THROW(metric_by_name("hellinger", kStd, kStd), DomainError);
}

TEST(Entropic, Examples) {
  for (double a : {-2.0, 0.0, 3.0}) {
    for (double s : {0.3, 1.0, 4.0}) {
      EXPECT_NEAR(entropic_distance(Distribution::normal(a, s)).value, 0, 1e-8);
    }
  }
  const auto u = entropic_distance(Distribution::uniform(-kSqrt3, kSqrt3));
  EXPECT_NEAR(u.value, 0.1764852083106725, 1e-8);
  EXPECT_NEAR(u.sigma, 1.0, 1e-12);
  EXPECT_TRUE(entropic_distance(kTwoPoint).infinite());
  EXPECT_THROW(entropic_distance(Distribution::point_mass(1)), DomainError);
}

TEST(Entropic, AffineInvariance) {
  const auto d = Distribution::mixture({{-1, 0.6, 0.3}, {0.8, 0.9, 0.7}});
  const double base = entropic_distance(d).value;
  for (double lambda : {0.5, 2.0}) {
    for (double c : {-1.0, 1.0}) {
      EXPECT_NEAR(entropic_distance(scale_shift(d, lambda, c)).value, base, 1e-6);
    }
  }
}

TEST(Entropic, PinskerOnContinuousLaws) {
  std::mt19937_64 rng(43);
  std::vector<Distribution> laws{Distribution::uniform(-1, 2.5)};
  for (int i = 0; i < 8; ++i) laws.push_back(random_mixture(rng));
  for (const auto& d : laws) {
    const auto e = entropic_distance(d);
    const double t = tv(d, Distribution::normal(e.a, e.sigma)).value;
    EXPECT_LE(0.5 * t * t, e.value + 1e-9);
  }
}

TEST(UniformDeviation, Examples) {
  EXPECT_NEAR(uniform_deviation(Distribution::normal(0, 1.7)), 0, 1e-15);
  const auto d = Distribution::mixture({{-1, 0.5, 0.5}, {1, 0.5, 0.5}});
  const auto d2 = scale_shift(d, 2, 0);
  EXPECT_NEAR(uniform_deviation(d2), uniform_deviation(d) / 2, 1e-9);
  const auto detail = uniform_deviation_detail(d);
  double grid_max = -1;
  const double v = std::sqrt(moments(d).variance);
  for (double x : linspace(-10, 10, 2000001)) {
    grid_max = std::max(grid_max, d.density(x) - normal_pdf(x, 0, v));
  }
  EXPECT_NEAR(detail.value, grid_max, 1e-6);
  EXPECT_FALSE(detail.clamped);
  EXPECT_THROW(uniform_deviation(kTwoPoint), DomainError);
}

TEST(EntropyFunctional, Identities) {
  EXPECT_NEAR(entropy_functional([](double) { return 2.5; }, kStd), 0, 1e-9);
  const auto d = scale_shift(Distribution::mixture({{-1, 0.5, 0.5}, {1, 0.5, 0.5}}), 1 / std::sqrt(1.25), 0);
  auto f = [&](double x) { return d.density(x) / std_normal_pdf(x); };
  EXPECT_NEAR(entropy_functional(f, kStd), entropic_distance(d).value, 1e-6);
  auto g = [](double x) { return 1 + std::sin(x) * 0.5; };
  EXPECT_NEAR(entropy_functional([&](double x) { return 3 * g(x); }, kStd),
              3 * entropy_functional(g, kStd), 1e-9);
  EXPECT_THROW(entropy_functional([](double) { return 0.0; }, kStd), DomainError);
}
