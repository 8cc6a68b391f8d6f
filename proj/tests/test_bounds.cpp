#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "entstab/bounds.hpp"
#include "entstab/errors.hpp"
#include "entstab/metrics.hpp"

using namespace entstab;

namespace {

const double kSqrt3 = std::sqrt(3.0);
const Distribution kUniform = Distribution::uniform(-kSqrt3, kSqrt3);
const Distribution kTwoPoint = Distribution::discrete({{-1, 0.5}, {1, 0.5}});

Distribution contaminated(double w, double tau) {
  return standardize(Distribution::mixture({{0, 1, 1 - w}, {0, tau, w}}));
}

Distribution random_mixture(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mean(-1.5, 1.5), sd(0.4, 1.5), w(0.1, 1.0);
  std::vector<GaussianComponent> comps(3);
  double total = 0;
  for (auto& c : comps) {
    c = {mean(rng), sd(rng), w(rng)};
    total += c.weight;
  }
  for (auto& c : comps) c.weight /= total;
  comps[0].weight = 1.0 - comps[1].weight - comps[2].weight;
  return standardize(Distribution::mixture(comps));
}

Distribution half(const Distribution& d) { return scale_shift(d, std::sqrt(0.5), 0); }

BoundInputs single(const Distribution& x, std::map<std::string, double> scalars = {}) {
  BoundInputs in;
  in.x = x;
  in.scalars = std::move(scalars);
  in.descriptor = "x";
  return in;
}

BoundInputs pair(const Distribution& x, const Distribution& y,
                 std::map<std::string, double> scalars = {}) {
  BoundInputs in = single(x, std::move(scalars));
  in.y = y;
  in.descriptor = "xy";
  return in;
}

}  // namespace

TEST(Helpers, MFn) {
  EXPECT_DOUBLE_EQ(m_fn(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(m_fn(0.25, 1), 1.0);
  EXPECT_NEAR(m_fn(0.01, 1e-6), 2.805406309985185, 1e-12);
  EXPECT_THROW(m_fn(0, 0.5), DomainError);
  EXPECT_THROW(m_fn(1, 0), DomainError);
  EXPECT_THROW(m_fn(1, 1.5), DomainError);
}

TEST(Helpers, BigN) {
  EXPECT_NEAR(big_n(std::exp(-2.0)), 3.0, 1e-15);
  EXPECT_NEAR(big_n(0.01), 4.034854258770293, 1e-12);
  EXPECT_NEAR(big_n(1 - 1e-12), 1.0, 1e-5);
  EXPECT_THROW(big_n(0), DomainError);
  EXPECT_THROW(big_n(1), DomainError);
}

TEST(Helpers, RFn) {
  EXPECT_EQ(r_fn(2), 0.0);
  EXPECT_NEAR(r_fn(1), 0.8325546111576977, 1e-15);
  EXPECT_EQ(r_fn(0), 0.0);
  EXPECT_THROW(r_fn(2.5), DomainError);
  EXPECT_THROW(r_fn(-0.1), DomainError);
  for (double a = 0.01; a < 2; a += 0.05) {
    for (double b = 0.01; a + b <= 2; b += 0.05) {
      EXPECT_LE(r_fn(a + b), r_fn(a) + r_fn(b) + 1e-15) << a << " " << b;
    }
  }
}

TEST(Helpers, Constants) {
  EXPECT_NEAR(eps0(), 0.09134474606854295, 1e-15);
  EXPECT_NEAR(eps1(), 0.0029427018450126, 1e-14);
  const auto s = standardize(Distribution::mixture({{1, 2, 0.5}, {3, 1, 0.5}}));
  EXPECT_NEAR(moments(s).mean, 0, 1e-14);
  EXPECT_NEAR(moments(s).variance, 1, 1e-14);
  EXPECT_THROW(standardize(Distribution::point_mass(2)), DomainError);
}

TEST(Catalogue, Shape) {
  std::set<std::string> ids;
  for (const auto& s : catalogue()) {
    EXPECT_TRUE(ids.insert(s.id).second) << s.id;
    EXPECT_FALSE(s.statement.empty());
    EXPECT_FALSE(s.inputs.empty());
  }
  for (const char* id : {"PINSKER", "EPI_UPPER", "CHAIN", "A11", "A12a", "A12b", "A21a", "A21b",
                         "A22a", "A22b", "A23", "A31", "A32", "LEMMA32", "LEMMA43",
                         "NORMAL_SHIFT_K", "P61", "P62", "ENT_CHEB", "P71"}) {
    EXPECT_FALSE(find_bound(id).constant_mode) << id;
  }
  for (const char* id : {"T21", "T22", "T23", "LEMMA31", "LEMMA33", "T44", "T51", "P81", "P91",
                         "P92", "P93", "P101", "P102", "P111", "T11", "T41", "LEMMA42"}) {
    EXPECT_TRUE(find_bound(id).constant_mode) << id;
  }
  EXPECT_EQ(ids.size(), 37u);
  EXPECT_EQ(find_bound("P102").direction, Direction::lower);
  EXPECT_EQ(find_bound("T11").direction, Direction::lower);
  EXPECT_THROW(find_bound("P999"), CatalogueError);
  EXPECT_THROW(evaluate_bound("P999", single(kUniform)), CatalogueError);
}

TEST(Evaluate, P61Uniform) {
  const auto r = evaluate_bound("P61", single(kUniform, {{"T", 2}}));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_NEAR(r.rhs, 2.1774585979284593, 1e-7);
  ASSERT_TRUE(r.satisfied.has_value());
  EXPECT_TRUE(*r.satisfied);
  EXPECT_EQ(r.ratio, 0.0);
  EXPECT_EQ(r.bound_id, "P61");
  EXPECT_EQ(r.input_descriptor, "x");
}

TEST(Evaluate, Lemma43Endpoint) {
  BoundInputs in;
  in.scalars = {{"sigma", 0}, {"v", 1}};
  const auto r = evaluate_bound("LEMMA43", in);
  EXPECT_NEAR(r.lhs, 0.35958045205206457 * 0.35958045205206457, 1e-8);
  EXPECT_NEAR(r.rhs, std::log(2.0), 1e-15);
  EXPECT_TRUE(*r.satisfied);
}

TEST(Evaluate, PinskerEqualityAtNormal) {
  const auto r = evaluate_bound("PINSKER", single(Distribution::normal(0.3, 1.7)));
  EXPECT_NEAR(r.lhs, 0, 1e-12);
  EXPECT_NEAR(r.rhs, 0, 1e-8);
  EXPECT_TRUE(*r.satisfied);
  EXPECT_EQ(r.ratio, 0.0);
}

TEST(Evaluate, NormalShift) {
  const auto r = evaluate_bound("NORMAL_SHIFT_K", BoundInputs{{}, {}, {{"a", 0.5}, {"sigma", 2}}, ""});
  EXPECT_NEAR(r.lhs, 2 * std_normal_cdf(0.125) - 1, 1e-10);
  EXPECT_NEAR(r.rhs, 0.5 / (2 * std::sqrt(2 * M_PI)), 1e-15);
  EXPECT_TRUE(*r.satisfied);
}

TEST(Evaluate, Preconditions) {
  auto requirement = [](const std::string& id, const BoundInputs& in) -> std::string {
    try {
      evaluate_bound(id, in);
    } catch (const PreconditionError& e) {
      return e.requirement();
    }
    return "";
  };
  EXPECT_EQ(requirement("P61", single(kTwoPoint, {{"T", 1}})), "X has a density");
  EXPECT_EQ(requirement("P61", single(scale_shift(kUniform, 2, 0), {{"T", 1}})), "Var(X) = 1");
  EXPECT_EQ(requirement("P61", single(scale_shift(kUniform, 1, 0.5), {{"T", 1}})), "E X = 0");
  EXPECT_EQ(requirement("P62", single(kUniform, {{"T", 1}})), "T >= 2");
  EXPECT_EQ(requirement("ENT_CHEB", single(Distribution::normal(0, 1))), "0 < D(X) < 1");
  EXPECT_EQ(requirement("T51", pair(kUniform, kUniform, {{"sigma", 0.5}})), "Var(X+Y) = 1");
  EXPECT_EQ(requirement("T51", pair(half(kUniform), half(kUniform), {{"sigma", 1.5}})),
            "0 < sigma <= 1");
  EXPECT_EQ(requirement("P101", pair(half(kUniform), half(kUniform), {{"sigma", 0.5}})),
            "Var(X) = Var(Y) = 1");
  EXPECT_EQ(requirement("T21", pair(kUniform, half(kUniform))), "Var(X) = Var(Y) > 0");
  EXPECT_EQ(requirement("LEMMA32", pair(kTwoPoint, kTwoPoint)), "eps <= eps0");
  EXPECT_EQ(requirement("A12a", pair(kUniform, kTwoPoint, {{"B", 0.5}})),
            "E X^2 <= B^2 and E Y^2 <= B^2");
  BoundInputs bad;
  bad.scalars = {{"sigma", 1}, {"v", 0.5}};
  EXPECT_EQ(requirement("LEMMA43", bad), "v >= sigma >= 0");
  bad.scalars = {{"sigma", 0}, {"v", 1.2}};
  EXPECT_EQ(requirement("LEMMA43", bad), "v^2 - sigma^2 <= 1");
  EXPECT_THROW(evaluate_bound("P61", single(kUniform)), ConfigError);
}

// Every precondition failure names a requirement listed on the entry.
TEST(Evaluate, RequirementStringsComeFromCatalogue) {
  const std::vector<BoundInputs> inputs{
      pair(kTwoPoint, kTwoPoint, {{"T", 1}, {"sigma", 0.5}, {"v", 1}, {"a", 0}}),
      pair(scale_shift(kUniform, 3, 1), kTwoPoint, {{"T", 0.5}, {"sigma", 2}, {"v", 0.1}, {"a", 1}}),
      pair(kUniform, scale_shift(kUniform, 0.2, 0), {{"T", -1}, {"sigma", 0}, {"v", 3}, {"a", 1}}),
  };
  int failures = 0;
  for (const auto& s : catalogue()) {
    for (const auto& in : inputs) {
      try {
        evaluate_bound(s.id, in);
      } catch (const PreconditionError& e) {
        ++failures;
        EXPECT_NE(std::find(s.requirements.begin(), s.requirements.end(), e.requirement()),
                  s.requirements.end())
            << s.id << ": " << e.requirement();
      }
    }
  }
  EXPECT_GT(failures, 20);
}

TEST(Evaluate, AutoStandardizationRecordsMap) {
  const auto x = contaminated(0.1, 3), y = kUniform;
  const auto direct = evaluate_bound("EPI_UPPER", pair(half(x), half(y)));
  EXPECT_TRUE(direct.notes.empty());
  const auto moved = evaluate_bound("EPI_UPPER", pair(scale_shift(x, 2, 1), scale_shift(y, 2, -3)));
  ASSERT_EQ(moved.notes.size(), 2u);
  EXPECT_NE(moved.notes[0].find("X ->"), std::string::npos);
  EXPECT_NEAR(moved.lhs, direct.lhs, 1e-6);
  EXPECT_NEAR(moved.rhs, direct.rhs, 1e-6);
  EXPECT_TRUE(*moved.satisfied);
}

TEST(Evaluate, MedianShiftForT41) {
  const auto x = scale_shift(contaminated(0.3, 2), 1, 0.4);
  const auto r = evaluate_bound("T41", pair(half(x), half(contaminated(0.1, 3))));
  EXPECT_FALSE(r.satisfied.has_value());
  EXPECT_TRUE(std::isfinite(r.ratio));
  bool shifted = false;
  for (const auto& n : r.notes) shifted = shifted || n.find("X -> X -") != std::string::npos;
  EXPECT_TRUE(shifted);
}

TEST(Evaluate, ExplicitEntriesHoldOnRandomMixtures) {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 4; ++i) {
    const auto x = random_mixture(rng), y = random_mixture(rng);
    for (const char* id : {"PINSKER", "A31"}) {
      EXPECT_TRUE(*evaluate_bound(id, single(x)).satisfied) << id;
    }
    for (double t : {0.5, 2.0, 3.0}) {
      EXPECT_TRUE(*evaluate_bound("P61", single(x, {{"T", t}})).satisfied);
      EXPECT_TRUE(*evaluate_bound("A32", single(x, {{"T", t}})).satisfied);
      EXPECT_TRUE(*evaluate_bound("P71", pair(x, y, {{"T", t}})).satisfied);
    }
    for (const char* id : {"EPI_UPPER", "CHAIN", "A11", "A12a", "A12b"}) {
      EXPECT_TRUE(*evaluate_bound(id, pair(x, y)).satisfied) << id;
    }
    for (const char* id : {"A21a", "A21b", "A22a", "A22b", "A23"}) {
      EXPECT_TRUE(*evaluate_bound(id, pair(x, y, {{"sigma", 0.5}})).satisfied) << id;
    }
  }
}

TEST(Evaluate, Lemma31LowerBoundExact) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 4; ++i) {
    const auto r = evaluate_bound("LEMMA31", pair(random_mixture(rng), kUniform));
    ASSERT_EQ(r.sub_checks.size(), 1u);
    EXPECT_GE(r.sub_checks[0].rhs, -1e-12);
    EXPECT_TRUE(*r.satisfied);
    EXPECT_TRUE(std::isfinite(r.ratio));
  }
}

TEST(Evaluate, Lemma33ExplicitConstants) {
  // Nearly Gaussian pair: eps falls below min(eps0, eps1).
  const auto x = contaminated(0.05, 1.5), y = contaminated(0.02, 2);
  const auto r = evaluate_bound("LEMMA33", pair(x, y));
  ASSERT_EQ(r.sub_checks.size(), 3u);
  for (const auto& s : r.sub_checks) EXPECT_TRUE(s.satisfied) << s.name;
  EXPECT_TRUE(*r.satisfied);
  // Far from Gaussian: no explicit claim.
  const auto far = evaluate_bound("LEMMA33", pair(kTwoPoint, kUniform));
  EXPECT_TRUE(far.sub_checks.empty());
  EXPECT_FALSE(far.satisfied.has_value());
}

TEST(Evaluate, ConstantModeRatios) {
  const auto x = contaminated(0.1, 3), y = kUniform;
  for (const char* id : {"T21", "T22", "T23", "T41", "LEMMA42", "T44", "P81", "P91", "P92", "P93"}) {
    const auto r = evaluate_bound(id, pair(x, y));
    EXPECT_TRUE(r.constant_mode);
    EXPECT_FALSE(r.satisfied.has_value()) << id;
    EXPECT_TRUE(std::isfinite(r.ratio)) << id;
    EXPECT_GE(r.ratio, 0.0) << id;
  }
  for (const char* id : {"P101", "P102"}) {
    EXPECT_TRUE(std::isfinite(evaluate_bound(id, pair(x, y, {{"sigma", 0.5}})).ratio)) << id;
  }
  for (const char* id : {"T51", "P111", "T11"}) {
    EXPECT_TRUE(std::isfinite(evaluate_bound(id, pair(half(x), half(y), {{"sigma", 0.5}})).ratio))
        << id;
  }
}

// Substituting the largest observed ratio back into the lower bound keeps
// every member above it.
TEST(Evaluate, LowerBoundDirection) {
  std::vector<std::pair<Distribution, Distribution>> pairs{
      {contaminated(0.1, 3), kUniform},
      {kTwoPoint, kUniform},
      {contaminated(0.3, 2), kTwoPoint},
  };
  for (const char* id : {"P102", "T11"}) {
    std::vector<BoundCheckReport> reports;
    double c = 0;
    for (const auto& [x, y] : pairs) {
      for (double s : {0.25, 0.5, 1.0}) {
        const bool total = std::string(id) == "T11";
        auto in = total ? pair(half(x), half(y), {{"sigma", s}}) : pair(x, y, {{"sigma", s}});
        reports.push_back(evaluate_bound(id, in));
        EXPECT_EQ(reports.back().direction, Direction::lower);
        c = std::max(c, reports.back().ratio);
      }
    }
    EXPECT_TRUE(std::isfinite(c));
    for (const auto& r : reports) {
      double a = 0;
      for (const auto& n : r.notes) {
        if (n.rfind("exponent = ", 0) == 0) a = std::stod(n.substr(11));
      }
      ASSERT_GT(a, 0);
      EXPECT_GE(r.lhs, std::exp(-c * a) * (1 - 1e-9) - r.err_budget) << id;
    }
  }
}
