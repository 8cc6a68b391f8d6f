#include <algorithm>

#include "entstab/bounds.hpp"
#include "entstab/errors.hpp"
#include "req.hpp"

namespace entstab {

namespace {

BoundSpec entry(std::string id, std::string statement, std::vector<std::string> requirements,
                bool constant_mode, std::vector<std::string> inputs,
                std::string normalization = "none", Direction dir = Direction::upper) {
  BoundSpec s;
  s.id = std::move(id);
  s.statement = std::move(statement);
  s.requirements = std::move(requirements);
  s.constant_mode = constant_mode;
  s.inputs = std::move(inputs);
  s.normalization = std::move(normalization);
  s.direction = dir;
  return s;
}

std::vector<BoundSpec> build() {
  using namespace req;
  std::vector<BoundSpec> c;
  const std::vector<std::string> xy{"X", "Y"};
  const std::vector<std::string> xys{"X", "Y", "sigma"};

  // explicit constants
  c.push_back(entry("PINSKER", "(1/2) ||F - Phi_{a,sigma}||_TV^2 <= D(X)", {kXDensity, kXVar},
                    false, {"X"}));
  c.push_back(entry("EPI_UPPER", "D(X+Y) <= Var(X) D(X) + Var(Y) D(Y)",
                    {kXDensity, kYDensity, kTotalVar}, false, xy, "center+rescale"));
  c.push_back(entry("CHAIN", "0 <= L(F,G) <= ||F - G|| <= (1/2) ||F - G||_TV <= 1", {}, false, xy));
  c.push_back(entry("A11", "L(F,G) <= W1(F,G)^{1/2}", {}, false, xy));
  c.push_back(entry("A12a", "W1(F,G) <= 2 L(F,G) + 4 B L(F,G)^{1/2}", {kSecondMoment}, false,
                    {"X", "Y", "B"}));
  c.push_back(entry("A12b", "W1(F,G) <= 4 B ||F - G||^{1/2}", {kSecondMoment}, false,
                    {"X", "Y", "B"}));
  c.push_back(entry("A21a", "sup_x |p_sigma(x) - q_sigma(x)| <= ||F - G|| / sigma", {kSigmaPos},
                    false, xys));
  c.push_back(entry("A21b", "||F_sigma - G_sigma||_TV <= W1(F,G) / sigma", {kSigmaPos}, false, xys));
  c.push_back(entry("A22a", "||F_sigma - G_sigma||_TV <= (2/sigma) (L(F,G) + 2 B L(F,G)^{1/2})",
                    {kSigmaPos, kSecondMoment}, false, {"X", "Y", "sigma", "B"}));
  c.push_back(entry("A22b", "||F_sigma - G_sigma||_TV <= (4B/sigma) ||F - G||^{1/2}",
                    {kSigmaPos, kSecondMoment}, false, {"X", "Y", "sigma", "B"}));
  c.push_back(entry("A23", "sup_x |p_sigma(x) - q_sigma(x)| <= (L(F,G)/sigma) (1 + 1/(2 sigma))",
                    {kSigmaPos}, false, xys));
  c.push_back(entry("A31", "D(X) <= log(1 + v Delta(X) sqrt(2 pi)) + 1/2",
                    {kXBoundedDensity, kXVar}, false, {"X"}, "center"));
  c.push_back(entry("A32",
                    "D(X) <= Delta(X) (sqrt(2 pi) + 2T + 2T log(1 + Delta(X) sqrt(2 pi) e^{T^2/2}))"
                    " + (1/2) delta_X(T)",
                    {kXBoundedDensity, kMeanZero, kUnitVar, kTNonneg}, false, {"X", "T"}));
  c.push_back(entry("LEMMA32", "|m(X)| <= 2 and |m(Y)| <= 2 when ||F*G - Phi|| <= eps0",
                    {kXVar, kYVar, kEpsEps0}, false, xy, "center+rescale"));
  c.push_back(entry("LEMMA43", "L(Phi_sigma, Phi_v)^2 <= (v^2 - sigma^2) log(2/(v^2 - sigma^2))",
                    {kVSigma, kVSigmaGap}, false, {"sigma", "v"}));
  c.push_back(entry("NORMAL_SHIFT_K", "||Phi_{a,sigma} - Phi_{0,sigma}|| <= |a| / (sigma sqrt(2 pi))",
                    {kSigmaPos}, false, {"a", "sigma"}));
  c.push_back(entry("P61", "delta_X(T) <= 4 D(X) + 4 e^{-T^2/4}",
                    {kXDensity, kMeanZero, kUnitVar, kTPos}, false, {"X", "T"}));
  c.push_back(entry("P62", "delta_X(T) <= T^2 D(X) + 6T e^{-T^2/2}",
                    {kXDensity, kMeanZero, kUnitVar, kTGe2}, false, {"X", "T"}));
  c.push_back(entry("ENT_CHEB", "P{|X| >= 2 sqrt(log(1/D))} <= 2D / log(1/D), D = D(X)",
                    {kXDensity, kMeanZero, kUnitVar, kDBelowOne}, false, {"X"}));
  c.push_back(entry("P71", "delta_X(T) / B^2 <= 16 D(X+Y) + 16 e^{-T^2/(8B^2)}, B^2 = Var(X+Y)",
                    {kXDensity, kMeansZero, kTNonneg}, false, {"X", "Y", "T"}));

  // unspecified constants, C := 1
  c.push_back(entry("T21", "||F - Phi|| <= C / sqrt(log(1/eps)), eps = ||F*G - Phi*Phi||",
                    {kEqualVar, kEpsBelowOne}, true, xy, "center+rescale"));
  c.push_back(entry("T22",
                    "||F - Phi_{a1,sigma1}|| <= C m(sigma1,eps) / (sigma1 sqrt(log(1/eps))),"
                    " eps = ||F*G - Phi||",
                    {kTruncPos, kEpsBelowOne}, true, xy, "median-shift"));
  c.push_back(entry("T23",
                    "||F - Phi_{v1}|| <= C m(v1,eps) / (v1 sqrt(log(1/eps))), eps = ||F*G - Phi||",
                    {kXVar, kYVar, kEpsBelowOne}, true, xy, "center+rescale"));
  c.push_back(entry("LEMMA31", "0 <= 1 - (sigma1^2 + sigma2^2) <= C N^2 sqrt(eps)",
                    {kXVar, kYVar, kEpsBelowOne}, true, xy, "center+rescale"));
  c.push_back(entry("LEMMA33",
                    "||F* - F||, ||G* - G||, ||F* * G* - Phi|| <= C sqrt(eps);"
                    " 6, 6, 13 sqrt(eps) when eps < min(eps0, eps1)",
                    {kXVar, kYVar, kEpsBelowOne}, true, xy, "center+rescale"));
  c.push_back(entry("T41",
                    "L(F, Phi_{a1,sigma1}) <= C (log log(4/eps))^2 / sqrt(log(1/eps)),"
                    " eps = ||F*G - Phi||",
                    {kEpsBelowOne}, true, xy, "median-shift"));
  c.push_back(entry("LEMMA42",
                    "L(F, Phi_{v1}) <= C (log log(4/eps))^2 / sqrt(log(1/eps)) + L(Phi_{sigma1},"
                    " Phi_{v1}), eps = L(F*G, Phi)",
                    {kXVar, kYVar, kEpsBelowOne}, true, xy, "center+rescale"));
  c.push_back(entry("T44",
                    "L(F, Phi_{v1}) <= C (log log(4/eps))^2 / sqrt(log(1/eps)) +"
                    " R(delta_X(N)), eps = L(F*G, Phi)",
                    {kXVar, kYVar, kEpsBelowOne}, true, xy, "center+rescale"));
  c.push_back(entry("T51",
                    "||F_sigma - N(0, v1^2 + sigma^2)||_TV <= (C/sigma) (1/log(1/eps))^{1/4},"
                    " eps = (1/2) ||F_sigma*G_sigma - N(0, 1 + 2 sigma^2)||_TV",
                    {kMeansZero, kTotalVar, kSigmaUnit, kEpsBelowOne}, true, xys));
  c.push_back(entry("P81",
                    "L(F, Phi_{v1}) <= C (log log(4/eps))^2 / sqrt(log(1/eps)), eps = D(X+Y)/2",
                    {kXDensity, kXVar, kYVar, kEpsBelowOne}, true, xy, "center+rescale"));
  c.push_back(entry("P91",
                    "c Var(X) D(X) <= D(X+Y) + Delta(X) log^{3/2}(2 + 1/(sqrt(Var X) Delta(X)))",
                    {kXBoundedDensity, kXVar, kYVar}, true, xy, "center+rescale"));
  c.push_back(entry("P92",
                    "c (v1^2 D(X) + v2^2 D(Y)) <= D(X+Y) + Delta(X) log^{3/2}(2 + 1/(v1 Delta(X)))"
                    " + Delta(Y) log^{3/2}(2 + 1/(v2 Delta(Y)))",
                    {kXBoundedDensity, kYBoundedDensity, kXVar, kYVar}, true, xy,
                    "center+rescale"));
  c.push_back(entry("P93", "D(X) <= 16 D(X+Y) + C Delta(X) log^{3/2}(2 + 1/Delta(X))",
                    {kXBoundedDensity, kEqualVar}, true, xy, "center+rescale"));
  c.push_back(entry("P101",
                    "D(X_sigma) + D(Y_sigma) <= C log^{3/2}(2 + sigma sqrt(log(1/eps))) /"
                    " (sigma sqrt(log(1/eps))), eps = D(X_sigma + Y_sigma)/2",
                    {kUnitVars, kSigmaUnit, kEpsPositiveBelowOne}, true, xys));
  c.push_back(entry("P102",
                    "D(X_sigma + Y_sigma) >= exp(-C log^3(2 + 1/D) / (sigma^2 D^2)),"
                    " D = D(X_sigma) + D(Y_sigma)",
                    {kUnitVars, kSigmaUnit}, true, xys, "none", Direction::lower));
  c.push_back(entry("P111",
                    "Var(X_sigma) D(X_sigma) + Var(Y_sigma) D(Y_sigma) <= C (log log(4/eps))^2 /"
                    " (sigma^2 sqrt(log(1/eps))) log^{3/2}(2 + sigma sqrt(log(1/eps)) /"
                    " (log log(4/eps))^2), eps = D(X_sigma + Y_sigma)/2",
                    {kTotalVar, kSigmaUnit, kEpsPositiveBelowOne}, true, xys));
  c.push_back(entry("T11",
                    "D(X_sigma + Y_sigma) >= exp(-C log^7(2 + 1/D) / D^2),"
                    " D = sigma^2 (Var(X_sigma) D(X_sigma) + Var(Y_sigma) D(Y_sigma))",
                    {kTotalVar, kSigmaUnit}, true, xys, "none", Direction::lower));
  std::sort(c.begin(), c.end(), [](const BoundSpec& a, const BoundSpec& b) { return a.id < b.id; });
  return c;
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::upper ? "upper" : "lower"; }

const std::vector<BoundSpec>& catalogue() {
  static const std::vector<BoundSpec> c = build();
  return c;
}

const BoundSpec& find_bound(const std::string& id) {
  for (const auto& s : catalogue()) {
    if (s.id == id) return s;
  }
  std::string known;
  for (const auto& s : catalogue()) known += (known.empty() ? "" : ", ") + s.id;
  throw CatalogueError("unknown bound id '" + id + "' (known: " + known + ")");
}

std::vector<std::string> constant_mode_ids() {
  std::vector<std::string> out;
  for (const auto& s : catalogue()) {
    if (s.constant_mode) out.push_back(s.id);
  }
  return out;
}

}  // namespace entstab
