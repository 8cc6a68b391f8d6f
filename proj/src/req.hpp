#pragma once

// Requirement strings shared by the catalogue and the evaluator. A
// PreconditionError always carries one of these verbatim.
namespace entstab::req {

inline constexpr const char* kXDensity = "X has a density";
inline constexpr const char* kYDensity = "Y has a density";
inline constexpr const char* kXBoundedDensity = "X has a bounded density";
inline constexpr const char* kYBoundedDensity = "Y has a bounded density";
inline constexpr const char* kXVar = "Var(X) > 0";
inline constexpr const char* kYVar = "Var(Y) > 0";
inline constexpr const char* kTotalVar = "Var(X+Y) = 1";
inline constexpr const char* kSecondMoment = "E X^2 <= B^2 and E Y^2 <= B^2";
inline constexpr const char* kSigmaPos = "sigma > 0";
inline constexpr const char* kSigmaUnit = "0 < sigma <= 1";
inline constexpr const char* kMeanZero = "E X = 0";
inline constexpr const char* kMeansZero = "E X = E Y = 0";
inline constexpr const char* kUnitVar = "Var(X) = 1";
inline constexpr const char* kUnitVars = "Var(X) = Var(Y) = 1";
inline constexpr const char* kEqualVar = "Var(X) = Var(Y) > 0";
inline constexpr const char* kTNonneg = "T >= 0";
inline constexpr const char* kTPos = "T > 0";
inline constexpr const char* kTGe2 = "T >= 2";
inline constexpr const char* kEpsEps0 = "eps <= eps0";
inline constexpr const char* kEpsBelowOne = "eps < 1";
inline constexpr const char* kEpsPositiveBelowOne = "0 < eps < 1";
inline constexpr const char* kDBelowOne = "0 < D(X) < 1";
inline constexpr const char* kVSigma = "v >= sigma >= 0";
inline constexpr const char* kVSigmaGap = "v^2 - sigma^2 <= 1";
inline constexpr const char* kTruncPos = "sigma1 > 0 and sigma2 > 0";

}  // namespace entstab::req
