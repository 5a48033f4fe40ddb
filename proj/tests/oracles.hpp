#pragma once

// Reference values computed independently of the library: scipy/mpmath for special
// functions and the double integral, a two-million-term cosine sum for theta, and
// plain closed-form evaluation for the constants.
namespace oracle {

inline constexpr double kI0_2 = 2.279585302336067;
inline constexpr double kI0_20 = 43558282.559553534;
inline constexpr double kI0_50 = 2.9325537838493362e+20;

inline constexpr double kK_1_05 = 0.093661130355224928;   // K(1, 0.5), eps = c = 1
inline constexpr double kK_03_02 = 0.13012304012343117;   // K(0.3, 0.2)

inline constexpr double kTheta_03_05 = 0.28023832389294;
inline constexpr double kTheta_07_01 = 0.0120564048307;
inline constexpr double kTheta_05_2 = 0.99718047155361;
inline constexpr double kTheta_0_1 = 0.56682311;  // corner point, series converges like 1/N

inline constexpr double kOmega1 = 0.9898383371953463;
inline constexpr double kOmega2 = 0.8996145607645855;
inline constexpr double kOmega3 = 0.9080003316496248;
inline constexpr double kC1sq = 0.12372979214941829;  // eps = gamma = 1
inline constexpr double kC3sq = 0.44980728038229273;
inline constexpr double kP = 0.2998715202548618;

inline constexpr double kM_inf0 = 11.572246768374033;   // eps = 1, inf a = 0
inline constexpr double kM_inf05 = 11.043252355454134;  // eps = 1, inf a = 0.5
// Damped Sine-Gordon schedule: eps = 1, K = 1, |a| <= 0.5, inf a = 0.5.
inline constexpr double kGammaSG = 11.543252355454134;
inline constexpr double kC2sqSG = 6.771626177727067;
inline constexpr double kK1sqSG = 0.1135000414562031;
inline constexpr double kLambdaK1 = 0.21393102081918017;
inline constexpr double kK3sqK1 = 0.5835609084548895;
inline constexpr double kC_SG = 0.04306714949331107;  // with m = 1.001
inline constexpr double kD_SG = 10.926272356053683;

// Power potential kappa = 1, tau = 0.5 with the same gamma.
inline constexpr double kK3psq = 0.22490364019114636;
inline constexpr double kE_stated = 0.0036961120250442307;
inline constexpr double kE_derived = 0.0017528444106670981;
inline constexpr double kWstar = 31.49391660842024;

}  // namespace oracle
