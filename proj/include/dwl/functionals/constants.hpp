#pragma once

namespace dwl {

/// omega_1 = pi^4 / (1 + pi^4).
double omega1();
/// omega_2 = pi^4 / (1 + pi^2 + pi^4).
double omega2();
/// omega_3 = pi^2 / (1 + pi^2).
double omega3();

/// Every explicit constant of the energy estimates for one (eps, gamma) pair.
///
/// The primed pair k1p_sq, k3p_sq belongs to the variant without a Lipschitz
/// bound on F; k3_sq depends on the growth bound K of F_u and on the split
/// parameter lambda_split used to share the u_xx^2 term.
struct ConstantsBundle {
  double epsilon = 0.0;
  double gamma = 0.0;
  double omega1 = 0.0, omega2 = 0.0, omega3 = 0.0;
  double c1_sq = 0.0, c2_sq = 0.0, c3_sq = 0.0;
  double A = 0.0;
  double p = 0.0;
  double k1_sq = 0.0, k3_sq = 0.0;
  double k1p_sq = 0.0, k3p_sq = 0.0;
  double lambda_split = 0.0;
  double K_bound = 0.0;
};

/// c_2^2 = max{eps(1+eps)/2, (1+eps+gamma)/2}; valid for any gamma > 0.
double c2_sq_of(double epsilon, double gamma);
/// k_1^2 = min{eps^2 omega_3 / 8, (2 gamma - 1)/4}.
double k1_sq_of(double epsilon, double gamma);
/// k_1'^2 = min{gamma - 1/2, eps^2/4, (1 + gamma) omega_3} / 2.
double k1p_sq_of(double epsilon, double gamma);
/// k_3^2 = min{3 eps (1-lambda) omega_1 / 4, eps (3 lambda pi^2/4 - K), 1}.
double k3_sq_of(double epsilon, double K, double lambda_split);
/// k_3'^2 = min{eps omega_2 / 4, 1}.
double k3p_sq_of(double epsilon);

/// The lambda in (4K/(3 pi^2), 1) that maximizes k_3^2: the two linear branches cross there.
/// Throws InvalidArgument unless 0 <= K < 3 pi^2 / 4.
double optimal_lambda_split(double epsilon, double K);

/// Populate every constant. Throws InvalidArgument when gamma <= 1/2, eps <= 0,
/// lambda_split is outside (0,1) or 3 lambda pi^2 / 4 <= K.
ConstantsBundle compute_constants(double epsilon, double gamma, double K_bound, double lambda_split);

/// Same, with lambda_split chosen by optimal_lambda_split.
ConstantsBundle compute_constants(double epsilon, double gamma, double K_bound = 1.0);

}  // namespace dwl
