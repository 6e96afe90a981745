#pragma once

#include <utility>

#include "cekm/censored_data.hpp"
#include "cekm/estimators.hpp"
#include "cekm/phi.hpp"
#include "cekm/random.hpp"

namespace cekm {

// Limiting normal law of sqrt(k) * (estimator - target).
struct AsymptoticLaw {
  double bias = 0.0;
  double variance = 0.0;
};

// Second-order inputs entering only through scalar limits. rho (and rho_tilde
// in the Gumbel case) are the second-order parameters; lambda is the limit of
// sqrt(k) times the relevant auxiliary function; lambda_hat feeds the second
// bias channel of the Gumbel and Weibull cases.
struct SecondOrderParams {
  double rho = 0.0;
  double lambda = 0.0;
  double lambda_hat = 0.0;
  double rho_tilde = 0.0;
};

// h_rho(x) = log x for rho = 0, (x^rho - 1)/rho otherwise; x >= 1.
double h_rho(double x, double rho);

// H_{gamma,rho}(x) = (1/rho) * ((x^{gamma+rho}-1)/(gamma+rho) - (x^gamma-1)/gamma),
// with the analytic limits at gamma = 0 and/or rho = 0.
double H_gamma_rho(double x, double gamma, double rho);

// Standard normal quantile (Wichura's AS241), exposed for interval tests.
double normal_quantile(double p);

// Product-limit Hill estimator law: N(lambda/(1-rho), gG*gF^2/(gG-gF));
// requires gG > gF > 0.
AsymptoticLaw hill_asymptotics(double gamma_f, double gamma_g, const SecondOrderParams& so);

// Law of the top-k product-limit cdf at x0 > 1; requires gG >= gF > 0.
AsymptoticLaw ekm_cdf_asymptotics(double x0, double gamma_f, double gamma_g,
                                  const SecondOrderParams& so);

// Moment estimator laws per max-domain of attraction.
//   pos : gG > gF > 0
//   zero: alpha_f in (1/2, 1]
//   neg : gF < 0 and 1/gF < 1/gG
AsymptoticLaw moment_asymptotics_pos(double gamma_f, double gamma_g, const SecondOrderParams& so);
AsymptoticLaw moment_asymptotics_zero(double alpha_f, const SecondOrderParams& so);
AsymptoticLaw moment_asymptotics_neg(double gamma_f, double gamma_g, const SecondOrderParams& so);

// Weibull-case variance pieces, separately testable before assembly via
// sigma^2 = a1^2 s1 + 2 a1 a2 s12 + a2^2 s2.
double moment_neg_sigma1_sq(double gamma_f, double gamma_g);
double moment_neg_sigma2_sq(double gamma_f, double gamma_g);
double moment_neg_sigma12(double gamma_f, double gamma_g);
double moment_neg_a1(double gamma_f, double gamma_g);
double moment_neg_a2(double gamma_f, double gamma_g);

// Uncensored limit of the Weibull-case variance (gG -> -inf), the classical
// moment-estimator variance for gamma < 0.
double moment_neg_variance_uncensored(double gamma_f);

// Joint law of the first two product-limit log-moments around
// (gF, 2 gF^2): bias pair lambda * b and 2x2 covariance; gG > gF > 0.
struct MomentPairLaw {
  double bias1 = 0.0;
  double bias2 = 0.0;
  double cov11 = 0.0;
  double cov12 = 0.0;
  double cov22 = 0.0;
};
MomentPairLaw moment_pair_asymptotics(double gamma_f, double gamma_g,
                                      const SecondOrderParams& so);

// Limit variance var(W(phi)) under the limit Pareto pair
// (1-F = x^{-1/gF}, 1-G = x^{-1/gG}), by nested adaptive quadrature of the
// gamma_0/gamma_1/gamma_2 integrals; absolute error target 1e-8. Requires
// gG > gF > 0 plus the square-integrability guard for power integrands.
double limit_variance_quadrature(const NamedPhi& phi, double gamma_f, double gamma_g);

// var(W(c1 log + c2 log^2)) by the same quadrature; bilinearity in (c1, c2)
// cross-checks the off-diagonal of the two-dimensional log-moment law.
double limit_variance_quadrature_logmix(double c1, double c2, double gamma_f, double gamma_g);

// Monte-Carlo estimate of the same quantity from i.i.d. draws of W(phi),
// with closed-form gamma_1/gamma_2 evaluations; cross-check companion of the
// quadrature route.
struct McVariance {
  double variance = 0.0;
  double std_error = 0.0;
};
McVariance limit_variance_mc(const NamedPhi& phi, double gamma_f, double gamma_g,
                             std::size_t draws, RandomStream& rng);

// Variance of the limiting law evaluated at plug-in parameters
// (gamma_hat, p_hat): Hill plug-ins invert alpha_F = gG/(gF+gG); the moment
// estimator routes by the classified max-domain. Second-order bias channels
// are set to zero.
double plugin_variance(const TailView& view, const EviEstimate& estimate);

// gamma_hat +/- z_{(1+level)/2} * sqrt(variance / k).
std::pair<double, double> confidence_interval(double gamma_hat, std::size_t k, double variance,
                                              double level);

}  // namespace cekm
