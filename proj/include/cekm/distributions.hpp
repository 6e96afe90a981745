#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cekm/random.hpp"

namespace cekm {

enum class Family { pareto, burr, frechet, beta, weibull, exponential, gpd };

// Tail summary of a parametric family: extreme value index, right endpoint,
// and (for Gumbel-domain families) the hazard data needed to pair it with a
// censoring family.
struct TailProfile {
  double gamma = 0.0;
  double right_endpoint = 0.0;
  // Gumbel-domain auxiliaries: survival ~ exp(-rate * x^shape); unused otherwise.
  double gumbel_shape = 0.0;
  double gumbel_rate = 0.0;

  // Asymptotic non-censoring proportion when this profile describes the event
  // variable and `censoring` the censoring variable. Defined for pairs in the
  // same max-domain of attraction; alpha_F + alpha_G = 1.
  double alpha_pair(const TailProfile& censoring) const;
};

// Immutable parametric distribution with closed-form cdf and quantile.
// Parametrizations:
//   pareto(alpha):      F(x) = 1 - x^-alpha,                x >= 1
//   burr(c, kappa):     F(x) = 1 - (1 + x^c)^-kappa,        x >= 0
//   frechet(alpha):     F(x) = exp(-x^-alpha),              x > 0
//   beta(a, b):         regularized incomplete beta on [0, 1]
//   weibull(k, scale):  F(x) = 1 - exp(-(x/scale)^k),       x >= 0
//   exp(rate):          F(x) = 1 - exp(-rate x),            x >= 0
//   gpd(gamma, mu, sigma): generalized Pareto
class Distribution {
 public:
  static Distribution pareto(double alpha);
  static Distribution burr(double c, double kappa);
  static Distribution frechet(double alpha);
  static Distribution beta(double a, double b);
  static Distribution weibull(double shape, double scale);
  static Distribution exponential(double rate);
  static Distribution gpd(double gamma, double mu, double sigma);

  // Literal syntax used by CLI and experiment configs, e.g. "pareto(2)",
  // "burr(1.4142,1.4142)", "exp(6)", "gpd(0.5,0,1)".
  static Distribution parse(std::string_view literal);
  std::string to_literal() const;

  double cdf(double x) const;
  double quantile(double p) const;  // p in (0,1)

  // n i.i.d. draws by inverse transform; the result is a pure function of the
  // stream state, so fixed seeds reproduce exactly.
  std::vector<double> sample(RandomStream& rng, std::size_t n) const;

  TailProfile tail_profile() const;

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

 private:
  Distribution(Family f, std::vector<double> params);
  Family family_;
  std::vector<double> params_;
};

// Regularized incomplete beta function I_x(a, b), exposed for tests.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace cekm
