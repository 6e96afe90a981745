#include "cekm/asymptotics.hpp"

#include <cmath>
#include <vector>

#include "cekm/errors.hpp"
#include "cekm/quadrature.hpp"

namespace cekm {

namespace {

constexpr double kZeroTol = 1e-12;

void guard(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace

double h_rho(double x, double rho) {
  guard(x >= 1.0, "h_rho: x must be >= 1");
  guard(rho <= 0.0, "h_rho: rho must be <= 0");
  const double lx = std::log(x);
  if (rho == 0.0) return lx;
  return std::expm1(rho * lx) / rho;
}

double H_gamma_rho(double x, double gamma, double rho) {
  guard(x >= 1.0, "H_gamma_rho: x must be >= 1");
  const double lx = std::log(x);
  const bool g0 = std::fabs(gamma) < kZeroTol;
  const bool r0 = std::fabs(rho) < kZeroTol;
  if (g0 && r0) return 0.5 * lx * lx;
  if (r0) {
    // limit rho -> 0: (x^g (g log x - 1) + 1) / g^2
    return (std::pow(x, gamma) * (gamma * lx - 1.0) + 1.0) / (gamma * gamma);
  }
  if (g0) {
    return (std::expm1(rho * lx) / rho - lx) / rho;
  }
  if (std::fabs(gamma + rho) < kZeroTol) {
    return (lx - std::expm1(gamma * lx) / gamma) / rho;
  }
  return (std::expm1((gamma + rho) * lx) / (gamma + rho) - std::expm1(gamma * lx) / gamma) / rho;
}

// Wichura's algorithm AS241 (PPND16): standard normal quantile to ~1e-15.
double normal_quantile(double p) {
  guard(p > 0.0 && p < 1.0, "normal_quantile: p must lie in (0,1)");
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

AsymptoticLaw hill_asymptotics(double gamma_f, double gamma_g, const SecondOrderParams& so) {
  guard(gamma_f > 0.0, "hill_asymptotics: gamma_F > 0 required");
  guard(gamma_g > gamma_f, "hill_asymptotics: gamma_G > gamma_F required");
  AsymptoticLaw law;
  law.bias = so.lambda / (1.0 - so.rho);
  law.variance = gamma_g * gamma_f * gamma_f / (gamma_g - gamma_f);
  return law;
}

AsymptoticLaw ekm_cdf_asymptotics(double x0, double gamma_f, double gamma_g,
                                  const SecondOrderParams& so) {
  guard(x0 > 1.0, "ekm_cdf_asymptotics: x0 > 1 required");
  guard(gamma_f > 0.0, "ekm_cdf_asymptotics: gamma_F > 0 required");
  guard(gamma_g >= gamma_f, "ekm_cdf_asymptotics: gamma_G >= gamma_F required");
  const double gamma_h = gamma_f * gamma_g / (gamma_f + gamma_g);
  const double xf = std::pow(x0, 1.0 / gamma_f);
  AsymptoticLaw law;
  law.bias = so.lambda * h_rho(xf, so.rho) / (gamma_f * xf);
  law.variance = (gamma_h / gamma_f) * (std::pow(x0, 1.0 / gamma_g) - 1.0 / xf) / xf;
  return law;
}

AsymptoticLaw moment_asymptotics_pos(double gamma_f, double gamma_g,
                                     const SecondOrderParams& so) {
  guard(gamma_f > 0.0, "moment_asymptotics_pos: gamma_F > 0 required");
  guard(gamma_g > gamma_f, "moment_asymptotics_pos: gamma_G > gamma_F required");
  const double rho = so.rho;
  AsymptoticLaw law;
  law.bias = so.lambda * (gamma_f - gamma_f * rho + rho) /
             (gamma_f * (1.0 - rho) * (1.0 - rho));
  const double d = gamma_g - gamma_f;
  law.variance = (gamma_g * gamma_g * gamma_g +
                  gamma_g * gamma_f * gamma_f * (d + 1.0) * (d + 1.0)) /
                 (d * d * d);
  return law;
}

AsymptoticLaw moment_asymptotics_zero(double alpha_f, const SecondOrderParams& so) {
  guard(alpha_f > 0.5 && alpha_f <= 1.0, "moment_asymptotics_zero: alpha_F in (1/2, 1] required");
  const double alpha_g = 1.0 - alpha_f;
  const double rt = so.rho_tilde;
  AsymptoticLaw law;
  law.bias = so.lambda * (1.0 + alpha_f) / (alpha_f * alpha_f) +
             so.lambda_hat * (1.0 - rt + alpha_f * rt) / ((1.0 - rt) * (1.0 - rt));
  const double d = alpha_f - alpha_g;
  law.variance = alpha_f * (alpha_f * alpha_f + alpha_g * alpha_g) / (d * d * d);
  return law;
}

namespace {

void guard_neg_case(double gf, double gg) {
  guard(gf < 0.0, "moment_asymptotics_neg: gamma_F < 0 required");
  guard(gg < 0.0, "moment_asymptotics_neg: gamma_G < 0 required");
  guard(1.0 / gf < 1.0 / gg, "moment_asymptotics_neg: 1/gamma_F < 1/gamma_G required");
}

}  // namespace

double moment_neg_sigma1_sq(double gf, double gg) {
  guard_neg_case(gf, gg);
  const double s = gf + gg;
  return s * s / (gg * (1.0 - gf) * (1.0 - gf) * (gg * (1.0 - 2.0 * gf) - gf));
}

double moment_neg_sigma2_sq(double gf, double gg) {
  guard_neg_case(gf, gg);
  const double s = gf + gg;
  const double num = 4.0 * (s * s) * (s * s) *
                     (22.0 * gf * gf * gg * gg - 21.0 * gf * gg * gg + 5.0 * gg * gg +
                      9.0 * gf * gf * gg - 4.0 * gf * gg + gf * gf);
  double den = gg * gg * gg * (1.0 - gf) * (1.0 - gf) * (1.0 - 2.0 * gf) * (1.0 - 2.0 * gf);
  for (int j = 2; j <= 4; ++j) den *= (gg - gf - j * gf * gg);
  return num / den;
}

double moment_neg_sigma12(double gf, double gg) {
  guard_neg_case(gf, gg);
  const double s = gf + gg;
  const double num = 2.0 * s * s * s * (2.0 * gg - gf - 4.0 * gf * gg);
  double den = gg * gg * (1.0 - gf) * (1.0 - gf) * (1.0 - 2.0 * gf);
  for (int j = 2; j <= 3; ++j) den *= (gg - gf - j * gf * gg);
  return num / den;
}

// Delta-method weight on the first log-moment. The direct calculation gives
// -2 gG (1-gF)^2 (1-2gF) / (gF+gG); only this version reproduces the known
// uncensored moment-estimator variance in the gG -> -inf limit (e.g. 1.8 at
// gF = -1/2) and matches simulation.
double moment_neg_a1(double gf, double gg) {
  guard_neg_case(gf, gg);
  return -2.0 * gg * (1.0 - gf) * (1.0 - gf) * (1.0 - 2.0 * gf) / (gf + gg);
}

double moment_neg_a2(double gf, double gg) {
  guard_neg_case(gf, gg);
  const double s = gf + gg;
  const double w = (1.0 - gf) * (1.0 - gf) * (1.0 - 2.0 * gf);
  return gg * gg * w * (1.0 - 2.0 * gf) / (2.0 * s * s);
}

double moment_neg_variance_uncensored(double gamma_f) {
  guard(gamma_f < 0.0, "moment_neg_variance_uncensored: gamma < 0 required");
  const double g = gamma_f;
  return (1.0 - g) * (1.0 - g) * (1.0 - 2.0 * g) *
         (4.0 - 8.0 * (1.0 - 2.0 * g) / (1.0 - 3.0 * g) +
          (5.0 - 11.0 * g) * (1.0 - 2.0 * g) / ((1.0 - 3.0 * g) * (1.0 - 4.0 * g)));
}

AsymptoticLaw moment_asymptotics_neg(double gamma_f, double gamma_g,
                                     const SecondOrderParams& so) {
  guard_neg_case(gamma_f, gamma_g);
  const double gf = gamma_f, gg = gamma_g, rho = so.rho;
  const double gh = gf * gg / (gf + gg);
  AsymptoticLaw law;
  law.bias =
      so.lambda * ((1.0 - gf) * (1.0 - 2.0 * gf) / (1.0 - gf - rho)) *
          ((2.0 - 3.0 * gf - rho) / (1.0 - 2.0 * gf - rho) - 2.0 / gf +
           1.0 / (gh * (1.0 - gf) * (1.0 - gf) * (1.0 - 2.0 * gf))) +
      so.lambda_hat * ((1.0 - gf) * (1.0 - gf - gf * gf) / (1.0 - 3.0 * gf) -
                       gf / (2.0 * gh * (1.0 - gf) * (1.0 - 2.0 * gf)));
  const double a1 = moment_neg_a1(gf, gg);
  const double a2 = moment_neg_a2(gf, gg);
  law.variance = a1 * a1 * moment_neg_sigma1_sq(gf, gg) +
                 2.0 * a1 * a2 * moment_neg_sigma12(gf, gg) +
                 a2 * a2 * moment_neg_sigma2_sq(gf, gg);
  if (!(law.variance > 0.0) || !std::isfinite(law.variance)) {
    throw DomainError("moment_asymptotics_neg: variance undefined at these parameters");
  }
  return law;
}

MomentPairLaw moment_pair_asymptotics(double gamma_f, double gamma_g,
                                      const SecondOrderParams& so) {
  guard(gamma_f > 0.0, "moment_pair_asymptotics: gamma_F > 0 required");
  guard(gamma_g > gamma_f, "moment_pair_asymptotics: gamma_G > gamma_F required");
  const double gf = gamma_f, gg = gamma_g, rho = so.rho;
  const double d = gg - gf;
  MomentPairLaw law;
  law.bias1 = so.lambda / (1.0 - rho);
  law.bias2 = so.lambda * 2.0 * gf * (2.0 - rho) / ((1.0 - rho) * (1.0 - rho));
  law.cov11 = gg * gf * gf / d;
  law.cov12 = 2.0 * gg * gf * gf * gf * (2.0 * gg - gf) / (d * d);
  law.cov22 = 4.0 * gg * (gf * gf) * (gf * gf) * (5.0 * gg * gg - 4.0 * gg * gf + gf * gf) /
              (d * d * d);
  return law;
}

// ---------------------------------------------------------------------------
// Limit variance oracles under the limit Pareto pair.
//
// With a = 1/gF, b = 1/gG the minimum V has survival v^-(a+b) on [1, inf) and
// the censoring indicator is independent Bernoulli(a/(a+b)). The classical
// decomposition evaluates to
//   gamma_0(v) = v^b,
//   gamma_1(v) = a v^{a+b} psi(v),        psi(v) = int_v^inf phi(z) z^{-a-1} dz,
//   gamma_2(v) = ab int_1^v u^{a+b-1} psi(u) du
//              = (b gamma_1(v) - ab psi(1) + ab chi(v)) / (a+b),
//   chi(v)     = int_1^v phi(u) u^{b-1} du,
// where the gamma_2 reduction is integration by parts (psi' = -phi(u) u^{-a-1}).
// ---------------------------------------------------------------------------

namespace {

struct LimitModel {
  std::function<double(double)> phi;
  double a, b, p;   // p = P(uncensored) = a/(a+b)
  double x0 = 0.0;  // discontinuity of phi, 0 when none

  double psi(double v) const {
    // int_0^1 phi(v s^{-1/a}) ds * v^{-a} / a  (substitution s = (z/v)^{-a})
    std::vector<double> breaks;
    if (x0 > 0.0 && v < x0) breaks.push_back(std::pow(v / x0, a));
    const double inv_a = 1.0 / a;
    const auto integrand = [&](double s) { return phi(v * std::pow(s, -inv_a)); };
    const auto r = integrate_adaptive(integrand, 0.0, 1.0, 1e-12, 1e-9, breaks, 2000);
    return r.value * std::pow(v, -a) / a;
  }

  double chi(double v) const {
    if (v <= 1.0) return 0.0;
    // int_0^{log v} phi(e^w) e^{bw} dw
    const double upper = std::log(v);
    std::vector<double> breaks;
    if (x0 > 1.0 && x0 < v) breaks.push_back(std::log(x0));
    const auto integrand = [&](double w) { return phi(std::exp(w)) * std::exp(b * w); };
    const auto r = integrate_adaptive(integrand, 0.0, upper, 1e-12, 1e-9, breaks, 2000);
    return r.value;
  }

  double gamma1(double v, double psi_v) const { return a * std::pow(v, a + b) * psi_v; }

  double gamma2(double v, double gamma1_v, double psi1) const {
    return (b * gamma1_v - a * b * psi1 + a * b * chi(v)) / (a + b);
  }
};

double limit_variance_core(const LimitModel& model) {
  const double psi1 = model.psi(1.0);
  const double gamma_h = 1.0 / (model.a + model.b);

  const auto moments_at = [&](double v) {
    const double psi_v = model.psi(v);
    const double g1 = model.gamma1(v, psi_v);
    const double g2 = model.gamma2(v, g1, psi1);
    // W given V = v takes value (phi(v) gamma_0(v) - gamma_2(v)) with
    // probability p and (gamma_1(v) - gamma_2(v)) otherwise.
    const double w_obs = model.phi(v) * std::pow(v, model.b) - g2;
    const double w_cens = g1 - g2;
    const double m1 = model.p * w_obs + (1.0 - model.p) * w_cens;
    const double m2 = model.p * w_obs * w_obs + (1.0 - model.p) * w_cens * w_cens;
    return std::pair<double, double>{m1, m2};
  };

  // E[h(V)] = int_0^1 h(u^{-gamma_H}) du, softened once more with u = t^3.
  std::vector<double> breaks;
  if (model.x0 > 1.0) breaks.push_back(std::pow(model.x0, -1.0 / (3.0 * gamma_h)));
  const auto integrand_m1 = [&](double t) {
    const double v = std::pow(t, -3.0 * gamma_h);
    return 3.0 * t * t * moments_at(v).first;
  };
  const auto integrand_m2 = [&](double t) {
    const double v = std::pow(t, -3.0 * gamma_h);
    return 3.0 * t * t * moments_at(v).second;
  };
  const double mean = integrate_adaptive(integrand_m1, 0.0, 1.0, 1e-9, 1e-9, breaks).value;
  const double second = integrate_adaptive(integrand_m2, 0.0, 1.0, 1e-9, 1e-9, breaks).value;
  const double var = second - mean * mean;
  return var < 0.0 && var > -1e-10 ? 0.0 : var;
}

}  // namespace

double limit_variance_quadrature(const NamedPhi& phi, double gamma_f, double gamma_g) {
  guard(gamma_f > 0.0, "limit_variance_quadrature: gamma_F > 0 required");
  guard(gamma_g > gamma_f, "limit_variance_quadrature: gamma_G > gamma_F required");
  const double a = 1.0 / gamma_f, b = 1.0 / gamma_g;
  if (phi.kind() == NamedPhi::Kind::power) {
    // Square integrability of phi against the limit tail measure.
    guard(phi.param() < 0.5 * (a - b),
          "limit_variance_quadrature: power exponent violates the moment condition");
  }
  LimitModel model{phi.as_function(), a, b, a / (a + b),
                   phi.kind() == NamedPhi::Kind::indicator ? phi.param() : 0.0};
  return limit_variance_core(model);
}

double limit_variance_quadrature_logmix(double c1, double c2, double gamma_f, double gamma_g) {
  guard(gamma_f > 0.0, "limit_variance_quadrature_logmix: gamma_F > 0 required");
  guard(gamma_g > gamma_f, "limit_variance_quadrature_logmix: gamma_G > gamma_F required");
  const double a = 1.0 / gamma_f, b = 1.0 / gamma_g;
  LimitModel model{[c1, c2](double x) {
                     const double l = std::log(x);
                     return c1 * l + c2 * l * l;
                   },
                   a, b, a / (a + b), 0.0};
  return limit_variance_core(model);
}

namespace {

// Closed forms of gamma_1/gamma_2 for the named integrands, used by the
// Monte-Carlo cross-check so it does not share the quadrature code path.
struct ClosedFormW {
  NamedPhi phi;
  double a, b, gf, gg;

  double gamma1(double v) const {
    const double vb = std::pow(v, b);
    switch (phi.kind()) {
      case NamedPhi::Kind::one:
        return vb;
      case NamedPhi::Kind::log:
        return vb * (std::log(v) + gf);
      case NamedPhi::Kind::log_sq: {
        const double l = std::log(v);
        return vb * (l * l + 2.0 * gf * l + 2.0 * gf * gf);
      }
      case NamedPhi::Kind::power:
        return a * std::pow(v, phi.param() + b) / (a - phi.param());
      case NamedPhi::Kind::indicator: {
        const double x0 = phi.param();
        if (v > x0) return 0.0;
        return vb - std::pow(v, a + b) * std::pow(x0, -a);
      }
    }
    return 0.0;  // unreachable
  }

  double gamma2(double v) const {
    const double vb = std::pow(v, b);
    switch (phi.kind()) {
      case NamedPhi::Kind::one:
        return vb - 1.0;
      case NamedPhi::Kind::log:
        return vb * std::log(v) + (vb - 1.0) * (gf - gg);
      case NamedPhi::Kind::log_sq: {
        const double l = std::log(v);
        return vb * l * l + 2.0 * (gf - gg) * vb * l +
               2.0 * (gf * gf - gf * gg + gg * gg) * (vb - 1.0);
      }
      case NamedPhi::Kind::power: {
        const double p = phi.param();
        if (std::fabs(p + b) < kZeroTol) return a * b * std::log(v) / (a - p);
        return a * b * (std::pow(v, p + b) - 1.0) / ((a - p) * (p + b));
      }
      case NamedPhi::Kind::indicator: {
        const double x0 = phi.param();
        const double m = std::min(v, x0);
        return (std::pow(m, b) - 1.0) -
               b * std::pow(x0, -a) * (std::pow(m, a + b) - 1.0) / (a + b);
      }
    }
    return 0.0;  // unreachable
  }
};

}  // namespace

McVariance limit_variance_mc(const NamedPhi& phi, double gamma_f, double gamma_g,
                             std::size_t draws, RandomStream& rng) {
  guard(gamma_f > 0.0, "limit_variance_mc: gamma_F > 0 required");
  guard(gamma_g > gamma_f, "limit_variance_mc: gamma_G > gamma_F required");
  guard(draws >= 2, "limit_variance_mc: need at least two draws");
  const double a = 1.0 / gamma_f, b = 1.0 / gamma_g;
  if (phi.kind() == NamedPhi::Kind::power) {
    guard(phi.param() < 0.5 * (a - b),
          "limit_variance_mc: power exponent violates the moment condition");
  }
  const ClosedFormW w{phi, a, b, gamma_f, gamma_g};
  std::vector<double> values(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const double x = std::pow(rng.uniform(), -gamma_f);
    const double y = std::pow(rng.uniform(), -gamma_g);
    const double v = std::min(x, y);
    const double observed = x <= y ? phi(v) * std::pow(v, b) : w.gamma1(v);
    values[i] = observed - w.gamma2(v);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(draws);
  double m2 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(draws);
  McVariance out;
  out.variance = m2 / (n - 1.0);
  m2 /= n;
  m4 /= n;
  out.std_error = std::sqrt(std::max(0.0, m4 - m2 * m2) / n);
  return out;
}

double plugin_variance(const TailView& view, const EviEstimate& estimate) {
  const double p_hat = uncensored_fraction(view);
  guard(p_hat > 0.0, "plugin_variance: p_hat must be positive");
  const double g = estimate.gamma_hat;
  const bool hill = estimate.id == EstimatorId::hill_censored;
  const bool moment = estimate.id == EstimatorId::moment_censored;
  guard(hill || moment, "plugin_variance: defined for hill-censored and moment-censored only");

  if (hill) {
    if (p_hat >= 1.0) return g * g;  // uncensored limit of the Hill law
    guard(p_hat > 0.5, "plugin_variance: hill plug-in requires p_hat > 1/2 (gamma_G > gamma_F)");
    const double gamma_g = g * p_hat / (1.0 - p_hat);
    return hill_asymptotics(g, gamma_g, {}).variance;
  }

  switch (classify_mda(g)) {
    case MdaLabel::frechet: {
      if (p_hat >= 1.0) return 1.0 + g * g;
      guard(p_hat > 0.5,
            "plugin_variance: moment plug-in requires p_hat > 1/2 (alpha_F > 1/2)");
      const double gamma_g = g * p_hat / (1.0 - p_hat);
      return moment_asymptotics_pos(g, gamma_g, {}).variance;
    }
    case MdaLabel::gumbel: {
      guard(p_hat > 0.5,
            "plugin_variance: moment plug-in requires p_hat > 1/2 (alpha_F > 1/2)");
      return moment_asymptotics_zero(p_hat, {}).variance;
    }
    case MdaLabel::weibull: {
      if (p_hat >= 1.0) return moment_neg_variance_uncensored(g);
      guard(p_hat > 0.5,
            "plugin_variance: moment plug-in requires p_hat > 1/2 (alpha_F > 1/2)");
      const double gamma_g = g * p_hat / (1.0 - p_hat);
      return moment_asymptotics_neg(g, gamma_g, {}).variance;
    }
  }
  return 0.0;  // unreachable
}

std::pair<double, double> confidence_interval(double gamma_hat, std::size_t k, double variance,
                                              double level) {
  guard(level > 0.0 && level < 1.0, "confidence_interval: level must lie in (0,1)");
  guard(k >= 1, "confidence_interval: k must be >= 1");
  guard(variance >= 0.0, "confidence_interval: variance must be >= 0");
  const double half = normal_quantile(0.5 * (1.0 + level)) *
                      std::sqrt(variance / static_cast<double>(k));
  return {gamma_hat - half, gamma_hat + half};
}

}  // namespace cekm
