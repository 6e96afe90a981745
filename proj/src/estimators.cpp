#include "cekm/estimators.hpp"

#include <cmath>

#include "cekm/errors.hpp"

namespace cekm {

namespace {

constexpr double kSingularTol = 1e-12;  // absolute tolerance on M2 - M1^2

double moment_formula(double m1, double m2) {
  if (m2 <= kSingularTol || m2 - m1 * m1 <= kSingularTol) {
    throw SingularMomentError("moment estimator: M2 - M1^2 vanishes (constant tail ratios)");
  }
  return m1 + 1.0 - 0.5 / (1.0 - m1 * m1 / m2);
}

}  // namespace

std::string to_string(EstimatorId id) {
  switch (id) {
    case EstimatorId::hill_censored: return "hill-censored";
    case EstimatorId::moment_censored: return "moment-censored";
    case EstimatorId::hill_benchmark: return "benchmark-hill";
    case EstimatorId::moment_benchmark: return "benchmark-moment";
    case EstimatorId::moment_uncensored: return "moment-uncensored";
  }
  return "";  // unreachable
}

std::string to_string(MdaLabel label) {
  switch (label) {
    case MdaLabel::frechet: return "frechet";
    case MdaLabel::gumbel: return "gumbel";
    case MdaLabel::weibull: return "weibull";
  }
  return "";  // unreachable
}

MdaLabel classify_mda(double gamma_hat, double radius) {
  if (!(radius > 0.0)) throw DomainError("classify_mda: radius must be > 0");
  if (gamma_hat >= radius) return MdaLabel::frechet;
  if (gamma_hat <= -radius) return MdaLabel::weibull;
  return MdaLabel::gumbel;
}

EviEstimate hill_censored(const TailView& view, bool normalized) {
  const EkmWeights w = ekm_weights(view);
  if (w.total_mass <= 0.0) {
    throw DegenerateEstimateError("hill_censored: all top-k observations censored");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < view.k; ++i) {
    if (w.omega[i] != 0.0) s += w.omega[i] * std::log(view.ratios[i]);
  }
  EviEstimate e;
  e.gamma_hat = normalized ? s / w.total_mass : s;
  e.k = view.k;
  e.n = view.n;
  e.id = EstimatorId::hill_censored;
  e.normalized = normalized;
  e.mda_label = classify_mda(e.gamma_hat);
  return e;
}

double log_moment(const TailView& view, int r, bool normalized) {
  if (r < 1) throw DomainError("log_moment: order r must be >= 1");
  const EkmWeights w = ekm_weights(view);
  if (w.total_mass <= 0.0) {
    throw DegenerateEstimateError("log_moment: all top-k observations censored");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < view.k; ++i) {
    if (w.omega[i] != 0.0) s += w.omega[i] * std::pow(std::log(view.ratios[i]), r);
  }
  return normalized ? s / w.total_mass : s;
}

EviEstimate moment_censored(const TailView& view, bool normalized) {
  const EkmWeights w = ekm_weights(view);
  if (w.total_mass <= 0.0) {
    throw DegenerateEstimateError("moment_censored: all top-k observations censored");
  }
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < view.k; ++i) {
    if (w.omega[i] == 0.0) continue;
    const double l = std::log(view.ratios[i]);
    m1 += w.omega[i] * l;
    m2 += w.omega[i] * l * l;
  }
  if (normalized) {
    m1 /= w.total_mass;
    m2 /= w.total_mass;
  }
  EviEstimate e;
  e.gamma_hat = moment_formula(m1, m2);
  e.k = view.k;
  e.n = view.n;
  e.id = EstimatorId::moment_censored;
  e.normalized = normalized;
  e.mda_label = classify_mda(e.gamma_hat);
  return e;
}

double moment_uncensored(std::span<const double> ratios) {
  if (ratios.empty()) throw DomainError("moment_uncensored: empty input");
  double m1 = 0.0, m2 = 0.0;
  for (double r : ratios) {
    const double l = std::log(r);
    m1 += l;
    m2 += l * l;
  }
  m1 /= static_cast<double>(ratios.size());
  m2 /= static_cast<double>(ratios.size());
  return moment_formula(m1, m2);
}

double residual_estimator(std::span<const double> ratios, const RealFunction& theta) {
  if (ratios.empty()) throw DomainError("residual_estimator: empty input");
  double s = 0.0;
  for (double r : ratios) {
    const double y = theta(r);
    if (!std::isfinite(y)) throw NumericError("residual_estimator: theta not finite");
    s += y;
  }
  return s / static_cast<double>(ratios.size());
}

EviEstimate benchmark_hill(const TailView& view) {
  const double p_hat = uncensored_fraction(view);
  if (p_hat <= 0.0) {
    throw DegenerateEstimateError("benchmark_hill: all top-k observations censored");
  }
  double hill = 0.0;
  for (double r : view.ratios) hill += std::log(r);
  hill /= static_cast<double>(view.k);
  EviEstimate e;
  e.gamma_hat = hill / p_hat;
  e.k = view.k;
  e.n = view.n;
  e.id = EstimatorId::hill_benchmark;
  e.mda_label = classify_mda(e.gamma_hat);
  return e;
}

EviEstimate benchmark_moment(const TailView& view) {
  const double p_hat = uncensored_fraction(view);
  if (p_hat <= 0.0) {
    throw DegenerateEstimateError("benchmark_moment: all top-k observations censored");
  }
  EviEstimate e;
  e.gamma_hat = moment_uncensored(view.ratios) / p_hat;
  e.k = view.k;
  e.n = view.n;
  e.id = EstimatorId::moment_benchmark;
  e.mda_label = classify_mda(e.gamma_hat);
  return e;
}

}  // namespace cekm
