#pragma once

#include <optional>
#include <span>
#include <string>

#include "cekm/censored_data.hpp"
#include "cekm/ekm.hpp"

namespace cekm {

enum class EstimatorId {
  hill_censored,
  moment_censored,
  hill_benchmark,
  moment_benchmark,
  moment_uncensored,
};

enum class MdaLabel { frechet, gumbel, weibull };

std::string to_string(EstimatorId id);
std::string to_string(MdaLabel label);

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;
};

// Point estimate of the extreme value index with optional inference fields.
struct EviEstimate {
  double gamma_hat = 0.0;
  std::size_t k = 0;
  std::size_t n = 0;
  EstimatorId id = EstimatorId::hill_censored;
  bool normalized = false;
  std::optional<double> variance_hat;
  std::optional<ConfidenceInterval> ci;
  std::optional<MdaLabel> mda_label;
};

// Fréchet / Gumbel / Weibull by the sign of gamma_hat, with a neighborhood of
// zero of the given radius classified as Gumbel.
MdaLabel classify_mda(double gamma_hat, double radius = 0.2);

// Product-limit Hill estimator S_{k,n}(log); divided by the total mass
// S_{k,n}(1) when `normalized`. Throws DegenerateEstimateError when every
// top-k observation is censored.
EviEstimate hill_censored(const TailView& view, bool normalized = false);

// S_{k,n}(log^r), optionally normalized; r = 1 coincides with the
// unnormalized/normalized Hill estimator above.
double log_moment(const TailView& view, int r, bool normalized = false);

// Censored moment estimator, valid in every max-domain of attraction:
//   g = M1 + 1 - (1/2) / (1 - M1^2 / M2)
// with M_r the (normalized) product-limit log-moments.
EviEstimate moment_censored(const TailView& view, bool normalized = false);

// Classical moment estimator from plain averages of log ratios.
double moment_uncensored(std::span<const double> ratios);

// Plain average (1/k) sum theta(r_i) over normalized top order statistics.
double residual_estimator(std::span<const double> ratios, const RealFunction& theta);

// Censoring-adapted comparators: classical estimator on the observed ratios
// divided by the top-k non-censoring proportion p_hat.
EviEstimate benchmark_hill(const TailView& view);
EviEstimate benchmark_moment(const TailView& view);

}  // namespace cekm
