#include "cekm/ekm.hpp"

#include <cmath>
#include <map>

#include "cekm/errors.hpp"

namespace cekm {

EkmWeights ekm_weights(const TailView& view) {
  const std::size_t k = view.k;
  if (k == 0) throw DomainError("ekm_weights: empty view");
  EkmWeights w;
  w.omega.resize(k);
  // Backward pass: prefix = prod_{j=i+1..k} ((j-1)/j)^{delta_j}. The partial
  // products are bounded below by i/k, so plain multiplication cannot
  // underflow and keeps the small hand-checkable cases exact.
  double prefix = 1.0;
  double sum = 0.0;
  for (std::size_t idx = k; idx-- > 0;) {
    const double i = static_cast<double>(idx + 1);
    w.omega[idx] = view.delta_top[idx] ? prefix / i : 0.0;
    sum += w.omega[idx];
    if (view.delta_top[idx]) prefix *= (i - 1.0) / i;
  }
  w.total_mass = sum;
  return w;
}

double ekm_integral(const TailView& view, const RealFunction& phi) {
  const EkmWeights w = ekm_weights(view);
  double sum = 0.0;
  for (std::size_t i = 0; i < view.k; ++i) {
    if (w.omega[i] == 0.0) continue;
    const double y = phi(view.ratios[i]);
    if (!std::isfinite(y)) {
      throw NumericError("ekm_integral: phi not finite at a weighted ratio");
    }
    sum += w.omega[i] * y;
  }
  return sum;
}

StepCdf ekm_cdf(const TailView& view) {
  const EkmWeights w = ekm_weights(view);
  // Ratios arrive nonincreasing; accumulate ascending and merge exact ties.
  std::vector<double> knots, values;
  double cum = 0.0;
  for (std::size_t idx = view.k; idx-- > 0;) {
    if (w.omega[idx] == 0.0) continue;
    cum += w.omega[idx];
    if (!knots.empty() && knots.back() == view.ratios[idx]) {
      values.back() = cum;
    } else {
      knots.push_back(view.ratios[idx]);
      values.push_back(cum);
    }
  }
  return StepCdf(std::move(knots), std::move(values));
}

double ekm_total_mass(const TailView& view) { return ekm_weights(view).total_mass; }

}  // namespace cekm
