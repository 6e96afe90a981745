#pragma once

#include "cekm/censored_data.hpp"
#include "cekm/kaplan_meier.hpp"
#include "cekm/step_cdf.hpp"

namespace cekm {

// Jump weights of the product-limit estimator on the normalized top-k order
// statistics. omega[i] matches ratios[i] of the originating view (i = 0 is
// the largest ratio):
//   omega_i = (delta_i / i) * prod_{j=i+1..k} ((j-1)/j)^{delta_j},  i 1-based,
// with the convention 0^0 = 1. Censored positions carry weight zero, and the
// total mass telescopes to 1 - prod_{i=1..k} (1 - delta_i/i).
struct EkmWeights {
  std::vector<double> omega;
  double total_mass = 0.0;
};

EkmWeights ekm_weights(const TailView& view);

// Integral of phi against the top-k product-limit measure:
// sum_i omega_i * phi(ratios[i]). phi is only evaluated where omega_i > 0.
double ekm_integral(const TailView& view, const RealFunction& phi);

// The estimator itself as a step cdf on [1, inf): knots at weighted ratios in
// ascending order, values the cumulative weight.
StepCdf ekm_cdf(const TailView& view);

// Mass at infinity, used as the normalizer of normalized estimators.
double ekm_total_mass(const TailView& view);

}  // namespace cekm
