#pragma once

#include <functional>

#include "cekm/censored_data.hpp"
#include "cekm/step_cdf.hpp"

namespace cekm {

using RealFunction = std::function<double(double)>;

// Product-limit estimator of the event cdf:
//   1 - F_n(x) = prod_{i=1..n} [1 - delta_{[i:n]}/(n-i+1)]^{I(Z_{i,n} <= x)}.
// Knots sit at distinct uncensored values; censored points carry no mass.
StepCdf km_estimate(const SortedCensoredSample& sorted);

// Integral of phi against the product-limit measure (sum over jumps).
double km_integral(const SortedCensoredSample& sorted, const RealFunction& phi);

}  // namespace cekm
